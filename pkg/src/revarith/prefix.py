"""Parallel carry computation over propagate/generate wires.

Three network shapes are provided: a Brent-Kung tree, a Sklansky tree, and a
blocked hybrid that runs Brent-Kung inside ``k = floor(log2 n)``-bit blocks,
a Sklansky tree across the block boundaries, and a single merge layer that
lifts the interior block carries to global ones.

Wire conventions: the leaf register ``P0`` holds the per-position propagate
bits p_i, the ``G`` register starts with the generate bits g_i and ends with
the carries (entry i holds the carry *out of* position i, i.e. c_{i+1}).
Interval spans p[lo,hi) are computed into fresh ancillas with ComputeAnd and
keyed by their half-open interval.

The scheduler serializes gates that touch a common qubit, so any tree wire
read by two gates of the same intended layer goes through a copy CNOT
(restored afterwards), and wires read by a whole group go through a
ClassicalFanout.  Each network recycles copy wires through a private pool
with a one-round return delay: a freshly restored wire is not retaken for
the very next round, and pools are never shared between networks, so wire
reuse introduces no scheduling dependencies between parallel subtrees.
"""
from __future__ import annotations

import enum
from typing import NamedTuple

from .ir import (
    CNOT,
    COMPUTE_AND,
    TOFFOLI,
    UNCOMPUTE_AND,
    Alloc,
    Circuit,
    Register,
    emit_barrier,
    emit_fanout,
    emit_unfanout,
)
from .ledger import CostLedger
from .schedule import Scheduler


def weight(n: int) -> int:
    """Number of ones in the binary representation of n."""
    return n.bit_count()


def weight_sum(n: int) -> int:
    """Sum of weight(i) for 0 <= i < n, in O(log n) arithmetic.

    Splitting 0..2m-1 into pairs (2i, 2i+1) gives S(2m) = 2 S(m) + m, and
    appending the even number 2m gives S(2m+1) = S(2m) + weight(m).
    """
    if n <= 1:
        return 0
    m = n // 2
    s = 2 * weight_sum(m) + m
    if n % 2:
        s += weight(m)
    return s


class CarryNetworkKind(enum.Enum):
    BrentKung = "brent-kung"
    Sklansky = "sklansky"
    Hybrid = "hybrid"


class CarryRegisters(NamedTuple):
    P0: Register
    G: Register
    P1: Register
    P2: Register
    a: Register


def _log2_floor(n: int) -> int:
    return n.bit_length() - 1


def _down_rounds(width: int) -> int:
    # Largest t with 3 * 2^(t-1) <= width, i.e. floor(log2(2*width/3)).
    t = 0
    while 3 << t <= width:
        t += 1
    return t


class _BrentKung:
    """Brent-Kung tree over ``width`` consecutive leaf/carry wires.

    Up-sweep round t pairs the AND building span [2^t m, 2^t (m+1)) with the
    Toffoli feeding the carry wire at 2^t (m+1); both read the odd child
    span, so that operand is copied for the round.  Down-sweep round t pairs
    the prefix-extending AND with the Toffoli fixing the carry at
    2^t m + 2^(t-1); those share the even child span.  Prefix spans p[0,i)
    survive until teardown because callers read them.
    """

    def __init__(self, alloc: Alloc, leaves: list, gwires: list) -> None:
        self.alloc = alloc
        self.leaves = list(leaves)
        self.gw = list(gwires)
        self.width = len(self.leaves)
        self.l1 = _log2_floor(self.width) if self.width else 0
        self.l2 = _down_rounds(self.width)
        self.spans: dict[tuple, int] = {}
        self.up_spans: list[tuple] = []  # creation order
        self.down_spans: list[tuple] = []
        self.bank_p1: set[int] = set()
        self.bank_p2: set[int] = set()
        self.bank_a: set[int] = set()
        self._pool: list[int] = []
        self._ret: list[list[int]] = []

    def span(self, lo: int, hi: int) -> int:
        if hi == lo + 1:
            return self.leaves[lo]
        return self.spans[(lo, hi)]

    def _new_span(self, lo: int, hi: int, down: bool) -> int:
        q = self.alloc.take1()
        self.spans[(lo, hi)] = q
        if down:
            self.down_spans.append((lo, hi))
            self.bank_p2.add(q)
        else:
            self.up_spans.append((lo, hi))
            self.bank_p1.add(q)
        return q

    def _copy(self, sink, src: int) -> int:
        cq = self._pool.pop() if self._pool else self.alloc.take1()
        self.bank_a.add(cq)
        sink.emit(CNOT, (src,), (cq,))
        return cq

    def _restore(self, sink, copies: list) -> None:
        ws = []
        for cq, src in copies:
            sink.emit(CNOT, (src,), (cq,))
            ws.append(cq)
        if ws:
            self._ret.append(ws)
        while len(self._ret) > 1:
            self._pool.extend(self._ret.pop(0))

    def _up_geometry(self, t: int):
        # (even child, odd child, new span, carry control, carry target)
        half, full = 1 << (t - 1), 1 << t
        for m in range(self.width >> t):
            yield (
                (2 * m * half, (2 * m + 1) * half),
                ((2 * m + 1) * half, (2 * m + 2) * half),
                (m * full, (m + 1) * full),
                m * full + half - 1,
                m * full + full - 1,
            )

    def _down_geometry(self, t: int):
        # (prefix operand, even child, new prefix, carry control, carry target)
        half, full = 1 << (t - 1), 1 << t
        for m in range(1, ((self.width - half) >> t) + 1):
            yield (
                (0, m * full),
                (m * full, m * full + half),
                (0, m * full + half),
                m * full - 1,
                m * full + half - 1,
            )

    # -- forward -------------------------------------------------------

    def up_round(self, sink, t: int, held: list) -> list:
        rows = list(self._up_geometry(t))
        copies = [(self._copy(sink, self.span(*odd)), self.span(*odd)) for _, odd, _, _, _ in rows]
        for even, odd, new, _, _ in rows:
            sink.emit(COMPUTE_AND, (self.span(*even), self.span(*odd)), (self._new_span(*new, False),))
        for row, (cq, _) in zip(rows, copies):
            sink.emit(TOFFOLI, (self.gw[row[3]], cq), (self.gw[row[4]],))
        self._restore(sink, held)
        return copies

    def down_round(self, sink, t: int, held: list) -> list:
        rows = list(self._down_geometry(t))
        copies = [(self._copy(sink, self.span(*mid)), self.span(*mid)) for _, mid, _, _, _ in rows]
        for pre, mid, new, _, _ in rows:
            sink.emit(COMPUTE_AND, (self.span(*pre), self.span(*mid)), (self._new_span(*new, True),))
        for row, (cq, _) in zip(rows, copies):
            sink.emit(TOFFOLI, (self.gw[row[3]], cq), (self.gw[row[4]],))
        self._restore(sink, held)
        return copies

    def emit_forward(self, sink) -> None:
        held: list = []
        for t in range(1, self.l1 + 1):
            held = self.up_round(sink, t, held)
        for t in range(self.l2, 0, -1):
            held = self.down_round(sink, t, held)
        self._restore(sink, held)

    def emit_teardown(self, sink) -> None:
        """Uncompute every span, newest first, leaving only the carries."""
        for lo, hi in reversed(self.down_spans):
            self._unspan(sink, lo, hi)
        self.down_spans = []
        for lo, hi in reversed(self.up_spans):
            self._unspan(sink, lo, hi)
        self.up_spans = []

    def _unspan(self, sink, lo: int, hi: int) -> None:
        q = self.spans.pop((lo, hi))
        if lo == 0 and hi & (hi - 1):
            mid = hi - (hi & -hi)  # prefix spans split at the low set bit
        else:
            mid = lo + (hi - lo) // 2
        sink.emit(UNCOMPUTE_AND, (self.span(lo, mid), self.span(mid, hi)), (q,))
        self.alloc.give1(q)

    # -- primed backward pass (carry erasure for the in-place adder) ----

    def emit_backward(self, sink) -> None:
        """Re-run the tree on the current leaf values and peel the carries.

        The carry-wire gate stream is the exact inverse of the forward one:
        down-sweep Toffolis peel in ascending rounds while the up-sweep spans
        are rebuilt, then the up-sweep Toffolis peel in descending rounds.
        Each ascending round copies every operand span, so the rebuilt ANDs
        and the peel Toffolis see identical one-layer latency and the round
        lands on a single layer; the dead prefix re-ANDs (rebuilt only for
        gate-count symmetry) ride the descending peel layers.  Total Toffoli
        depth comes out equal to the forward pass.
        """
        for r in range(1, self.l1 + 1):
            emit_barrier(sink)
            up = list(self._up_geometry(r))
            down = list(self._down_geometry(r)) if r <= self.l2 else []
            copied: dict[tuple, int] = {}
            pairs: list = []
            for even, _, _, _, _ in up:
                copied[even] = cq = self._copy(sink, self.span(*even))
                pairs.append((cq, self.span(*even)))
            for _, mid, _, _, _ in down:
                if mid not in copied:
                    copied[mid] = cq = self._copy(sink, self.span(*mid))
                    pairs.append((cq, self.span(*mid)))
            uctl = []
            if r == self.l1:
                for _, odd, _, _, _ in up:
                    cq = self._copy(sink, self.span(*odd))
                    pairs.append((cq, self.span(*odd)))
                    uctl.append(cq)
            for even, odd, new, _, _ in up:
                sink.emit(COMPUTE_AND, (self.span(*even), self.span(*odd)), (self._new_span(*new, False),))
            for row in down:
                sink.emit(TOFFOLI, (self.gw[row[3]], copied[row[1]]), (self.gw[row[4]],))
            for row, ctl in zip(up, uctl):
                sink.emit(TOFFOLI, (self.gw[row[3]], ctl), (self.gw[row[4]],))
            if r == self.l1 and self.l2 == self.l1:
                # Top prefix rebuild shares the layer forced by the shared
                # carry wire between the down peel and the up peel.
                self.span_round_down(sink, self.l1)
            self._restore(sink, pairs)
        for t in range(self.l1 - 1, 0, -1):
            emit_barrier(sink)
            self.peel_round_up(sink, t)
            if t <= self.l2:
                self.span_round_down(sink, t)
        self.emit_teardown(sink)

    # Round-wise pieces the hybrid drives with global fences: spans first,
    # peels after the merge, so no spans are contended and copies are only
    # needed where the forward pass needed them.

    def span_round_up(self, sink, t: int) -> None:
        for even, odd, new, _, _ in self._up_geometry(t):
            sink.emit(COMPUTE_AND, (self.span(*even), self.span(*odd)), (self._new_span(*new, False),))

    def span_round_down(self, sink, t: int) -> None:
        for pre, mid, new, _, _ in self._down_geometry(t):
            sink.emit(COMPUTE_AND, (self.span(*pre), self.span(*mid)), (self._new_span(*new, True),))

    def peel_round_down(self, sink, r: int) -> None:
        for _, mid, _, ctl, tgt in self._down_geometry(r):
            sink.emit(TOFFOLI, (self.gw[ctl], self.span(*mid)), (self.gw[tgt],))

    def peel_round_up(self, sink, t: int) -> None:
        for _, odd, _, ctl, tgt in self._up_geometry(t):
            sink.emit(TOFFOLI, (self.gw[ctl], self.span(*odd)), (self.gw[tgt],))


class _Sklansky:
    """Sklansky tree over explicit leaf wire lists.

    Round t updates every wire whose index has bit t-1 set; the group of up
    to 2^(t-1) wires above a boundary all read the boundary's carry and
    span, which are fanned out for the round, while each member's own span
    feeds both its carry Toffoli and its widened span, hence a copy pair.
    """

    def __init__(self, alloc: Alloc, leaves: list, gwires: list) -> None:
        self.alloc = alloc
        self.leaves = list(leaves)
        self.gw = list(gwires)
        self.width = len(self.leaves)
        self.rounds = (self.width - 1).bit_length() if self.width >= 2 else 0
        self.spans: dict[tuple, int] = {}
        self.created: list[tuple] = []
        self.bank_p1: set[int] = set()
        self.bank_a: set[int] = set()
        self._pool: list[int] = []
        self._retcur: list[int] = []
        self._retprev: list[int] = []

    def span(self, lo: int, hi: int) -> int:
        if hi == lo + 1:
            return self.leaves[lo]
        return self.spans[(lo, hi)]

    def _groups(self, t: int):
        half = 1 << (t - 1)
        base = half
        while base < self.width:
            yield base, half, list(range(base, min(base + half, self.width)))
            base += half << 1

    def _new_span(self, lo: int, hi: int) -> int:
        q = self.alloc.take1()
        self.spans[(lo, hi)] = q
        self.created.append((lo, hi))
        self.bank_p1.add(q)
        return q

    def _take(self, k: int) -> list:
        out = []
        while self._pool and len(out) < k:
            out.append(self._pool.pop())
        if len(out) < k:
            out.extend(self.alloc.take(k - len(out)))
        self.bank_a.update(out)
        return out

    def _putback(self, ws: list) -> None:
        self._retcur.extend(ws)

    def _round_end(self) -> None:
        # Wires retired this round become reusable only after the next one,
        # so a retake never waits on a restore from the same layer.
        self._pool.extend(self._retprev)
        self._retprev = self._retcur
        self._retcur = []

    def _fan(self, sink, src: int, extra: int) -> list:
        if extra <= 0:
            return []
        copies = self._take(extra)
        emit_fanout(sink, src, tuple(copies))
        return copies

    def _unfan(self, sink, src: int, copies: list) -> None:
        if copies:
            emit_unfanout(sink, src, tuple(copies))
            self._putback(copies)

    def emit_forward(self, sink) -> None:
        # Every member reads broadcast copies and every broadcast has the
        # same width floor, so all of a round's Toffolis and ANDs see the
        # same operand latency and land on one layer regardless of how the
        # trailing group is truncated.
        for t in range(1, self.rounds + 1):
            for base, half, members in self._groups(t):
                gctl = self.gw[base - 1]
                sctl = self.span(base - half, base)
                gcop = self._fan(sink, gctl, max(2, len(members)))
                scop = self._fan(sink, sctl, max(2, len(members)))
                copies = self._take(len(members))
                for idx, i in enumerate(members):
                    sink.emit(CNOT, (self.span(base, i + 1),), (copies[idx],))
                for idx, i in enumerate(members):
                    sink.emit(TOFFOLI, (gcop[idx], copies[idx]), (self.gw[i],))
                for idx, i in enumerate(members):
                    sink.emit(
                        COMPUTE_AND,
                        (self.span(base, i + 1), scop[idx]),
                        (self._new_span(base - half, i + 1),),
                    )
                for idx, i in enumerate(members):
                    sink.emit(CNOT, (self.span(base, i + 1),), (copies[idx],))
                self._putback(copies)
                self._unfan(sink, sctl, scop)
                self._unfan(sink, gctl, gcop)
            self._round_end()

    def emit_teardown(self, sink) -> None:
        for lo, hi in reversed(self.created):
            q = self.spans.pop((lo, hi))
            base = lo + (1 << ((hi - 1 - lo).bit_length() - 1))
            sink.emit(UNCOMPUTE_AND, (self.span(base, hi), self.span(lo, base)), (q,))
            self.alloc.give1(q)
        self.created = []

    def bwd_spans(self, sink) -> None:
        for t in range(1, self.rounds + 1):
            emit_barrier(sink)
            for base, half, members in self._groups(t):
                sctl = self.span(base - half, base)
                scop = self._fan(sink, sctl, max(2, len(members)))
                for idx, i in enumerate(members):
                    sink.emit(
                        COMPUTE_AND,
                        (self.span(base, i + 1), scop[idx]),
                        (self._new_span(base - half, i + 1),),
                    )
                self._unfan(sink, sctl, scop)
            self._round_end()

    def bwd_peel(self, sink) -> None:
        # A group's control carry must be restored to its round-time partial
        # value before any group below reads it, which forces the rounds to
        # peel descending; with the span rebuild prepended the erase pass is
        # therefore about twice as deep as the forward pass.
        for t in range(self.rounds, 0, -1):
            emit_barrier(sink)
            for base, half, members in self._groups(t):
                gctl = self.gw[base - 1]
                gcop = self._fan(sink, gctl, max(2, len(members)))
                for idx, i in enumerate(members):
                    sink.emit(TOFFOLI, (gcop[idx], self.span(base, i + 1)), (self.gw[i],))
                self._unfan(sink, gctl, gcop)
            self._round_end()

    def emit_backward(self, sink) -> None:
        self.bwd_spans(sink)
        self.bwd_peel(sink)
        self.emit_teardown(sink)


class _Hybrid:
    """Blocked network: per-block Brent-Kung, Sklansky across block carries,
    then one Toffoli layer merging interior block carries with the global
    carry entering each block (fanned out to k-1 copies)."""

    def __init__(self, alloc: Alloc, leaves: list, gwires: list) -> None:
        self.alloc = alloc
        self.leaves = list(leaves)
        self.gw = list(gwires)
        n = len(self.leaves)
        self.k = max(1, _log2_floor(n))
        self.m = -(-n // self.k)
        self.blocks: list[_BrentKung] = []
        for i in range(self.m):
            lo = i * self.k
            w = min(self.k, n - lo)
            self.blocks.append(_BrentKung(alloc, self.leaves[lo : lo + w], self.gw[lo : lo + w]))
        self.inter: _Sklansky | None = None
        self.bank_a: set[int] = set()

    def _make_inter(self) -> _Sklansky:
        gl, sl = [], []
        for i, blk in enumerate(self.blocks):
            gl.append(self.gw[i * self.k + blk.width - 1])
            sl.append(blk.span(0, blk.width))
        net = _Sklansky(self.alloc, sl, gl)
        if self.inter is not None:
            # Hand the retired tree's copy pool and ledger over.
            self.bank_a |= self.inter.bank_a
            net._pool = self.inter._pool + self.inter._retprev + self.inter._retcur
        return net

    def _merge_pool(self) -> list[int]:
        # Copy wires retired by the blocks and the Sklansky tree are free by
        # now; behind the barrier reusing them costs no scheduling slack.
        ws: list[int] = []
        for blk in self.blocks:
            ws.extend(blk._pool)
            blk._pool = []
            for batch in blk._ret:
                ws.extend(batch)
            blk._ret = []
        if self.inter is not None:
            ws.extend(self.inter._pool + self.inter._retprev + self.inter._retcur)
            self.inter._pool = []
            self.inter._retprev = []
            self.inter._retcur = []
        return ws

    def _emit_merge(self, sink) -> None:
        # The block carries finalize at different Sklansky rounds, so without
        # a fence the per-block fanouts launch staggered and the merge smears
        # over several Toffoli layers.  The barrier plus a uniform 3-layer
        # broadcast (pad single-copy blocks to width 2) lands every merge
        # Toffoli on one shared layer.
        emit_barrier(sink)
        pool = self._merge_pool()
        taken: list[int] = []
        for i in range(1, self.m):
            blk = self.blocks[i]
            if blk.width < 2:
                continue
            ctl = self.gw[i * self.k - 1]
            need = max(2, blk.width - 1)
            copies = pool[:need]
            del pool[:need]
            if len(copies) < need:
                copies += self.alloc.take(need - len(copies))
            taken.extend(copies)
            self.bank_a.update(copies)
            emit_fanout(sink, ctl, tuple(copies))
            for j in range(1, blk.width):
                sink.emit(TOFFOLI, (copies[j - 1], blk.span(0, j)), (self.gw[i * self.k + j - 1],))
            emit_unfanout(sink, ctl, tuple(copies))
        self.alloc.give(taken + pool)

    def emit_forward(self, sink) -> None:
        # Rounds are fenced globally so a truncated tail block lands its
        # shallower tree on the same layers the full blocks use instead of
        # racing ahead onto layers of its own.
        held: list[list] = [[] for _ in self.blocks]
        for t in range(1, _log2_floor(self.k) + 1):
            if t > 1:
                emit_barrier(sink)
            for i, blk in enumerate(self.blocks):
                if t <= blk.l1:
                    held[i] = blk.up_round(sink, t, held[i])
        for t in range(_down_rounds(self.k), 0, -1):
            emit_barrier(sink)
            for i, blk in enumerate(self.blocks):
                if t <= blk.l2:
                    held[i] = blk.down_round(sink, t, held[i])
        for i, blk in enumerate(self.blocks):
            blk._restore(sink, held[i])
        emit_barrier(sink)
        self.inter = self._make_inter()
        self.inter.emit_forward(sink)
        self._emit_merge(sink)

    def emit_teardown(self, sink) -> None:
        self.inter.emit_teardown(sink)
        for blk in self.blocks:
            blk.emit_teardown(sink)

    def emit_backward(self, sink) -> None:
        # Peels run in exact reverse of the forward carry updates: merge
        # first, then the Sklansky rounds descending, then the block
        # interiors.  All spans must be rebuilt before the merge, and the
        # descending inter-block peel cannot overlap the rebuild, so unlike
        # the plain Brent-Kung tree the erase pass here is deeper than the
        # forward pass (see CostLedger notes on the in-place adder).
        for t in range(1, _log2_floor(self.k) + 1):
            emit_barrier(sink)
            for blk in self.blocks:
                if t <= blk.l1:
                    blk.span_round_up(sink, t)
        for t in range(_down_rounds(self.k), 0, -1):
            emit_barrier(sink)
            for blk in self.blocks:
                if t <= blk.l2:
                    blk.span_round_down(sink, t)
        emit_barrier(sink)
        self.inter = self._make_inter()
        self.inter.bwd_spans(sink)
        self._emit_merge(sink)
        emit_barrier(sink)
        self.inter.bwd_peel(sink)
        for r in range(1, _down_rounds(self.k) + 1):
            emit_barrier(sink)
            for blk in self.blocks:
                if r <= blk.l2:
                    blk.peel_round_down(sink, r)
        for t in range(_log2_floor(self.k), 0, -1):
            emit_barrier(sink)
            for blk in self.blocks:
                if t <= blk.l1:
                    blk.peel_round_up(sink, t)
        self.emit_teardown(sink)


_NETS = {
    CarryNetworkKind.BrentKung: _BrentKung,
    CarryNetworkKind.Sklansky: _Sklansky,
    CarryNetworkKind.Hybrid: _Hybrid,
}


def _make_net(kind: CarryNetworkKind, alloc: Alloc, leaves: list, gwires: list):
    return _NETS[kind](alloc, leaves, gwires)


def build_carry(kind: CarryNetworkKind, n: int) -> Circuit:
    """Carry network circuit on 2n data wires.

    P0 holds the propagate bits and is preserved; G starts with the generate
    bits and ends with the carries (entry i = carry out of position i).  All
    span and copy ancillas are returned to zero.
    """
    if n < 2:
        raise ValueError("carry network needs n >= 2")
    alloc = Alloc()
    circ = Circuit(f"carry-{kind.value}-{n}")
    p0 = Register("P0", alloc.take(n), "input")
    g = Register("G", alloc.take(n), "input_output")
    net = _make_net(kind, alloc, list(p0.qubits), list(g.qubits))
    net.emit_forward(circ)
    net.emit_teardown(circ)
    _attach_registers(circ, p0, g, net)
    return circ


def _collect_banks(net) -> tuple:
    if isinstance(net, _BrentKung):
        return set(net.bank_p1), set(net.bank_p2), set(net.bank_a)
    if isinstance(net, _Sklansky):
        return set(net.bank_p1), set(), set(net.bank_a)
    p1, p2, a = set(), set(), set(net.bank_a)
    for blk in net.blocks:
        p1 |= blk.bank_p1
        p2 |= blk.bank_p2
        a |= blk.bank_a
    if net.inter is not None:
        p1 |= net.inter.bank_p1
        a |= net.inter.bank_a
    return p1, p2, a


def _attach_registers(circ: Circuit, p0: Register, g: Register, net) -> None:
    p1, p2, a = _collect_banks(net)
    circ.add_register(p0)
    circ.add_register(g)
    circ.add_register(Register("P1", tuple(sorted(p1)), "ancilla"))
    circ.add_register(Register("P2", tuple(sorted(p2)), "ancilla"))
    circ.add_register(Register("a", tuple(sorted(a)), "ancilla"))


def carry_registers(circ: Circuit) -> CarryRegisters:
    """The five named registers of a build_carry circuit."""
    regs = circ.registers
    return CarryRegisters(regs["P0"], regs["G"], regs["P1"], regs["P2"], regs["a"])


# -- resource ledgers ----------------------------------------------------

_COST_CACHE: dict = {}


def _bk_count(w: int) -> int:
    return 0 if w < 2 else 4 * w - 2 * weight(w) - 2 * _log2_floor(w) - 2


def carry_cost(kind: CarryNetworkKind, n: int, exact: bool = False) -> CostLedger:
    """Resource ledger of the carry network.

    Measured mode (``exact=True``, and always for the two plain tree kinds)
    builds and schedules the real circuit, memoized per size.  The blocked
    network's estimate mode uses closed forms so parameter sweeps stay
    cheap: its Toffoli columns are structurally exact (asserted against
    measurement in the test suite), while the CNOT columns follow the
    analytic model, which omits the synchronization copies the built
    circuit spends to land every round on a shared layer, and the qubit
    columns follow the flat five-registers-of-n accounting.
    """
    if n < 2:
        raise ValueError("carry network needs n >= 2")
    if exact or kind is not CarryNetworkKind.Hybrid or n < 4:
        return _measured_carry(kind, n)
    k = max(1, _log2_floor(n))
    m = -(-n // k)
    tail = n - k * (m - 1)
    tof = (m - 1) * _bk_count(k) + _bk_count(tail) + 2 * weight_sum(m)
    tof += (m - 2) * (k - 1) + max(0, tail - 1)
    d_t = _log2_floor(k) + _down_rounds(k) + (m - 1).bit_length() + 1
    cn = m * _bk_count(k) + 2 * weight_sum(m) + (m * 3 * (k - 1) + 1) // 2
    return CostLedger(
        toffoli_count=tof,
        toffoli_depth=d_t,
        cnot_count=cn,
        cnot_depth=d_t + 3,
        qubits=5 * n,
        ancillas=3 * n,
    )


def _measured_carry(kind: CarryNetworkKind, n: int) -> CostLedger:
    key = (kind, n)
    if key not in _COST_CACHE:
        s = Scheduler()
        build_carry(kind, n).emit_into(s)
        m = s.metrics()
        _COST_CACHE[key] = CostLedger.from_metrics(m).with_qubits(
            m.n_qubits, m.n_qubits - 2 * n
        )
    return _COST_CACHE[key]
