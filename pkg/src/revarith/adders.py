"""Adder family built on the carry networks.

In-place addition follows the ten-line complement-uncompute recipe: compute
the generate bits, merge propagates into ``y``, run a carry network, write
the sum, then complement the sum bits and run the network backward, which
dissolves the carries back into leaf products that one Toffoli layer wipes.
The erase pass borrows a zeroed wire as its top propagate leaf so the
leading carry survives on its own qubit.

Out-of-place addition skips the erase pass entirely: the carry column is
the output register, so the forward network plus one CNOT writeback is the
whole circuit.

Controlled and constant variants reshape individual lines (Toffoli for
CNOT, classically-elided X for controlled X) rather than wrapping the whole
block, keeping the overhead to a fanout of the control plus a handful of
per-bit gates.  The controlled in-place form complements every sum bit,
copies the leading carry to a fresh qubit, and repairs bit 0 with one
off-control Toffoli; its gate bill is derived in the module tests rather
than quoted.

The comparator computes only the leading carry of ``x + ~y``: an up-sweep
combine tree whose generate updates land on AND ancillas first, so the
whole down-sweep is measurement-assisted uncomputation and the Toffoli
bill is the forward sweep alone.  One spine combine is chained through two
steps instead of one span product, which trims the propagate AND count to
exactly n - ceil(log2(n-1)) - 2.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .ir import (
    CLASSICAL_FANOUT,
    CNOT,
    COMPUTE_AND,
    CSWAP,
    PAULI_X,
    SWAP,
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
from .prefix import CarryNetworkKind, _down_rounds, _log2_floor, _make_net, carry_cost
from .schedule import Scheduler


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def _fanout_cnots(m: int) -> int:
    return -(-3 * m // 2)


def _bit(value: int, i: int) -> int:
    return (value >> i) & 1


# -- variant description ----------------------------------------------------


class AdderPlacement(enum.Enum):
    InPlace = "in-place"
    OutPlace = "out-place"


@dataclass(frozen=True)
class AdderVariant:
    """Which adder to build: placement, optional control, optional constant.

    ``constant=None`` is the quantum-operand form; an integer makes the
    second operand classical, which strips the ``x`` register and turns the
    x-controlled gates into classically-conditioned ones.
    """

    placement: AdderPlacement
    controlled: bool = False
    constant: int | None = None


@dataclass(frozen=True)
class AdderLedgerParams:
    """Carry-network ledger symbols every adder formula is stated in."""

    d_t: int
    n_t: int
    d_c: int
    n_c: int
    s_a: int


def ledger_params(kind: CarryNetworkKind, n: int,
                  exact: bool = False) -> AdderLedgerParams:
    led = carry_cost(kind, n, exact=exact)
    return AdderLedgerParams(d_t=led.toffoli_depth, n_t=led.toffoli_count,
                             d_c=led.cnot_depth, n_c=led.cnot_count,
                             s_a=led.ancillas)


# -- in-place emitters -------------------------------------------------------
#
# All four flavors share the wire roles: x (absent for constants), y holds
# the sum afterwards, gw[i] is the carry out of position i and ends zero
# except gw[n-1].  Lines are fenced so stage depths add.


def _emit_forward_net(sink, alloc: Alloc, kind: CarryNetworkKind,
                      leaves: list, gw: list) -> None:
    net = _make_net(kind, alloc, leaves, gw)
    net.emit_forward(sink)
    net.emit_teardown(sink)


def _emit_erase_net(sink, alloc: Alloc, kind: CarryNetworkKind,
                    leaves: list, gw: list, keep_top: bool) -> None:
    """Backward pass dissolving the carries against the current leaves.

    With ``keep_top`` the top propagate leaf is swapped for a borrowed zero
    wire, so every peel controlled through that leaf goes dead and gw[n-1]
    comes out untouched.  The pass never writes leaves, so the borrowed
    wire returns to the pool still clean.
    """
    if keep_top:
        zl = alloc.take1()
        net = _make_net(kind, alloc, leaves[:-1] + [zl], gw)
        net.emit_backward(sink)
        alloc.give1(zl)
    else:
        net = _make_net(kind, alloc, leaves, gw)
        net.emit_backward(sink)


def _emit_inplace_plain(sink, alloc: Alloc, kind: CarryNetworkKind,
                        x: tuple, y: tuple, gw: tuple) -> None:
    n = len(x)
    for i in range(n):
        sink.emit(COMPUTE_AND, (x[i], y[i]), (gw[i],))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(gw))
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (gw[i - 1],), (y[i],))
    for i in range(n - 1):
        sink.emit(PAULI_X, (), (y[i],))
    for i in range(1, n - 1):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    _emit_erase_net(sink, alloc, kind, list(y), list(gw), keep_top=True)
    emit_barrier(sink)
    for i in range(1, n - 1):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)  # keeps the wipe to a single Toffoli layer
    for i in range(n - 1):
        sink.emit(TOFFOLI, (x[i], y[i]), (gw[i],))
    for i in range(n - 1):
        sink.emit(PAULI_X, (), (y[i],))


def _emit_inplace_constant(sink, alloc: Alloc, kind: CarryNetworkKind,
                           value: int, y: tuple, gw: tuple) -> None:
    n = len(y)
    # generate bits of a classical addend: bare copies where the bit is set
    for i in range(n):
        if _bit(value, i):
            sink.emit(CNOT, (y[i],), (gw[i],))
    emit_barrier(sink)
    for i in range(n):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(gw))
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (gw[i - 1],), (y[i],))
    for i in range(n - 1):
        sink.emit(PAULI_X, (), (y[i],))
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
    emit_barrier(sink)
    _emit_erase_net(sink, alloc, kind, list(y), list(gw), keep_top=True)
    emit_barrier(sink)
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
    for i in range(n - 1):
        if _bit(value, i):
            sink.emit(CNOT, (y[i],), (gw[i],))
    for i in range(n - 1):
        sink.emit(PAULI_X, (), (y[i],))


def _emit_inplace_controlled(sink, alloc: Alloc, kind: CarryNetworkKind,
                             x: tuple, y: tuple, gw: tuple, cp: tuple,
                             z: int) -> None:
    """Controlled in-place add; ``cp`` are fanout copies of the control.

    Generate bits and the carry network run unconditionally in both
    branches; the erase pass dissolves the carries either way because the
    complement lines 5/6 cover the full width here, so the off branch peels
    straight back to the leaf products.  The price of strict off-branch
    identity: a full-width paid wipe layer, one carry-copy Toffoli, and an
    off-control repair of the unconditionally flipped bit 0.
    """
    n = len(x)
    for i in range(n):
        sink.emit(COMPUTE_AND, (x[i], y[i]), (gw[i],))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(gw))
    emit_barrier(sink)
    # carry-out copy shares the gated-writeback layer
    sink.emit(TOFFOLI, (cp[0], gw[n - 1]), (z,))
    for i in range(1, n):
        sink.emit(TOFFOLI, (cp[i], gw[i - 1]), (y[i],))
    emit_barrier(sink)
    sink.emit(PAULI_X, (), (y[0],))
    for i in range(1, n):
        sink.emit(CNOT, (cp[i],), (y[i],))
    for i in range(1, n):
        sink.emit(TOFFOLI, (cp[i], x[i]), (y[i],))
    emit_barrier(sink)
    _emit_erase_net(sink, alloc, kind, list(y), list(gw), keep_top=False)
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(TOFFOLI, (x[i], y[i]), (gw[i],))
    emit_barrier(sink)
    sink.emit(PAULI_X, (), (y[0],))
    for i in range(1, n):
        sink.emit(CNOT, (cp[i],), (y[i],))
    # off branch left y[0] at p0; add x0 back only when the control is off
    sink.emit(PAULI_X, (), (cp[0],))
    sink.emit(TOFFOLI, (cp[0], x[0]), (y[0],))
    sink.emit(PAULI_X, (), (cp[0],))


def _emit_inplace_controlled_constant(sink, alloc: Alloc,
                                      kind: CarryNetworkKind, value: int,
                                      y: tuple, gw: tuple,
                                      cp: tuple) -> None:
    """Controlled constant add: the off branch is self-cleaning.

    Gating only the generate bits forces every carry to zero when the
    control is off, so the network, the writeback CNOTs, and the erase pass
    are all no-ops there and need no control of their own.
    """
    n = len(y)
    for i in range(n):
        if _bit(value, i):
            sink.emit(COMPUTE_AND, (cp[i], y[i]), (gw[i],))
    emit_barrier(sink)
    for i in range(n):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(gw))
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (gw[i - 1],), (y[i],))
    for i in range(n - 1):
        sink.emit(CNOT, (cp[i],), (y[i],))
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    emit_barrier(sink)
    _emit_erase_net(sink, alloc, kind, list(y), list(gw), keep_top=True)
    emit_barrier(sink)
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    emit_barrier(sink)
    for i in range(n - 1):
        if _bit(value, i):
            sink.emit(TOFFOLI, (cp[i], y[i]), (gw[i],))
    for i in range(n - 1):
        sink.emit(CNOT, (cp[i],), (y[i],))


# -- out-of-place emitters ----------------------------------------------------


def _emit_outplace_plain(sink, alloc: Alloc, kind: CarryNetworkKind,
                         x: tuple, y: tuple, s: tuple) -> None:
    n = len(x)
    for i in range(n):
        sink.emit(COMPUTE_AND, (x[i], y[i]), (s[i + 1],))
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(s[1:]))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(CNOT, (y[i],), (s[i],))
    sink.emit(CNOT, (x[0],), (s[0],))
    for i in range(1, n):
        sink.emit(CNOT, (x[i],), (y[i],))


def _emit_outplace_constant(sink, alloc: Alloc, kind: CarryNetworkKind,
                            value: int, y: tuple, s: tuple) -> None:
    n = len(y)
    for i in range(n):
        if _bit(value, i):
            sink.emit(CNOT, (y[i],), (s[i + 1],))
    emit_barrier(sink)
    for i in range(1, n):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(s[1:]))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(CNOT, (y[i],), (s[i],))
    if _bit(value, 0):
        sink.emit(PAULI_X, (), (s[0],))
    for i in range(1, n):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))


def _emit_outplace_controlled(sink, alloc: Alloc, kind: CarryNetworkKind,
                              x: tuple, y: tuple, s: tuple,
                              cp: tuple) -> None:
    # cp has n+1 copies; the spare one gates the s[0] writeback so it can
    # share the generate Toffoli layer.
    n = len(x)
    w = alloc.take(n)
    for i in range(n):
        sink.emit(COMPUTE_AND, (cp[i], x[i]), (w[i],))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(TOFFOLI, (w[i], y[i]), (s[i + 1],))
    sink.emit(TOFFOLI, (cp[n], x[0]), (s[0],))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(UNCOMPUTE_AND, (cp[i], x[i]), (w[i],))
    alloc.give(w)
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (x[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(s[1:]))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(TOFFOLI, (cp[i], y[i]), (s[i],))
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(CNOT, (x[i],), (y[i],))


def _emit_outplace_controlled_constant(sink, alloc: Alloc,
                                       kind: CarryNetworkKind, value: int,
                                       y: tuple, s: tuple,
                                       cp: tuple) -> None:
    n = len(y)
    for i in range(n):
        if _bit(value, i):
            sink.emit(COMPUTE_AND, (cp[i], y[i]), (s[i + 1],))
    emit_barrier(sink)
    for i in range(1, n):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(s[1:]))
    emit_barrier(sink)
    for i in range(n):
        sink.emit(TOFFOLI, (cp[i], y[i]), (s[i],))
    if _bit(value, 0):
        sink.emit(CNOT, (cp[n],), (s[0],))
    emit_barrier(sink)
    for i in range(1, n):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))


# -- public adder builders -----------------------------------------------------


def _check_variant(variant: AdderVariant, n: int) -> None:
    if n < 2:
        raise ValueError("adder needs n >= 2")
    if variant.constant is not None and not 0 <= variant.constant < (1 << n):
        raise ValueError("constant must fit in n bits")


def _work_register(alloc: Alloc, named: set) -> Register:
    rest = tuple(q for q in range(alloc.high_water) if q not in named)
    return Register("work", rest, "ancilla")


def build_adder(variant: AdderVariant, n: int,
                carry_kind: CarryNetworkKind) -> Circuit:
    """Build one member of the adder family.

    In-place: |x>|y> -> |x>|x+y mod 2^n> with the leading carry on its own
    output qubit.  Out-of-place: |x>|y>|0> -> |x>|y>|x+y> on n+1 sum wires.
    Controlled forms take a one-qubit ``ctrl`` register; constant forms
    drop the ``x`` register.
    """
    _check_variant(variant, n)
    alloc = Alloc()
    circ = Circuit(f"add-{variant.placement.value}-{carry_kind.value}-{n}")
    named: set = set()

    ctrl = None
    cp: tuple = ()
    if variant.controlled:
        ctrl = alloc.take1()
        circ.add_register(Register("ctrl", (ctrl,), "input"))
        named.add(ctrl)

    x: tuple = ()
    if variant.constant is None:
        x = alloc.take(n)
        circ.add_register(Register("x", x, "input"))
        named.update(x)

    if variant.placement is AdderPlacement.InPlace:
        y = alloc.take(n)
        gw = alloc.take(n)
        circ.add_register(Register("y", y, "input_output"))
        named.update(y)
        if variant.controlled and variant.constant is None:
            z = alloc.take1()
            circ.add_register(Register("carry", (z,), "output"))
            named.add(z)
        else:
            circ.add_register(Register("carry", (gw[n - 1],), "output"))
            named.add(gw[n - 1])
        if variant.controlled:
            cp = alloc.take(n)
            emit_fanout(circ, ctrl, cp)
            emit_barrier(circ)
        if variant.controlled and variant.constant is None:
            _emit_inplace_controlled(circ, alloc, carry_kind, x, y, gw, cp, z)
        elif variant.controlled:
            _emit_inplace_controlled_constant(circ, alloc, carry_kind,
                                              variant.constant, y, gw, cp)
        elif variant.constant is None:
            _emit_inplace_plain(circ, alloc, carry_kind, x, y, gw)
        else:
            _emit_inplace_constant(circ, alloc, carry_kind, variant.constant,
                                   y, gw)
    else:
        y = alloc.take(n)
        s = alloc.take(n + 1)
        circ.add_register(Register("y", y, "input"))
        circ.add_register(Register("sum", s, "output"))
        named.update(y)
        named.update(s)
        if variant.controlled:
            cp = alloc.take(n + 1)
            emit_fanout(circ, ctrl, cp)
            emit_barrier(circ)
        if variant.controlled and variant.constant is None:
            _emit_outplace_controlled(circ, alloc, carry_kind, x, y, s, cp)
        elif variant.controlled:
            _emit_outplace_controlled_constant(circ, alloc, carry_kind,
                                               variant.constant, y, s, cp)
        elif variant.constant is None:
            _emit_outplace_plain(circ, alloc, carry_kind, x, y, s)
        else:
            _emit_outplace_constant(circ, alloc, carry_kind, variant.constant,
                                    y, s)

    if variant.controlled:
        emit_barrier(circ)
        emit_unfanout(circ, ctrl, cp)
        alloc.give(cp)

    circ.add_register(_work_register(alloc, named))
    circ.n_qubits = alloc.high_water
    return circ


def build_subtractor(n: int,
                     carry_kind: CarryNetworkKind = CarryNetworkKind.BrentKung
                     ) -> Circuit:
    """|x>|y> -> |x>|x-y mod 2^n>, an X-conjugated in-place adder.

    Conjugating x by X turns the sum into y + ~x, and complementing that
    gives x - y.  The borrow qubit ends at [y > x].  X gates stay out of
    every ledger column, so the bill is the in-place adder's exactly.
    """
    if n < 2:
        raise ValueError("subtractor needs n >= 2")
    alloc = Alloc()
    circ = Circuit(f"sub-{carry_kind.value}-{n}")
    x = alloc.take(n)
    y = alloc.take(n)
    gw = alloc.take(n)
    circ.add_register(Register("x", x, "input"))
    circ.add_register(Register("y", y, "input_output"))
    circ.add_register(Register("borrow", (gw[n - 1],), "output"))
    named = set(x) | set(y) | {gw[n - 1]}
    for q in x:
        circ.emit(PAULI_X, (), (q,))
    _emit_inplace_plain(circ, alloc, carry_kind, x, y, gw)
    for q in x:
        circ.emit(PAULI_X, (), (q,))
    for q in y:
        circ.emit(PAULI_X, (), (q,))
    circ.add_register(_work_register(alloc, named))
    circ.n_qubits = alloc.high_water
    return circ


# -- carry-gated constant addition ---------------------------------------------
#
# The constant in-place adder split after its carry network, with the tail
# controlled by the adder's own leading carry.  Used for modular reduction:
# with value = 2^n - p the carry is exactly [y >= p], so the writeback runs
# precisely when a reduction is due and unwinds to the identity otherwise.
# The flag survives on the top carry wire for a later comparator to clear.


def _emit_gated_constant_head(sink, alloc: Alloc, kind: CarryNetworkKind,
                              value: int, y: tuple, gw: tuple) -> None:
    n = len(y)
    for i in range(n):
        if _bit(value, i):
            sink.emit(CNOT, (y[i],), (gw[i],))
    emit_barrier(sink)
    for i in range(n):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
    emit_barrier(sink)
    _emit_forward_net(sink, alloc, kind, list(y), list(gw))
    emit_barrier(sink)


def _emit_gated_constant_tail(sink, alloc: Alloc, kind: CarryNetworkKind,
                              value: int, y: tuple, gw: tuple) -> None:
    n = len(y)
    cp = alloc.take(n - 1)
    emit_fanout(sink, gw[n - 1], cp)
    emit_barrier(sink)
    for i in range(1, n):
        sink.emit(TOFFOLI, (cp[i - 1], gw[i - 1]), (y[i],))
    emit_barrier(sink)
    for i in range(n - 1):
        sink.emit(CNOT, (cp[i],), (y[i],))
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    emit_barrier(sink)
    # Off branch: nothing above fired, the leaves match the head's, and the
    # backward net is its exact inverse, so the carries peel to the leaf
    # generate bits either way.
    _emit_erase_net(sink, alloc, kind, list(y), list(gw), keep_top=True)
    emit_barrier(sink)
    for i in range(1, n - 1):
        if _bit(value, i):
            sink.emit(CNOT, (cp[i],), (y[i],))
    off = []
    for i in range(n - 1):
        if _bit(value, i):
            # on branch the wire holds the complemented sum bit, off branch
            # the leaf generate; one data CNOT plus one off-control CNOT
            # zeroes both.
            sink.emit(CNOT, (y[i],), (gw[i],))
            off.append(i)
    for i in off:
        sink.emit(PAULI_X, (), (cp[i],))
    for i in off:
        sink.emit(CNOT, (cp[i],), (gw[i],))
    for i in off:
        sink.emit(PAULI_X, (), (cp[i],))
    emit_barrier(sink)
    for i in range(n - 1):
        if _bit(value, i):
            sink.emit(PAULI_X, (), (y[i],))
        else:
            sink.emit(CNOT, (cp[i],), (y[i],))
    if _bit(value, n - 1):
        sink.emit(PAULI_X, (), (cp[n - 2],))
        sink.emit(CNOT, (cp[n - 2],), (y[n - 1],))
        sink.emit(PAULI_X, (), (cp[n - 2],))
    emit_barrier(sink)
    emit_unfanout(sink, gw[n - 1], cp)
    alloc.give(cp)


def build_self_gated_constant_add(value: int, n: int,
                                  carry_kind: CarryNetworkKind
                                  ) -> tuple[Circuit, Circuit]:
    """Two half-circuits on a shared wire layout for gated constant adds.

    The head computes the carries of y + value and stops; the tail, run on
    the same wires, finishes the addition when the leading carry is set and
    undoes the head otherwise.  Between the halves the carry register is
    live data.  After the tail, y holds y + value mod 2^n (or y), carries
    below the top are clean, and the top carry keeps the gate flag.
    """
    if n < 2:
        raise ValueError("gated constant add needs n >= 2")
    if not 0 <= value < (1 << n):
        raise ValueError("constant must fit in n bits")
    alloc = Alloc()
    head = Circuit(f"gated-add-head-{carry_kind.value}-{n}")
    y = alloc.take(n)
    gw = alloc.take(n)
    head.add_register(Register("y", y, "input_output"))
    head.add_register(Register("carry", gw, "garbage"))
    named = set(y) | set(gw)
    _emit_gated_constant_head(head, alloc, carry_kind, value, y, gw)
    head.add_register(_work_register(alloc, named))
    head.n_qubits = alloc.high_water

    tail = Circuit(f"gated-add-tail-{carry_kind.value}-{n}")
    tail.add_register(Register("y", y, "input_output"))
    tail.add_register(Register("carry", gw, "input_output"))
    _emit_gated_constant_tail(tail, alloc, carry_kind, value, y, gw)
    tail.add_register(_work_register(alloc, named))
    tail.n_qubits = alloc.high_water
    return head, tail


# -- comparator -----------------------------------------------------------------


class ComparatorMode(enum.Enum):
    Full = "full"
    Half1 = "half1"
    Half2 = "half2"


class _CompareForward:
    """Forward sweep computing the leading carry of x + ~y into gw[n-1].

    Records every gate so the backward stream can be replayed with or
    without the gates that feed the kept output wire.  Generate updates go
    through AND ancillas (one per combine), making the whole backward
    stream uncomputation plus CNOTs.
    """

    def __init__(self, alloc: Alloc, x: tuple, y: tuple, gw: tuple,
                 constant: int | None) -> None:
        self.alloc = alloc
        self.x = x
        self.y = y
        self.gw = gw
        self.constant = constant
        self.n = len(gw)
        self.log: list = []
        self.wands: list = []
        self._build()

    def _gate(self, kind: int, controls: tuple, targets: tuple) -> None:
        self.log.append((kind, controls, targets))

    def _build(self) -> None:
        n, gw = self.n, self.gw
        if self.constant is None:
            x, y = self.x, self.y
            for i in range(n):
                self._gate(PAULI_X, (), (y[i],))
            for i in range(n):
                self._gate(COMPUTE_AND, (x[i], y[i]), (gw[i],))
            for i in range(1, n):
                self._gate(CNOT, (x[i],), (y[i],))
            self.p = y
        else:
            # compare against a constant: the complement lands on the
            # classical side, so x itself carries the propagate leaves
            x = self.x
            for i in range(n):
                if not _bit(self.constant, i):
                    self._gate(CNOT, (x[i],), (gw[i],))
            for i in range(n):
                if not _bit(self.constant, i):
                    self._gate(PAULI_X, (), (x[i],))
            self.p = x
        if n >= 2:
            self._combine(0, n, need_p=False, at_root=True)

    def _g_update(self, src: int, span: int, tgt: int) -> None:
        w = self.alloc.take1()
        self.wands.append(w)
        self._gate(COMPUTE_AND, (self.gw[src], span), (w,))
        self._gate(CNOT, (w,), (self.gw[tgt],))

    def _combine(self, lo: int, hi: int, need_p: bool, at_root: bool = False):
        """Emit the up-sweep for [lo, hi); returns the span wire if asked.

        The root combine is chained through the high part's halves when
        that part has width >= 2, trading one span product for one extra
        sweep layer.  Widths 2^j + 1 never chain; their ragged spine is
        already one product short of the balanced count.
        """
        width = hi - lo
        if width == 1:
            return self.p[lo]
        mid = lo + (1 << (_ceil_log2(width) - 1))
        if at_root and hi - mid >= 2:
            self._combine(lo, mid, need_p=False)
            m2 = mid + (1 << (_ceil_log2(hi - mid) - 1))
            p1 = self._combine(mid, m2, need_p=True)
            p2 = self._combine(m2, hi, need_p=True)
            self._g_update(mid - 1, p1, m2 - 1)
            self._g_update(m2 - 1, p2, hi - 1)
            return None
        pl = self._combine(lo, mid, need_p=need_p)
        pr = self._combine(mid, hi, need_p=True)
        self._g_update(mid - 1, pr, hi - 1)
        if need_p:
            ps = self.alloc.take1()
            self.wands.append(ps)
            self._gate(COMPUTE_AND, (pl, pr), (ps,))
            return ps
        return None

    def emit(self, sink) -> None:
        for kind, controls, targets in self.log:
            sink.emit(kind, controls, targets)

    def emit_backward(self, sink, keep_top: bool) -> None:
        top = self.gw[self.n - 1]
        for kind, controls, targets in reversed(self.log):
            if keep_top and targets[0] == top:
                continue
            if kind == COMPUTE_AND:
                sink.emit(UNCOMPUTE_AND, controls, targets)
            else:
                sink.emit(kind, controls, targets)


def build_comparator(mode: ComparatorMode, n: int, controlled: bool = False,
                     constant: int | None = None) -> Circuit:
    """Comparator |x>|y>|0> -> |x>|y>|z = [x > y]> and its two halves.

    The strict comparison is the leading carry of x + ~y.  Half1 stops
    after the forward sweep, leaving the combine scratch live for a caller
    to use the flag cheaply; Half2 is its exact inverse.  With ``constant``
    the y register disappears and z = [x > constant].
    """
    if n < 2:
        raise ValueError("comparator needs n >= 2")
    if constant is not None and not 0 <= constant < (1 << n):
        raise ValueError("constant must fit in n bits")
    alloc = Alloc()
    circ = Circuit(f"cmp-{mode.value}-{n}")
    named: set = set()

    ctrl = None
    if controlled:
        ctrl = alloc.take1()
        circ.add_register(Register("ctrl", (ctrl,), "input"))
        named.add(ctrl)
    x = alloc.take(n)
    named.update(x)
    if constant is None:
        y = alloc.take(n)
        named.update(y)
        circ.add_register(Register("x", x, "input"))
        dirty = "input_output" if mode is not ComparatorMode.Full else "input"
        circ.add_register(Register("y", y, dirty))
    else:
        y = ()
        dirty = "input_output" if mode is not ComparatorMode.Full else "input"
        circ.add_register(Register("x", x, dirty))
    gw = alloc.take(n)

    fwd = _CompareForward(alloc, x, y, gw, constant)
    if controlled:
        z = alloc.take1()
        named.add(z)
    else:
        z = gw[n - 1]
        named.add(z)
    circ.add_register(Register("z", (z,), "output"))

    fwd.emit(circ)
    if controlled:
        circ.emit(TOFFOLI, (ctrl, gw[n - 1]), (z,))
    if mode is ComparatorMode.Full:
        emit_barrier(circ)
        fwd.emit_backward(circ, keep_top=not controlled)

    scratch = tuple(q for q in range(alloc.high_water) if q not in named)
    if mode is ComparatorMode.Full:
        circ.add_register(Register("work", scratch, "ancilla"))
        circ.n_qubits = alloc.high_water
        return circ
    circ.add_register(Register("work", scratch, "garbage"))
    circ.n_qubits = alloc.high_water
    if mode is ComparatorMode.Half2:
        inv = circ.inverse(f"cmp-half2-{n}")
        return inv
    return circ


def comparator_toffoli_count(n: int, constant: bool = False,
                             controlled: bool = False) -> int:
    """Closed-form Toffoli bill of one comparator sweep.

    Leaf products n (zero for a classical operand), generate updates n-1,
    span products n - ceil(log2(n-1)) - 2, plus one for the gated output
    copy.  The backward sweep is free, so Full and Half1 price the same.
    """
    leaf = 0 if constant else n
    spans = n - _ceil_log2(n - 1) - 2 if n > 2 else 0
    return leaf + (n - 1) + spans + (1 if controlled else 0)


# -- bit-level primitives --------------------------------------------------------


class BitPrimitive(enum.Enum):
    CSwapRegisters = "cswap-registers"
    ShiftK = "shift-k"
    ControlledShift1 = "controlled-shift-1"


class ShiftDirection(enum.Enum):
    Left = "left"
    Right = "right"


def _emit_shift_left(circ: Circuit, data: tuple, b: tuple, c: tuple,
                     n: int, k: int, cswap_cp: tuple = ()) -> None:
    """Conveyor shift: k+1 hops of n swaps each, last hop brick-staggered.

    Data zig-zags between the register column and the scratch columns, one
    position per hop; even k detours through the second scratch column to
    keep the final hop landing back in the register.  Total n(k+1) swaps
    over k+2 swap layers.
    """

    def hop(frm, to, off_f, off_t, idx: range) -> None:
        for i in idx:
            if cswap_cp:
                circ.emit(CSWAP, (cswap_cp[i],),
                          (frm[i + off_f], to[i + off_t]))
            else:
                circ.emit(SWAP, (), (frm[i + off_f], to[i + off_t]))
        emit_barrier(circ)

    cols = [data, b]
    if k % 2 == 0:
        hops = [(cols[(j - 1) % 2], cols[j % 2], j - 1, j)
                for j in range(1, k)]
        hops.append((b, c, k - 1, k))
        final = c
    else:
        hops = [(cols[(j - 1) % 2], cols[j % 2], j - 1, j)
                for j in range(1, k + 1)]
        final = b
    for frm, to, off_f, off_t in hops:
        hop(frm, to, off_f, off_t, range(n))
    # parking hop, bricked into even and odd sublayers
    for i in range(0, n, 2):
        if cswap_cp:
            circ.emit(CSWAP, (cswap_cp[i],), (final[i + k], data[i + k]))
        else:
            circ.emit(SWAP, (), (final[i + k], data[i + k]))
    emit_barrier(circ)
    for i in range(1, n, 2):
        if cswap_cp:
            circ.emit(CSWAP, (cswap_cp[i],), (final[i + k], data[i + k]))
        else:
            circ.emit(SWAP, (), (final[i + k], data[i + k]))
    emit_barrier(circ)


def build_bit_primitive(kind: BitPrimitive, n: int, k: int = 1,
                        direction: ShiftDirection = ShiftDirection.Left
                        ) -> Circuit:
    """Register-level primitives: controlled swap and the shift conveyors.

    ShiftK widens the register to n+k wires and moves the value by k
    positions with n(k+1) SWAP gates in k+2 swap layers.  The controlled
    single-bit shift replaces each SWAP with a fanout-driven CSwap, 2n
    Toffolis total.  Right shifts are the left conveyor reversed; they
    assume the vacated low positions held zeros.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if kind is BitPrimitive.CSwapRegisters:
        alloc = Alloc()
        circ = Circuit(f"cswap-{n}")
        ctrl = alloc.take1()
        x = alloc.take(n)
        y = alloc.take(n)
        cp = alloc.take(n)
        circ.add_register(Register("ctrl", (ctrl,), "input"))
        circ.add_register(Register("x", x, "input_output"))
        circ.add_register(Register("y", y, "input_output"))
        circ.add_register(Register("work", cp, "ancilla"))
        emit_fanout(circ, ctrl, cp)
        emit_barrier(circ)
        for i in range(n):
            circ.emit(CNOT, (y[i],), (x[i],))
        emit_barrier(circ)
        for i in range(n):
            circ.emit(TOFFOLI, (cp[i], x[i]), (y[i],))
        emit_barrier(circ)
        for i in range(n):
            circ.emit(CNOT, (y[i],), (x[i],))
        emit_barrier(circ)
        emit_unfanout(circ, ctrl, cp)
        circ.n_qubits = alloc.high_water
        return circ

    if kind is BitPrimitive.ControlledShift1:
        k = 1
    if not 1 <= k < n:
        raise ValueError("shift needs 1 <= k < n")
    alloc = Alloc()
    circ = Circuit(f"shift-{kind.value}-{n}-{k}")
    cp: tuple = ()
    ctrl = None
    if kind is BitPrimitive.ControlledShift1:
        ctrl = alloc.take1()
        circ.add_register(Register("ctrl", (ctrl,), "input"))
    data = alloc.take(n + k)
    b = alloc.take(n + k)
    c = alloc.take(n + k) if k % 2 == 0 else ()
    circ.add_register(Register("x", data, "input_output"))
    scratch = b + c
    if ctrl is not None:
        cp = alloc.take(n)
        scratch = scratch + cp
        emit_fanout(circ, ctrl, cp)
        emit_barrier(circ)
    circ.add_register(Register("work", scratch, "ancilla"))
    _emit_shift_left(circ, data, b, c, n, k, cswap_cp=cp)
    if ctrl is not None:
        emit_unfanout(circ, ctrl, cp)
    circ.n_qubits = alloc.high_water
    if direction is ShiftDirection.Right:
        return circ.inverse(f"shift-right-{n}-{k}")
    return circ


# -- cost ledgers -----------------------------------------------------------------


_ADDER_COST_CACHE: dict = {}


def erase_depth(kind: CarryNetworkKind, n: int) -> int:
    """Toffoli depth of the backward carry pass, by network shape.

    The plain tree peels in the forward pattern reversed and lands on the
    forward depth.  The flat tree cannot overlap its rebuild with the
    descending peel, doubling the round count; the blocked network pays
    both block sweeps twice around its inter-block rounds plus the merge.
    """
    if kind is CarryNetworkKind.BrentKung:
        return _log2_floor(n) + _down_rounds(n)
    if kind is CarryNetworkKind.Sklansky:
        return 2 * (n - 1).bit_length()
    k = max(1, _log2_floor(n))
    m = -(-n // k)
    return 2 * (_log2_floor(k) + _down_rounds(k) + (m - 1).bit_length()) + 1


def adder_cost(variant: AdderVariant, n: int, carry_kind: CarryNetworkKind,
               exact: bool = False) -> CostLedger:
    """Resource ledger for one adder variant.

    The closed form composes the carry-network ledger with the per-line
    deltas; Toffoli columns are structurally exact, CNOT columns reuse the
    forward-network CNOT bill for the backward pass (the real erase pass
    spends a different number of synchronization copies, so exact mode
    measures).  ``exact=True`` builds and schedules the circuit, memoized.
    """
    _check_variant(variant, n)
    if exact:
        key = (variant, n, carry_kind)
        if key not in _ADDER_COST_CACHE:
            circ = build_adder(variant, n, carry_kind)
            s = Scheduler()
            circ.emit_into(s)
            m = s.metrics()
            anc = len(circ.registers["work"].qubits)
            _ADDER_COST_CACHE[key] = CostLedger.from_metrics(m).with_qubits(
                m.n_qubits, anc)
        return _ADDER_COST_CACHE[key]

    p = ledger_params(carry_kind, n)
    value = variant.constant
    wv = 0 if value is None else value.bit_count()
    wl = 0 if value is None else (value & ((1 << (n - 1)) - 1)).bit_count()
    b0 = 0 if value is None else _bit(value, 0)
    if variant.placement is AdderPlacement.InPlace:
        d_e = erase_depth(carry_kind, n)
        if variant.controlled and value is None:
            tof = 2 * p.n_t + 4 * n
            dep = p.d_t + d_e + 5
            cnot = 2 * p.n_c + _fanout_cnots(n) + n + 3 * (n - 1)
            anc = p.s_a + 2 * n
            qub = 4 * n + p.s_a + 2
        elif variant.controlled:
            tof = 2 * p.n_t + wv + wl
            dep = p.d_t + d_e + (2 if wv else 0)
            cnot = 2 * p.n_c + _fanout_cnots(n) + wv + 3 * (n - 1) + 2 * wl
            anc = p.s_a + 2 * n
            qub = 3 * n + p.s_a + 2
        elif value is not None:
            tof = 2 * p.n_t
            dep = p.d_t + d_e
            cnot = 2 * p.n_c + wv + (n - 1) + wl
            anc = p.s_a + n
            qub = 2 * n + p.s_a + 1
        else:
            tof = 2 * p.n_t + 2 * n - 1
            dep = p.d_t + d_e + 2
            cnot = 2 * p.n_c + 3 * n - 5
            anc = p.s_a + n
            qub = 3 * n + p.s_a + 1
    else:
        if variant.controlled and value is None:
            tof = p.n_t + 3 * n + 1
            dep = p.d_t + 3
            cnot = p.n_c + _fanout_cnots(n + 1) + 2 * (n - 1)
            anc = p.s_a + 2 * n + 1
            qub = 5 * n + p.s_a + 3
        elif variant.controlled:
            tof = p.n_t + wv + n
            dep = p.d_t + 2
            cnot = p.n_c + _fanout_cnots(n + 1) + 2 * (wv - b0) + b0
            anc = p.s_a + n + 1
            qub = 3 * n + p.s_a + 3
        elif value is not None:
            tof = p.n_t
            dep = p.d_t
            cnot = p.n_c + wv + n
            anc = p.s_a
            qub = 2 * n + p.s_a + 1
        else:
            tof = p.n_t + n
            dep = p.d_t + 1
            cnot = p.n_c + 3 * n - 1
            anc = p.s_a
            qub = 3 * n + p.s_a + 1
    return CostLedger(toffoli_count=tof, toffoli_depth=dep, cnot_count=cnot,
                      cnot_depth=p.d_c + 6, qubits=qub, ancillas=anc)
