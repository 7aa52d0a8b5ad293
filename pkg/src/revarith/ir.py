"""Gate-level representation for measurement-assisted reversible circuits.

Gates are identified by small integer kinds so that hot paths (simulation,
scheduling) can dispatch on plain ints.  A "sink" is anything with an
``emit(kind, controls, targets, tag=None)`` method; builders stream gates
into sinks so that large circuits never need to be stored.
"""
from __future__ import annotations

import enum
from array import array
from typing import Iterable, Iterator, NamedTuple

# Integer kind codes.  Kept as module-level constants because enum attribute
# access is too slow inside per-gate loops.
PAULI_X = 1
CNOT = 2
TOFFOLI = 3
COMPUTE_AND = 4
UNCOMPUTE_AND = 5
TOF_PRE_POST = 6
SWAP = 7
CSWAP = 8
MULTI_CONTROLLED_X = 9
CLASSICAL_FANOUT = 10
CLASSICAL_UNFANOUT = 11
ROTATION_PLACEHOLDER = 12
MEASURE_RESET = 13
BARRIER = 14


class GateKind(enum.IntEnum):
    """Public names for the gate kind codes."""

    PauliX = PAULI_X
    CNot = CNOT
    Toffoli = TOFFOLI
    ComputeAnd = COMPUTE_AND
    UncomputeAnd = UNCOMPUTE_AND
    TofPrePost = TOF_PRE_POST
    Swap = SWAP
    CSwap = CSWAP
    MultiControlledX = MULTI_CONTROLLED_X
    ClassicalFanout = CLASSICAL_FANOUT
    ClassicalUnfanout = CLASSICAL_UNFANOUT
    RotationPlaceholder = ROTATION_PLACEHOLDER
    MeasureReset = MEASURE_RESET
    Barrier = BARRIER


# kind -> inverse kind.  Ancilla-consuming AND pairs and classical fanout
# pairs invert into each other; everything else is self-inverse except the
# irreversible kinds, which map to 0 (inverting them is an error).
INVERSE_KIND = {
    PAULI_X: PAULI_X,
    CNOT: CNOT,
    TOFFOLI: TOFFOLI,
    COMPUTE_AND: UNCOMPUTE_AND,
    UNCOMPUTE_AND: COMPUTE_AND,
    TOF_PRE_POST: TOF_PRE_POST,
    SWAP: SWAP,
    CSWAP: CSWAP,
    MULTI_CONTROLLED_X: MULTI_CONTROLLED_X,
    CLASSICAL_FANOUT: CLASSICAL_UNFANOUT,
    CLASSICAL_UNFANOUT: CLASSICAL_FANOUT,
    # Placeholders are structural; inversion keeps the tag (which records the
    # nominal angle) and flips nothing.  Only measurement is irreversible.
    ROTATION_PLACEHOLDER: ROTATION_PLACEHOLDER,
    MEASURE_RESET: 0,
    BARRIER: BARRIER,
}

_KIND_NAMES = {int(k): k.name for k in GateKind}


class Gate(NamedTuple):
    kind: int
    controls: tuple
    targets: tuple
    tag: object = None

    @property
    def name(self) -> str:
        return _KIND_NAMES[self.kind]

    def __repr__(self) -> str:
        p = "" if self.tag is None else f", {self.tag!r}"
        return f"{self.name}({list(self.controls)}->{list(self.targets)}{p})"


class Register(NamedTuple):
    """A named, ordered group of qubits.  Index 0 is the least significant bit.

    roles: "input" (data consumed and preserved), "input_output" (data
    rewritten in place), "output" (starts zero, ends with the result),
    "ancilla" (starts and must end zero), "garbage" (starts zero, ends in an
    unspecified data-dependent state).
    """

    name: str
    qubits: tuple
    role: str = "ancilla"

    def __len__(self) -> int:
        return len(self.qubits)

    def __getitem__(self, i):
        return self.qubits[i]

    def value_of(self, bits: dict) -> int:
        v = 0
        for i, q in enumerate(self.qubits):
            v |= bits[q] << i
        return v


class Alloc:
    """Qubit allocator with a LIFO free list.

    Scratch qubits released with :meth:`give` are handed out again by the
    next :meth:`take`, most recently freed first.  Reuse keeps the qubit
    footprint equal to the live high-water mark, which is what the space
    accounting of every construction here is stated in terms of.
    """

    def __init__(self) -> None:
        self._free: list[int] = []
        self._next = 0

    @property
    def high_water(self) -> int:
        return self._next

    @property
    def live(self) -> int:
        return self._next - len(self._free)

    def take(self, k: int) -> tuple:
        out = []
        while k > 0 and self._free:
            out.append(self._free.pop())
            k -= 1
        if k:
            out.extend(range(self._next, self._next + k))
            self._next += k
        return tuple(out)

    def take1(self) -> int:
        if self._free:
            return self._free.pop()
        q = self._next
        self._next += 1
        return q

    def give(self, qs: Iterable[int]) -> None:
        self._free.extend(qs)

    def give1(self, q: int) -> None:
        self._free.append(q)

    def register(self, name: str, k: int, role: str = "ancilla") -> Register:
        return Register(name, self.take(k), role)


class Circuit:
    """Stored gate sequence.

    Gates live in a flat ``array('q')`` of ints plus an offsets array, about
    40 bytes per gate, so circuits with a few million gates stay cheap.
    Tags (rotation labels and similar annotations) are kept in a side
    table keyed by gate index; almost no gates carry one.
    """

    def __init__(self, name: str = "") -> None:
        self.name = name
        self.registers: dict[str, Register] = {}
        self.n_qubits = 0
        self._data = array("q")
        self._offs = array("q", [0])
        self._tags: dict[int, object] = {}

    # -- construction ---------------------------------------------------

    def add_register(self, reg: Register) -> Register:
        self.registers[reg.name] = reg
        if reg.qubits:
            self.n_qubits = max(self.n_qubits, max(reg.qubits) + 1)
        return reg

    def emit(self, kind: int, controls: tuple, targets: tuple, tag=None) -> None:
        d = self._data
        d.append(kind)
        d.append(len(controls))
        d.extend(controls)
        d.extend(targets)
        self._offs.append(len(d))
        if tag is not None:
            self._tags[len(self._offs) - 2] = tag

    append = emit

    # -- access ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._offs) - 1

    def gate(self, i: int) -> Gate:
        d = self._data
        lo, hi = self._offs[i], self._offs[i + 1]
        kind, nc = d[lo], d[lo + 1]
        qs = d[lo + 2 : hi]
        return Gate(kind, tuple(qs[:nc]), tuple(qs[nc:]), self._tags.get(i))

    def __iter__(self) -> Iterator[Gate]:
        for i in range(len(self)):
            yield self.gate(i)

    def counts_by_kind(self) -> dict:
        out: dict[str, int] = {}
        d, offs = self._data, self._offs
        for i in range(len(self)):
            name = _KIND_NAMES[d[offs[i]]]
            out[name] = out.get(name, 0) + 1
        return out

    # -- replay ---------------------------------------------------------

    def emit_into(self, sink, inverse: bool = False) -> None:
        d, offs = self._data, self._offs
        n = len(self)
        if not inverse:
            emit = sink.emit
            tags = self._tags
            for i in range(n):
                lo, hi = offs[i], offs[i + 1]
                kind, nc = d[lo], d[lo + 1]
                qs = tuple(d[lo + 2 : hi])
                if tags:
                    emit(kind, qs[:nc], qs[nc:], tags.get(i))
                else:
                    emit(kind, qs[:nc], qs[nc:])
        else:
            emit = sink.emit
            for i in range(n - 1, -1, -1):
                lo, hi = offs[i], offs[i + 1]
                kind, nc = d[lo], d[lo + 1]
                inv = INVERSE_KIND[kind]
                if not inv:
                    raise ValueError(f"gate kind {_KIND_NAMES[kind]} is not invertible")
                qs = tuple(d[lo + 2 : hi])
                emit(inv, qs[:nc], qs[nc:])

    def inverse(self, name: str = "") -> "Circuit":
        out = Circuit(name or (self.name + "_inv"))
        out.registers = dict(self.registers)
        out.n_qubits = self.n_qubits
        self.emit_into(out, inverse=True)
        return out


class Tee:
    """Fan a gate stream out to several sinks."""

    def __init__(self, *sinks) -> None:
        self.sinks = sinks

    def emit(self, kind, controls, targets, tag=None) -> None:
        for s in self.sinks:
            s.emit(kind, controls, targets, tag)


class Reversed:
    """Context manager that buffers emitted gates, then replays the exact
    inverse sequence into the wrapped sink on exit.

    Intended for small local blocks; anything with data-independent
    structure can be inverted this way without a hand-written inverse.
    """

    def __init__(self, sink) -> None:
        self._sink = sink
        self._buf: list = []

    def emit(self, kind, controls, targets, tag=None) -> None:
        self._buf.append((kind, controls, targets))

    def __enter__(self) -> "Reversed":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is not None:
            return
        emit = self._sink.emit
        inv = INVERSE_KIND
        for kind, c, t in reversed(self._buf):
            k2 = inv[kind]
            if not k2:
                raise ValueError("irreversible gate inside a Reversed block")
            emit(k2, c, t)
        self._buf.clear()


class CountSink:
    """Counts gates by kind without storing or scheduling them."""

    def __init__(self) -> None:
        self.counts: dict[int, int] = {}

    def emit(self, kind, controls, targets, tag=None) -> None:
        self.counts[kind] = self.counts.get(kind, 0) + 1

    def by_name(self) -> dict:
        return {_KIND_NAMES[k]: v for k, v in sorted(self.counts.items())}


def emit_copy(sink, src: int, dst: int) -> None:
    sink.emit(CNOT, (src,), (dst,))


def emit_fanout(sink, src: int, copies: tuple) -> None:
    """Copy one qubit onto several zeroed qubits.

    Single-target fanout degenerates to a plain CNOT; wider fanout is the
    measurement-assisted broadcast, emitted as one gate so schedulers can
    price it as a unit.
    """
    if len(copies) == 1:
        sink.emit(CNOT, (src,), copies)
    else:
        sink.emit(CLASSICAL_FANOUT, (src,), copies)


def emit_unfanout(sink, src: int, copies: tuple) -> None:
    if len(copies) == 1:
        sink.emit(CNOT, (src,), copies)
    else:
        sink.emit(CLASSICAL_UNFANOUT, (src,), copies)


def emit_barrier(sink) -> None:
    """Synchronization directive: no gate after the barrier may be scheduled
    before any gate emitted ahead of it.  Carries no qubits and no cost; it
    exists so that stages documented as simultaneous actually land on a
    common layer instead of being staggered by ASAP greediness.
    """
    sink.emit(BARRIER, (), ())
