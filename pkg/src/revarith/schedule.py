"""ASAP layering of gate streams with per-class depth and count tallies.

Cost classes follow the measurement-assisted ledger used throughout:

* Toffoli class: Toffoli, TofPrePost, and ComputeAnd each count one and
  occupy one layer.  UncomputeAnd is measurement plus classical feedback,
  so it occupies its qubits for a layer but contributes neither count nor
  class depth; an AND pair is priced entirely at compute time.
* CNOT class: plain CNOTs, plus the classical fanout broadcast, which
  spans three CNOT layers and counts ceil(3m/2) CNOTs for m copies.
  ClassicalUnfanout is the measurement-based undo: zero cost, like
  UncomputeAnd.
* Swap class: Swap only.  A raw CSwap decomposes as CNOT/Toffoli/CNOT and
  is priced that way; builders normally emit the decomposition themselves.
* PauliX, RotationPlaceholder, and MeasureReset occupy a layer but belong
  to no costed class.

A class's depth is the number of distinct layers containing at least one
gate of that class, so cheap interleaved layers (copies, fixups) do not
inflate the expensive depths.
"""
from __future__ import annotations

from dataclasses import dataclass

from .ir import (
    BARRIER,
    CLASSICAL_FANOUT,
    CLASSICAL_UNFANOUT,
    CNOT,
    COMPUTE_AND,
    CSWAP,
    MEASURE_RESET,
    MULTI_CONTROLLED_X,
    PAULI_X,
    ROTATION_PLACEHOLDER,
    SWAP,
    TOF_PRE_POST,
    TOFFOLI,
    UNCOMPUTE_AND,
)

_TOF, _CN, _SW = 0, 1, 2


@dataclass
class ScheduleMetrics:
    toffoli_count: int
    toffoli_depth: int
    cnot_count: int
    cnot_depth: int
    swap_count: int
    swap_depth: int
    total_layers: int
    n_gates: int
    n_qubits: int
    n_rotations: int = 0
    n_measure_reset: int = 0

    def __str__(self) -> str:
        return (
            f"toffoli {self.toffoli_count} (depth {self.toffoli_depth}), "
            f"cnot {self.cnot_count} (depth {self.cnot_depth}), "
            f"swap {self.swap_count} (depth {self.swap_depth}), "
            f"layers {self.total_layers}, qubits {self.n_qubits}"
        )


class Scheduler:
    """Streaming sink that assigns each gate the earliest layer its qubits
    allow, then reports per-class counts and depths."""

    def __init__(self) -> None:
        self.ready: list[int] = []
        self.occ = [bytearray(1024), bytearray(1024), bytearray(1024)]
        self.counts = [0, 0, 0]
        self.n_gates = 0
        self.n_rotations = 0
        self.n_measure_reset = 0
        self._floor = 0

    def _mark(self, cls: int, layer: int) -> None:
        occ = self.occ[cls]
        if layer >= len(occ):
            self.occ[cls] = occ = occ + bytearray(max(len(occ), layer + 1 - len(occ)))
        occ[layer] = 1

    def emit(self, kind: int, controls: tuple, targets: tuple, tag=None) -> None:
        if kind == BARRIER:
            # Everything emitted so far finishes before anything after, even
            # on wires allocated later (the floor seeds new entries).
            self._floor = f = max(self.ready, default=0)
            self.ready = [f] * len(self.ready)
            return
        self.n_gates += 1
        ready = self.ready
        hi = max(targets)
        if controls:
            hc = max(controls)
            if hc > hi:
                hi = hc
        if hi >= len(ready):
            ready.extend([self._floor] * (hi + 1 - len(ready)))
        layer = 0
        for q in controls:
            if ready[q] > layer:
                layer = ready[q]
        for q in targets:
            if ready[q] > layer:
                layer = ready[q]

        dur = 1
        counts = self.counts
        if kind == CNOT:
            counts[_CN] += 1
            self._mark(_CN, layer)
        elif kind == TOFFOLI or kind == COMPUTE_AND or kind == TOF_PRE_POST:
            counts[_TOF] += 1
            self._mark(_TOF, layer)
        elif kind == UNCOMPUTE_AND or kind == CLASSICAL_UNFANOUT or kind == PAULI_X:
            pass
        elif kind == SWAP:
            counts[_SW] += 1
            self._mark(_SW, layer)
        elif kind == CSWAP:
            counts[_TOF] += 1
            counts[_CN] += 2
            self._mark(_CN, layer)
            self._mark(_TOF, layer + 1)
            self._mark(_CN, layer + 2)
            dur = 3
        elif kind == CLASSICAL_FANOUT:
            m = len(targets)
            counts[_CN] += (3 * m + 1) // 2
            self._mark(_CN, layer)
            self._mark(_CN, layer + 1)
            self._mark(_CN, layer + 2)
            dur = 3
        elif kind == MULTI_CONTROLLED_X:
            k = len(controls)
            if k == 1:
                counts[_CN] += 1
                self._mark(_CN, layer)
            elif k == 2:
                counts[_TOF] += 1
                self._mark(_TOF, layer)
            else:
                d = (k - 1).bit_length()
                counts[_TOF] += k - 1
                counts[_CN] += 1
                for i in range(d):
                    self._mark(_TOF, layer + i)
                self._mark(_CN, layer + d)
                dur = d + 1
        elif kind == ROTATION_PLACEHOLDER:
            self.n_rotations += 1
        elif kind == MEASURE_RESET:
            self.n_measure_reset += len(targets)
        else:
            raise ValueError(f"unknown gate kind {kind}")

        end = layer + dur
        for q in controls:
            ready[q] = end
        for q in targets:
            ready[q] = end

    def metrics(self) -> ScheduleMetrics:
        return ScheduleMetrics(
            toffoli_count=self.counts[_TOF],
            toffoli_depth=sum(self.occ[_TOF]),
            cnot_count=self.counts[_CN],
            cnot_depth=sum(self.occ[_CN]),
            swap_count=self.counts[_SW],
            swap_depth=sum(self.occ[_SW]),
            total_layers=max(self.ready, default=0),
            n_gates=self.n_gates,
            n_qubits=len(self.ready),
            n_rotations=self.n_rotations,
            n_measure_reset=self.n_measure_reset,
        )


def schedule(circuit) -> ScheduleMetrics:
    """Layer a stored circuit and return its per-class metrics."""
    s = Scheduler()
    circuit.emit_into(s)
    return s.metrics()
