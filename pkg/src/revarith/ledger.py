"""Resource ledgers: per-class gate counts and depths for a circuit stage.

A ledger is either *measured* (tallied by the scheduler from a built
circuit) or *composed* (combined from component ledgers).  Builders fence
their stages, so sequential composition is exact: counts add, class depths
add, and the qubit footprint is the widest stage since workspace is
returned between stages.
"""
from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class CostLedger:
    toffoli_count: int = 0
    toffoli_depth: int = 0
    cnot_count: int = 0
    cnot_depth: int = 0
    swap_count: int = 0
    swap_depth: int = 0
    qubits: int = 0
    ancillas: int = 0
    rotations: int = 0
    measurements: int = 0

    @classmethod
    def from_metrics(cls, m) -> "CostLedger":
        """Ledger of a scheduled circuit (see ScheduleMetrics)."""
        return cls(
            toffoli_count=m.toffoli_count,
            toffoli_depth=m.toffoli_depth,
            cnot_count=m.cnot_count,
            cnot_depth=m.cnot_depth,
            swap_count=m.swap_count,
            swap_depth=m.swap_depth,
            qubits=m.n_qubits,
            rotations=m.n_rotations,
            measurements=m.n_measure_reset,
        )

    def seq(self, *others: "CostLedger") -> "CostLedger":
        """Sequential composition of fenced stages on a shared footprint."""
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        for o in others:
            for f in fields(self):
                if f.name in ("qubits", "ancillas"):
                    out[f.name] = max(out[f.name], getattr(o, f.name))
                else:
                    out[f.name] += getattr(o, f.name)
        return CostLedger(**out)

    def times(self, reps: int) -> "CostLedger":
        """The ledger of `reps` sequential repetitions."""
        if reps < 0:
            raise ValueError("repetition count must be non-negative")
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v if f.name in ("qubits", "ancillas") else v * reps
        return CostLedger(**out)

    def with_qubits(self, qubits: int, ancillas: int | None = None) -> "CostLedger":
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["qubits"] = qubits
        if ancillas is not None:
            out["ancillas"] = ancillas
        return CostLedger(**out)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
