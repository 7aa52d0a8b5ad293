"""Bit-vector simulation of the reversible gate set.

The simulator keeps one Python integer per qubit.  Bit ``b`` of that integer
is the qubit's value in batch case ``b``, so a gate costs one bitwise
operation regardless of how many cases run in parallel.  All gates in the
supported set map computational basis states to computational basis states
(rotations are placeholders and measurement-assisted uncomputation is
deterministic on the tracked data), which is what makes plain bit tracking
exact here.
"""
from __future__ import annotations

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
    Register,
)


class SimulationError(AssertionError):
    pass


class Simulator:
    """Executes a gate stream on ``n_cases`` basis states at once.

    With ``strict`` on (the default), the ancilla discipline is checked on
    the fly: ComputeAnd requires a zeroed target, UncomputeAnd requires the
    target to actually hold the AND of its controls, and ClassicalUnfanout
    requires the copies to still equal the source.  These checks catch the
    bulk of construction bugs at the first offending gate.
    """

    def __init__(self, n_cases: int = 1, strict: bool = True) -> None:
        if n_cases < 1:
            raise ValueError("need at least one case")
        self.n_cases = n_cases
        self.mask = (1 << n_cases) - 1
        self.strict = strict
        self.state: list[int] = []
        self.n_gates = 0
        self.rotations: list[tuple] = []
        self.n_measure_reset = 0

    # -- state I/O --------------------------------------------------------

    def _grow(self, q: int) -> None:
        if q >= len(self.state):
            self.state.extend([0] * (q + 1 - len(self.state)))

    def set_value(self, reg, values) -> None:
        """Load an integer (or one per case) into a register, LSB first."""
        qubits = reg.qubits if isinstance(reg, Register) else tuple(reg)
        if isinstance(values, int):
            values = [values] * self.n_cases
        if len(values) != self.n_cases:
            raise ValueError("need one value per case")
        if not qubits:
            if any(values):
                raise ValueError("nonzero value for an empty register")
            return
        self._grow(max(qubits))
        for j, q in enumerate(qubits):
            acc = 0
            for b, v in enumerate(values):
                acc |= ((v >> j) & 1) << b
            self.state[q] = acc

    def get_value(self, reg) -> list[int]:
        qubits = reg.qubits if isinstance(reg, Register) else tuple(reg)
        out = [0] * self.n_cases
        if not qubits:
            return out
        self._grow(max(qubits))
        for j, q in enumerate(qubits):
            col = self.state[q]
            b = 0
            while col:
                low = col & -col
                b = low.bit_length() - 1
                out[b] |= 1 << j
                col ^= low
        return out

    def get1(self, reg) -> int:
        return self.get_value(reg)[0]

    def bad_cases(self, col: int) -> list[int]:
        out = []
        for b in range(self.n_cases):
            if (col >> b) & 1:
                out.append(b)
        return out

    def check_zero(self, reg, what: str = "register") -> None:
        qubits = reg.qubits if isinstance(reg, Register) else tuple(reg)
        if not qubits:
            return
        self._grow(max(qubits))
        for j, q in enumerate(qubits):
            if self.state[q]:
                raise SimulationError(
                    f"{what} bit {j} (qubit {q}) not restored to zero in "
                    f"cases {self.bad_cases(self.state[q])[:5]}"
                )

    # -- gate application --------------------------------------------------

    def emit(self, kind: int, controls: tuple, targets: tuple, tag=None) -> None:
        if kind == BARRIER:
            return
        self.n_gates += 1
        s = self.state
        try:
            if kind == CNOT:
                s[targets[0]] ^= s[controls[0]]
            elif kind == TOFFOLI or kind == TOF_PRE_POST:
                s[targets[0]] ^= s[controls[0]] & s[controls[1]]
            elif kind == COMPUTE_AND:
                t = targets[0]
                if self.strict and s[t]:
                    raise SimulationError(
                        f"ComputeAnd target qubit {t} not zero in cases "
                        f"{self.bad_cases(s[t])[:5]}"
                    )
                s[t] ^= s[controls[0]] & s[controls[1]]
            elif kind == UNCOMPUTE_AND:
                t = targets[0]
                v = s[controls[0]] & s[controls[1]]
                if self.strict and s[t] != v:
                    raise SimulationError(
                        f"UncomputeAnd on qubit {t} does not match its "
                        f"controls in cases {self.bad_cases(s[t] ^ v)[:5]}"
                    )
                s[t] ^= v
            elif kind == PAULI_X:
                s[targets[0]] ^= self.mask
            elif kind == SWAP:
                a, b = targets
                s[a], s[b] = s[b], s[a]
            elif kind == CSWAP:
                a, b = targets
                self._grow(max(a, b, controls[0]))
                m = (s[a] ^ s[b]) & s[controls[0]]
                s[a] ^= m
                s[b] ^= m
            elif kind == CLASSICAL_FANOUT:
                self._grow(max(targets))
                src = s[controls[0]]
                for t in targets:
                    if self.strict and s[t]:
                        raise SimulationError(
                            f"fanout copy qubit {t} not zero in cases "
                            f"{self.bad_cases(s[t])[:5]}"
                        )
                    s[t] ^= src
            elif kind == CLASSICAL_UNFANOUT:
                self._grow(max(targets))
                src = s[controls[0]]
                for t in targets:
                    if self.strict and s[t] != src:
                        raise SimulationError(
                            f"unfanout copy qubit {t} differs from source in "
                            f"cases {self.bad_cases(s[t] ^ src)[:5]}"
                        )
                    s[t] ^= src
            elif kind == MULTI_CONTROLLED_X:
                self._grow(max(max(controls), max(targets)))
                m = self.mask
                for c in controls:
                    m &= s[c]
                s[targets[0]] ^= m
            elif kind == ROTATION_PLACEHOLDER:
                self.rotations.append((targets[0], tag))
            elif kind == MEASURE_RESET:
                self._grow(max(targets))
                for t in targets:
                    s[t] = 0
                self.n_measure_reset += len(targets)
            else:
                raise ValueError(f"unknown gate kind {kind}")
        except IndexError:
            hi = max(controls) if controls else 0
            hi = max(hi, max(targets))
            self._grow(hi)
            self.n_gates -= 1
            self.emit(kind, controls, targets, tag)

    # -- convenience --------------------------------------------------------

    def run(self, circuit, inverse: bool = False) -> "Simulator":
        circuit.emit_into(self, inverse=inverse)
        return self


def run_circuit(circuit, inputs: dict, n_cases: int | None = None,
                strict: bool = True) -> dict:
    """Run a stored circuit on named register inputs.

    ``inputs`` maps register names to an int or a per-case list of ints.
    Returns register name -> list of per-case output values.  Registers with
    role "ancilla" are checked to come back zeroed.
    """
    if n_cases is None:
        n_cases = 1
        for v in inputs.values():
            if not isinstance(v, int):
                n_cases = max(n_cases, len(v))
    sim = Simulator(n_cases, strict=strict)
    if circuit.n_qubits:
        sim._grow(circuit.n_qubits - 1)
    for name, v in inputs.items():
        sim.set_value(circuit.registers[name], v)
    circuit.emit_into(sim)
    out = {}
    for name, reg in circuit.registers.items():
        out[name] = sim.get_value(reg)
        if reg.role == "ancilla":
            sim.check_zero(reg, f"ancilla register {name!r}")
    return out
