"""Adder family: values, ledgers, comparator shape, and the bit primitives."""

import random

import pytest

from revarith.adders import (
    AdderPlacement,
    AdderVariant,
    BitPrimitive,
    ComparatorMode,
    ShiftDirection,
    adder_cost,
    build_adder,
    build_bit_primitive,
    build_comparator,
    build_self_gated_constant_add,
    build_subtractor,
    comparator_toffoli_count,
    ledger_params,
)
from revarith.ledger import CostLedger
from revarith.prefix import CarryNetworkKind
from revarith.schedule import Scheduler
from revarith.sim import Simulator, run_circuit

KINDS = list(CarryNetworkKind)
IN = AdderPlacement.InPlace
OUT = AdderPlacement.OutPlace


def mask(n):
    return (1 << n) - 1


def metrics(circ):
    s = Scheduler()
    circ.emit_into(s)
    return s.metrics()


def exhaustive_pairs(n):
    vals = [(a, b) for a in range(1 << n) for b in range(1 << n)]
    return [a for a, _ in vals], [b for _, b in vals]


# -- in-place addition -------------------------------------------------------


def test_inplace_example():
    circ = build_adder(AdderVariant(IN), 4, CarryNetworkKind.BrentKung)
    out = run_circuit(circ, {"x": 5, "y": 3})
    assert out["y"] == [8]
    assert out["carry"] == [0]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_inplace_exhaustive(kind, n):
    circ = build_adder(AdderVariant(IN), n, kind)
    xs, ys = exhaustive_pairs(n)
    out = run_circuit(circ, {"x": xs, "y": ys})
    assert out["x"] == xs
    assert out["y"] == [(a + b) & mask(n) for a, b in zip(xs, ys)]
    assert out["carry"] == [(a + b) >> n for a, b in zip(xs, ys)]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_inplace_controlled_exhaustive(kind, n):
    circ = build_adder(AdderVariant(IN, controlled=True), n, kind)
    xs, ys = exhaustive_pairs(n)
    for c in (0, 1):
        out = run_circuit(circ, {"ctrl": [c] * len(xs), "x": xs, "y": ys})
        assert out["x"] == xs
        if c:
            assert out["y"] == [(a + b) & mask(n) for a, b in zip(xs, ys)]
            assert out["carry"] == [(a + b) >> n for a, b in zip(xs, ys)]
        else:
            assert out["y"] == ys
            assert out["carry"] == [0] * len(xs)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_inplace_constant_exhaustive(kind, n):
    ys = list(range(1 << n))
    for t in range(1 << n):
        circ = build_adder(AdderVariant(IN, constant=t), n, kind)
        out = run_circuit(circ, {"y": ys})
        assert out["y"] == [(t + b) & mask(n) for b in ys]
        assert out["carry"] == [(t + b) >> n for b in ys]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [5, 6])
def test_inplace_constant_sampled(kind, n):
    ys = list(range(1 << n))
    for t in (0, 1, 0b10110 & mask(n), 1 << (n - 1), mask(n)):
        circ = build_adder(AdderVariant(IN, constant=t), n, kind)
        out = run_circuit(circ, {"y": ys})
        assert out["y"] == [(t + b) & mask(n) for b in ys]
        assert out["carry"] == [(t + b) >> n for b in ys]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_inplace_controlled_constant_exhaustive(kind, n):
    ys = list(range(1 << n))
    for t in range(1 << n):
        circ = build_adder(AdderVariant(IN, controlled=True, constant=t),
                           n, kind)
        for c in (0, 1):
            out = run_circuit(circ, {"ctrl": c, "y": ys})
            want = [(t + b) & mask(n) for b in ys] if c else ys
            assert out["y"] == want
            assert out["carry"] == ([(t + b) >> n for b in ys] if c
                                    else [0] * len(ys))


# -- out-of-place addition ----------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_outplace_exhaustive(kind, n):
    circ = build_adder(AdderVariant(OUT), n, kind)
    xs, ys = exhaustive_pairs(n)
    out = run_circuit(circ, {"x": xs, "y": ys})
    assert out["x"] == xs
    assert out["y"] == ys
    assert out["sum"] == [a + b for a, b in zip(xs, ys)]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_outplace_controlled_exhaustive(kind, n):
    circ = build_adder(AdderVariant(OUT, controlled=True), n, kind)
    xs, ys = exhaustive_pairs(n)
    for c in (0, 1):
        out = run_circuit(circ, {"ctrl": c, "x": xs, "y": ys})
        assert out["x"] == xs
        assert out["y"] == ys
        assert out["sum"] == [(a + b) * c for a, b in zip(xs, ys)]


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_outplace_constant_exhaustive(kind, n):
    ys = list(range(1 << n))
    for t in range(1 << n):
        circ = build_adder(AdderVariant(OUT, constant=t), n, kind)
        out = run_circuit(circ, {"y": ys})
        assert out["y"] == ys
        assert out["sum"] == [t + b for b in ys]
        circ = build_adder(AdderVariant(OUT, controlled=True, constant=t),
                           n, kind)
        for c in (0, 1):
            out = run_circuit(circ, {"ctrl": c, "y": ys})
            assert out["y"] == ys
            assert out["sum"] == [(t + b) * c for b in ys]


# -- random large widths -------------------------------------------------------


def rand_cases(rng, n, count=1000):
    return [rng.getrandbits(n) for _ in range(count)]


@pytest.mark.parametrize("n,kind", [(16, CarryNetworkKind.BrentKung),
                                    (16, CarryNetworkKind.Sklansky),
                                    (16, CarryNetworkKind.Hybrid),
                                    (32, CarryNetworkKind.Sklansky),
                                    (64, CarryNetworkKind.Hybrid),
                                    (256, CarryNetworkKind.Hybrid),
                                    (256, CarryNetworkKind.BrentKung)])
def test_adders_random_wide(n, kind):
    rng = random.Random(0xADD0 + n)
    xs, ys = rand_cases(rng, n), rand_cases(rng, n)
    t = rng.getrandbits(n)

    out = run_circuit(build_adder(AdderVariant(IN), n, kind),
                      {"x": xs, "y": ys})
    assert out["y"] == [(a + b) & mask(n) for a, b in zip(xs, ys)]
    assert out["carry"] == [(a + b) >> n for a, b in zip(xs, ys)]

    out = run_circuit(build_adder(AdderVariant(OUT), n, kind),
                      {"x": xs, "y": ys})
    assert out["sum"] == [a + b for a, b in zip(xs, ys)]

    out = run_circuit(build_adder(AdderVariant(IN, constant=t), n, kind),
                      {"y": ys})
    assert out["y"] == [(t + b) & mask(n) for b in ys]

    out = run_circuit(build_adder(AdderVariant(OUT, constant=t), n, kind),
                      {"y": ys})
    assert out["sum"] == [t + b for b in ys]

    cs = [rng.getrandbits(1) for _ in xs]
    out = run_circuit(build_adder(AdderVariant(IN, controlled=True), n, kind),
                      {"ctrl": cs, "x": xs, "y": ys})
    assert out["y"] == [(a + b) & mask(n) if c else b
                        for a, b, c in zip(xs, ys, cs)]
    assert out["carry"] == [c * ((a + b) >> n)
                            for a, b, c in zip(xs, ys, cs)]

    out = run_circuit(build_adder(AdderVariant(OUT, controlled=True), n, kind),
                      {"ctrl": cs, "x": xs, "y": ys})
    assert out["sum"] == [c * (a + b) for a, b, c in zip(xs, ys, cs)]

    out = run_circuit(
        build_adder(AdderVariant(IN, controlled=True, constant=t), n, kind),
        {"ctrl": cs, "y": ys})
    assert out["y"] == [(t + b) & mask(n) if c else b
                        for b, c in zip(ys, cs)]

    out = run_circuit(
        build_adder(AdderVariant(OUT, controlled=True, constant=t), n, kind),
        {"ctrl": cs, "y": ys})
    assert out["sum"] == [c * (t + b) for b, c in zip(ys, cs)]


def test_controlled_off_is_identity():
    rng = random.Random(7)
    n = 16
    xs, ys = rand_cases(rng, n, 100), rand_cases(rng, n, 100)
    for kind in KINDS:
        circ = build_adder(AdderVariant(IN, controlled=True), n, kind)
        out = run_circuit(circ, {"ctrl": 0, "x": xs, "y": ys})
        assert out["x"] == xs and out["y"] == ys and out["carry"] == [0] * 100


def test_variant_validation():
    with pytest.raises(ValueError):
        build_adder(AdderVariant(IN), 1, CarryNetworkKind.BrentKung)
    with pytest.raises(ValueError):
        build_adder(AdderVariant(IN, constant=16), 4,
                    CarryNetworkKind.BrentKung)
    with pytest.raises(ValueError):
        build_adder(AdderVariant(OUT, constant=-1), 4,
                    CarryNetworkKind.BrentKung)


# -- ledgers ---------------------------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [8, 16, 33])
def test_variant_delta_table(kind, n):
    """Measured gate bills against the per-variant deltas, all-ones worst case."""
    t = mask(n)
    p = ledger_params(kind, n, exact=True)

    base = adder_cost(AdderVariant(IN), n, kind, exact=True)
    assert base.toffoli_count == 2 * p.n_t + 2 * n - 1

    led = adder_cost(AdderVariant(IN, controlled=True), n, kind, exact=True)
    assert led.toffoli_count - base.toffoli_count == 2 * n + 1
    assert led.toffoli_depth - base.toffoli_depth == 3

    led = adder_cost(AdderVariant(IN, constant=t), n, kind, exact=True)
    assert led.toffoli_count - base.toffoli_count == -(2 * n - 1)
    assert led.toffoli_depth - base.toffoli_depth == -2

    led = adder_cost(AdderVariant(IN, controlled=True, constant=t), n, kind,
                     exact=True)
    assert led.toffoli_count == base.toffoli_count
    assert led.toffoli_depth == base.toffoli_depth

    base = adder_cost(AdderVariant(OUT), n, kind, exact=True)
    assert base.toffoli_count == p.n_t + n
    assert base.toffoli_depth == p.d_t + 1

    led = adder_cost(AdderVariant(OUT, controlled=True), n, kind, exact=True)
    assert led.toffoli_count - base.toffoli_count == 2 * n + 1
    assert led.toffoli_depth - base.toffoli_depth == 2

    led = adder_cost(AdderVariant(OUT, constant=t), n, kind, exact=True)
    assert led.toffoli_count - base.toffoli_count == -n
    assert led.toffoli_depth - base.toffoli_depth == -1

    led = adder_cost(AdderVariant(OUT, controlled=True, constant=t), n, kind,
                     exact=True)
    assert led.toffoli_count - base.toffoli_count == n
    assert led.toffoli_depth - base.toffoli_depth == 1


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [4, 5, 7, 8, 9, 12, 16, 17, 31, 32, 33])
def test_closed_form_matches_schedule(kind, n):
    """Estimate-mode Toffoli columns are exact for every variant."""
    t = 0b1011010 & mask(n)
    variants = [
        AdderVariant(IN), AdderVariant(IN, controlled=True),
        AdderVariant(IN, constant=t),
        AdderVariant(IN, controlled=True, constant=t),
        AdderVariant(OUT), AdderVariant(OUT, controlled=True),
        AdderVariant(OUT, constant=t),
        AdderVariant(OUT, controlled=True, constant=t),
    ]
    for v in variants:
        est = adder_cost(v, n, kind)
        got = adder_cost(v, n, kind, exact=True)
        assert est.toffoli_count == got.toffoli_count, (v, n, kind)
        assert est.toffoli_depth == got.toffoli_depth, (v, n, kind)


@pytest.mark.parametrize("n", [8, 16, 64, 256])
def test_inplace_identity_counts(n):
    """The in-place adder bill is twice the carry bill plus a linear wipe."""
    for kind in KINDS:
        p = ledger_params(kind, n, exact=True)
        led = adder_cost(AdderVariant(IN), n, kind, exact=True)
        assert led.toffoli_count == 2 * p.n_t + 2 * n - 1
    p = ledger_params(CarryNetworkKind.BrentKung, n, exact=True)
    led = adder_cost(AdderVariant(IN), n, CarryNetworkKind.BrentKung,
                     exact=True)
    assert led.toffoli_depth == 2 * p.d_t + 2


def test_inplace_hybrid_256_cross_check():
    kind = CarryNetworkKind.Hybrid
    p = ledger_params(kind, 256)
    led = adder_cost(AdderVariant(IN), 256, kind, exact=True)
    assert led.toffoli_count == 2 * p.n_t + 2 * 256 - 1


def test_outplace_tally():
    for kind in KINDS:
        for n in (8, 16, 64):
            p = ledger_params(kind, n, exact=True)
            m = metrics(build_adder(AdderVariant(OUT), n, kind))
            assert m.toffoli_count == p.n_t + n
            assert m.toffoli_depth == p.d_t + 1


def test_inplace_ancilla_budget():
    for kind in KINDS:
        for n in (16, 64):
            led = adder_cost(AdderVariant(IN), n, kind)
            assert led.ancillas == ledger_params(kind, n).s_a + n


# -- subtractor -------------------------------------------------------------------


def test_subtract_examples():
    circ = build_subtractor(6)
    out = run_circuit(circ, {"x": 9, "y": 9})
    assert out["y"] == [0]
    assert out["borrow"] == [0]


def test_subtract_exhaustive():
    xs, ys = exhaustive_pairs(6)
    for kind in KINDS:
        circ = build_subtractor(6, kind)
        out = run_circuit(circ, {"x": xs, "y": ys})
        assert out["x"] == xs
        assert out["y"] == [(a - b) & mask(6) for a, b in zip(xs, ys)]
        assert out["borrow"] == [int(b > a) for a, b in zip(xs, ys)]


@pytest.mark.parametrize("kind", KINDS)
def test_subtractor_ledger_equals_inplace(kind):
    n = 16
    a = CostLedger.from_metrics(metrics(build_subtractor(n, kind)))
    b = CostLedger.from_metrics(
        metrics(build_adder(AdderVariant(IN), n, kind)))
    assert a == b


# -- carry-gated constant addition ---------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
def test_gated_constant_add_halves(kind):
    n = 6
    for p in (47, 53, 63):
        v = (1 << n) - p
        head, tail = build_self_gated_constant_add(v, n, kind)
        ys = list(range(1 << n))
        sim = Simulator(n_cases=len(ys))
        sim.set_value(head.registers["y"], ys)
        head.emit_into(sim)
        flags = [f >> (n - 1) for f in sim.get_value(head.registers["carry"])]
        assert flags == [int(b + v >= (1 << n)) for b in ys]
        tail.emit_into(sim)
        got = sim.get_value(tail.registers["y"])
        assert got == [(b + v) & mask(n) if f else b
                       for b, f in zip(ys, flags)]
        carry = sim.get_value(tail.registers["carry"])
        assert carry == [f << (n - 1) for f in flags]
        sim.check_zero(tail.registers["work"])


@pytest.mark.parametrize("kind", KINDS)
def test_gated_constant_add_tally(kind):
    n = 16
    p = ledger_params(kind, n, exact=True)
    head, tail = build_self_gated_constant_add(0xBEEF & mask(n), n, kind)
    assert metrics(head).toffoli_count == p.n_t
    assert metrics(tail).toffoli_count == p.n_t + n - 1


# -- comparator ---------------------------------------------------------------------


def test_comparator_exhaustive():
    for n in (2, 3, 4, 5, 6):
        circ = build_comparator(ComparatorMode.Full, n)
        xs, ys = exhaustive_pairs(n)
        out = run_circuit(circ, {"x": xs, "y": ys})
        assert out["x"] == xs
        assert out["y"] == ys
        assert out["z"] == [int(a > b) for a, b in zip(xs, ys)]


def test_comparator_equal_pairs():
    rng = random.Random(4)
    n = 20
    vals = rand_cases(rng, n, 50)
    circ = build_comparator(ComparatorMode.Full, n)
    out = run_circuit(circ, {"x": vals, "y": vals})
    assert out["z"] == [0] * 50


def test_comparator_controlled():
    n = 5
    circ = build_comparator(ComparatorMode.Full, n, controlled=True)
    xs, ys = exhaustive_pairs(n)
    for c in (0, 1):
        out = run_circuit(circ, {"ctrl": c, "x": xs, "y": ys})
        assert out["z"] == [c * int(a > b) for a, b in zip(xs, ys)]
    plain = metrics(build_comparator(ComparatorMode.Full, n))
    assert metrics(circ).toffoli_count == plain.toffoli_count + 1


def test_comparator_constant():
    n = 6
    for t in (0, 5, 31, 32, 63):
        circ = build_comparator(ComparatorMode.Full, n, constant=t)
        xs = list(range(1 << n))
        out = run_circuit(circ, {"x": xs})
        assert out["x"] == xs
        assert out["z"] == [int(a > t) for a in xs]


def test_comparator_halves_compose():
    n = 6
    xs, ys = exhaustive_pairs(n)
    h1 = build_comparator(ComparatorMode.Half1, n)
    h2 = build_comparator(ComparatorMode.Half2, n)
    sim = Simulator(n_cases=len(xs))
    sim.set_value(h1.registers["x"], xs)
    sim.set_value(h1.registers["y"], ys)
    h1.emit_into(sim)
    assert sim.get_value(h1.registers["z"]) == \
        [int(a > b) for a, b in zip(xs, ys)]
    h2.emit_into(sim)
    assert sim.get_value(h1.registers["x"]) == xs
    assert sim.get_value(h1.registers["y"]) == ys
    sim.check_zero(h1.registers["work"])
    sim.check_zero(h1.registers["z"])
    assert metrics(h2).toffoli_count == 0


@pytest.mark.parametrize("n", [8, 16, 64])
def test_comparator_toffoli_formula(n):
    import math
    want = 3 * n - math.ceil(math.log2(n - 1)) - 3
    assert comparator_toffoli_count(n) == want
    for mode in (ComparatorMode.Full, ComparatorMode.Half1):
        m = metrics(build_comparator(mode, n))
        assert m.toffoli_count == want
    m = metrics(build_comparator(ComparatorMode.Full, n, constant=3))
    assert m.toffoli_count == want - n


def test_comparator_tree_shape_everywhere():
    for n in range(2, 70):
        m = metrics(build_comparator(ComparatorMode.Half1, n))
        assert m.toffoli_count == comparator_toffoli_count(n), n


def test_comparator_wide_random():
    rng = random.Random(11)
    for n in (16, 32, 64, 256):
        xs, ys = rand_cases(rng, n), rand_cases(rng, n)
        out = run_circuit(build_comparator(ComparatorMode.Full, n),
                          {"x": xs, "y": ys})
        assert out["z"] == [int(a > b) for a, b in zip(xs, ys)]


# -- bit primitives -----------------------------------------------------------------


def test_cswap_registers():
    rng = random.Random(21)
    n = 16
    circ = build_bit_primitive(BitPrimitive.CSwapRegisters, n)
    xs, ys = rand_cases(rng, n, 100), rand_cases(rng, n, 100)
    out = run_circuit(circ, {"ctrl": 1, "x": xs, "y": ys})
    assert out["x"] == ys and out["y"] == xs
    out = run_circuit(circ, {"ctrl": 0, "x": xs, "y": ys})
    assert out["x"] == xs and out["y"] == ys
    m = metrics(circ)
    assert m.toffoli_count == n
    assert m.toffoli_depth == 1
    assert m.cnot_count == 7 * n // 2
    assert m.cnot_depth == 5


def test_shift_example():
    circ = build_bit_primitive(BitPrimitive.ShiftK, 5, k=3)
    out = run_circuit(circ, {"x": 0b10110})
    assert out["x"] == [0b10110 << 3]
    m = metrics(circ)
    assert m.swap_count == 5 * 4
    assert m.swap_depth == 5


def test_shift_tallies_and_values():
    rng = random.Random(31)
    n = 7
    for k in range(1, n):
        circ = build_bit_primitive(BitPrimitive.ShiftK, n, k=k)
        vals = rand_cases(rng, n, 64)
        out = run_circuit(circ, {"x": vals})
        assert out["x"] == [v << k for v in vals]
        m = metrics(circ)
        assert m.swap_count == n * (k + 1)
        assert m.swap_depth == k + 2
        rcirc = build_bit_primitive(BitPrimitive.ShiftK, n, k=k,
                                    direction=ShiftDirection.Right)
        out = run_circuit(rcirc, {"x": [v << k for v in vals]})
        assert out["x"] == vals
        m = metrics(rcirc)
        assert m.swap_count == n * (k + 1)
        assert m.swap_depth == k + 2


def test_shift_bounds():
    with pytest.raises(ValueError):
        build_bit_primitive(BitPrimitive.ShiftK, 5, k=0)
    with pytest.raises(ValueError):
        build_bit_primitive(BitPrimitive.ShiftK, 5, k=5)


def test_controlled_shift1():
    rng = random.Random(41)
    n = 8
    circ = build_bit_primitive(BitPrimitive.ControlledShift1, n)
    vals = rand_cases(rng, n, 64)
    out = run_circuit(circ, {"ctrl": 1, "x": vals})
    assert out["x"] == [v << 1 for v in vals]
    out = run_circuit(circ, {"ctrl": 0, "x": vals})
    assert out["x"] == vals
    m = metrics(circ)
    assert m.toffoli_count == 2 * n
    assert m.toffoli_depth == 3
    rcirc = build_bit_primitive(BitPrimitive.ControlledShift1, n,
                                direction=ShiftDirection.Right)
    evens = [v & ~1 for v in vals]
    out = run_circuit(rcirc, {"ctrl": 1, "x": evens})
    assert out["x"] == [v >> 1 for v in evens]
    out = run_circuit(rcirc, {"ctrl": 0, "x": evens})
    assert out["x"] == evens
