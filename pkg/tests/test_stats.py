import math
import random
import statistics
from fractions import Fraction

import pytest

from smcstats.engine import EngineConfig, PartyNetwork, ledger_delta
from smcstats.errors import ConfigurationError, DomainError, RangeOverflowError
from smcstats.oracle import oracle_chisq, oracle_newton_trace, oracle_sqrt_fixed, oracle_stddev_exact
from smcstats.stats import (
    ChiSqInput,
    StdDevInput,
    chisq_optimized,
    chisq_unoptimized,
    run_program,
    sqrt_newton,
    stddev,
    stddev_unoptimized,
)

SAMPLE = [2, 4, 4, 4, 5, 5, 7, 9]


def secret(net, v):
    return net.distribute_input(0, [v])[0]


def test_sqrt_of_four(net):
    assert net.open(sqrt_newton(secret(net, 4), 1)) == 2


def test_sqrt_of_one_prec_zero(net):
    assert net.open(sqrt_newton(secret(net, 1), 0)) == 1


def test_sqrt_of_zero_follows_trace(net):
    with pytest.raises(ZeroDivisionError):
        sqrt_newton(secret(net, 0), 1)


def test_sqrt_matches_trace_oracle(net, rng):
    for _ in range(40):
        a = rng.randint(1, 10**6)
        prec = rng.randint(0, 2)
        assert net.open(sqrt_newton(secret(net, a), prec)) == oracle_sqrt_fixed(a, prec)


def test_sqrt_error_band(rng):
    net = PartyNetwork(EngineConfig(seed=8))
    for _ in range(40):
        a = rng.randint(1, 5000)
        trace = oracle_newton_trace(a, 1)
        if trace[-1] != trace[-2] and abs(trace[-1] - trace[-2]) > 1:
            continue  # not converged within the fixed budget
        k = trace[-1]
        assert abs(k * k - a * 100) <= 2 * k + 1
        assert net.open(sqrt_newton(secret(net, a), 1)) == Fraction(k * 2**20 // 10, 2**20)


def test_sqrt_schedule_is_data_independent(net, rng):
    deltas = []
    for a in [1, 2, 4, 999, 10**6] + [rng.randint(1, 10**8) for _ in range(10)]:
        x = secret(net, a)
        before = net.ledger_report()
        sqrt_newton(x, 1)
        deltas.append(ledger_delta(before, net.ledger_report()))
    assert all(d == deltas[0] for d in deltas)
    assert deltas[0]["per_gate"]["mul"]["count"] == 11
    assert deltas[0]["per_gate"]["div_int"]["count"] == 11


def test_sqrt_iteration_override(net):
    before = net.ledger_report()
    sqrt_newton(secret(net, 9), 1, iterations=25)
    assert ledger_delta(before, net.ledger_report())["per_gate"]["mul"]["count"] == 25


def test_sqrt_rejects_negative_precision(net):
    with pytest.raises(ConfigurationError):
        sqrt_newton(secret(net, 9), -1)


def test_sqrt_precision_overflow(net):
    with pytest.raises(RangeOverflowError):
        sqrt_newton(secret(net, 9), 40)


@pytest.mark.parametrize("split", [[SAMPLE], [SAMPLE[:3], SAMPLE[3:]], [[x] for x in SAMPLE]])
def test_stddev_sample(net, split):
    assert net.open(stddev(net, StdDevInput(split))) == 2


def test_stddev_constant_data_takes_zero_path(net):
    with pytest.raises(ZeroDivisionError):
        stddev(net, StdDevInput([[7, 7, 7, 7]]))


def test_stddev_one_to_thousand():
    data = list(range(1, 1001))
    split = [data[:300], data[300:700], data[700:]]
    res = run_program("stddev", split)
    assert res.value == oracle_stddev_exact(data, 1)
    # the fixed prec+10 budget stops short of convergence here (k = 4729)
    assert res.value == Fraction(4729 * 2**20 // 10, 2**20)
    longer = run_program("stddev", split, iterations=30)
    assert longer.value == oracle_stddev_exact(data, 1, iterations=30)
    assert abs(float(longer.value) - 288.67) < 0.5


def test_stddev_random_matches_oracle(rng):
    for _ in range(20):
        parties = [[rng.randint(0, 1000) for _ in range(rng.randint(1, 60))] for _ in range(rng.randint(1, 4))]
        flat = [x for p in parties for x in p]
        if len(set(flat)) == 1:
            continue
        assert run_program("stddev", parties).value == oracle_stddev_exact(flat, 1)


def test_stddev_unoptimized_same_value_more_rounds():
    a = run_program("stddev", [SAMPLE])
    b = run_program("stddev-unopt", [SAMPLE])
    assert a.value == b.value == 2
    assert a.ledger["phases"]["squares"]["rounds"] == 1
    assert b.ledger["phases"]["squares"]["rounds"] == len(SAMPLE)
    assert a.ledger["interactive_ops"] == b.ledger["interactive_ops"]


def test_stddev_input_validation():
    with pytest.raises(ConfigurationError):
        StdDevInput([[], []])
    inp = StdDevInput([[1, 2], [3]])
    assert inp.sizes == [2, 1] and inp.total == 3 and inp.num_parties == 2


def test_chisq_uniform_2x2(net):
    res = chisq_optimized(net, ChiSqInput([[10, 10], [10, 10]]))
    assert net.open(res.statistic) == 0 and res.degrees_of_freedom == 1


def test_chisq_2x2(net):
    res = chisq_optimized(net, ChiSqInput([[10, 20], [20, 10]]))
    assert abs(float(net.open(res.statistic)) - 20 / 3) < 1e-3
    assert res.degrees_of_freedom == 1


def test_chisq_uniform_4x4(net):
    res = chisq_optimized(net, ChiSqInput([[3] * 4 for _ in range(4)]))
    assert net.open(res.statistic) == 0 and res.degrees_of_freedom == 9


def test_chisq_unoptimized_examples(net):
    assert net.open(chisq_unoptimized(net, ChiSqInput([[10, 10], [10, 10]])).statistic) == 0


def test_chisq_variants_agree(rng):
    for _ in range(100):
        mat = [[rng.randint(1, 100) for _ in range(4)] for _ in range(4)]
        a = run_program("chisq", mat).value
        b = run_program("chisq-unopt", mat).value
        assert abs(float(a) - float(b)) < 1e-3
        assert float(a) == pytest.approx(oracle_chisq(mat)[0], rel=1e-3, abs=1e-4)


@pytest.mark.parametrize("shape", [(2, 2), (3, 5), (4, 8), (8, 3)])
def test_chisq_op_counts(shape, rng):
    n, m = shape
    nm = n * m
    mat = [[rng.randint(1, 100) for _ in range(m)] for _ in range(n)]
    opt = run_program("chisq", mat).ledger
    unopt = run_program("chisq-unopt", mat).ledger
    assert opt["per_gate"]["mul"]["count"] == 4 * nm
    assert opt["per_gate"]["div_fixed"]["count"] == nm
    assert unopt["per_gate"]["div_fixed"]["count"] == 2 * nm
    assert set(opt["per_gate"]) == {"mul", "int_to_fixed", "div_fixed", "add_fixed", "open"}
    # cell stage: two product stages, one conversion, one division
    assert opt["phases"]["cells"]["rounds"] == 4


@pytest.mark.parametrize("shape", [(2, 2), (2, 3), (4, 4), (4, 5), (8, 8)])
def test_chisq_sum_depth_picco(shape, rng):
    n, m = shape
    mat = [[rng.randint(1, 100) for _ in range(m)] for _ in range(n)]
    led = run_program("chisq", mat, EngineConfig(cost_profile="picco")).ledger
    assert led["phases"]["sum"]["rounds"] == math.ceil(math.log2(n * m))
    assert run_program("chisq", mat).ledger["phases"]["sum"]["rounds"] == 0


def test_chisq_input_validation():
    with pytest.raises(DomainError, match="column 1"):
        ChiSqInput([[1, 0], [2, 0]])
    with pytest.raises(DomainError, match="row 0"):
        ChiSqInput([[0, 0], [2, 3]])
    with pytest.raises(DomainError):
        ChiSqInput([[1, 2]])
    with pytest.raises(DomainError):
        ChiSqInput([[1, -2], [3, 4]])
    with pytest.raises(DomainError):
        ChiSqInput([[1, 2], [3]])


def test_unknown_program():
    with pytest.raises(ConfigurationError):
        run_program("median", [[1]])


def test_run_is_deterministic():
    mat = [[5, 9, 1], [7, 3, 8]]
    assert run_program("chisq", mat).ledger == run_program("chisq", mat).ledger
    a = PartyNetwork(EngineConfig(seed=3))
    b = PartyNetwork(EngineConfig(seed=3))
    ra = chisq_optimized(a, ChiSqInput(mat)).statistic.raw.shares
    rb = chisq_optimized(b, ChiSqInput(mat)).statistic.raw.shares
    assert ra == rb
