import math
import random
import statistics
from fractions import Fraction

import pytest

from smcstats.oracle import (
    oracle_chisq,
    oracle_chisq_restructured,
    oracle_newton_trace,
    oracle_sqrt_fixed,
    oracle_stddev_exact,
)


def chisq_exact(matrix):
    rows = [sum(r) for r in matrix]
    cols = [sum(c) for c in zip(*matrix)]
    total = sum(rows)
    return sum((Fraction(o) - Fraction(rows[i] * cols[j], total)) ** 2 / Fraction(rows[i] * cols[j], total)
               for i, r in enumerate(matrix) for j, o in enumerate(r))


def random_matrix(rng, n, m):
    return [[rng.randint(1, 100) for _ in range(m)] for _ in range(n)]


def test_newton_trace_for_four():
    # 400 -> 1, 200, 101, 52, 29, 21, 20, ... by hand
    assert oracle_newton_trace(4, 1, 11) == [200, 101, 52, 29, 21, 20, 20, 20, 20, 20, 20]


def test_newton_trace_fixed_point_one():
    assert oracle_newton_trace(1, 0, 10) == [1] * 10


def test_newton_trace_zero_input():
    with pytest.raises(ZeroDivisionError, match="step 2"):
        oracle_newton_trace(0, 1)


def test_newton_trace_negative():
    with pytest.raises(ValueError):
        oracle_newton_trace(-4, 1)


def test_sqrt_fixed():
    assert oracle_sqrt_fixed(4, 1) == 2
    assert oracle_sqrt_fixed(1, 0) == 1
    assert oracle_sqrt_fixed(2, 1) == Fraction(14 * 2**20 // 10, 2**20)


def test_stddev_small_case():
    assert oracle_stddev_exact([2, 4, 4, 4, 5, 5, 7, 9], 1) == 2
    assert oracle_stddev_exact([[2, 4, 4], [4, 5, 5, 7], [9]], 1) == 2


def test_stddev_single_value_hits_zero_divisor():
    with pytest.raises(ZeroDivisionError):
        oracle_stddev_exact([17], 1)


def test_stddev_close_to_real_sigma():
    rng = random.Random(4)
    for _ in range(50):
        xs = [rng.randint(0, 1000) for _ in range(rng.randint(8, 300))]
        var = statistics.pvariance(xs)
        if var < 2:
            continue
        got = oracle_stddev_exact(xs, 1, iterations=80)
        bound = 0.1 + 1 / math.sqrt(var - 1) + 2**-19
        assert abs(float(got) - statistics.pstdev(xs)) <= bound


def test_chisq_examples():
    stat, df = oracle_chisq([[10, 20], [20, 10]])
    assert stat == pytest.approx(20 / 3, rel=1e-12) and df == 1
    assert chisq_exact([[10, 20], [20, 10]]) == Fraction(20, 3)
    assert oracle_chisq([[5] * 4] * 4) == (0.0, 9)


def test_chisq_two_forms_agree():
    rng = random.Random(12)
    for _ in range(100):
        mat = random_matrix(rng, rng.choice([2, 3, 4, 8]), rng.randint(2, 20))
        exact = float(chisq_exact(mat))
        textbook, _ = oracle_chisq(mat)
        restructured = oracle_chisq_restructured(mat)
        assert textbook == pytest.approx(exact, rel=1e-9)
        assert restructured == pytest.approx(textbook, rel=1e-9)
