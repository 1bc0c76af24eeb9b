"""Plaintext references for the secure programs.

These never touch the engine.  ``oracle_stddev_exact`` replays the integer
and fixed-point semantics of the secure standard deviation step by step, so
its result must match the opened secure output bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _cdiv(a: int, b: int) -> int:
    """C-style integer division (truncation toward zero)."""
    if b == 0:
        raise ZeroDivisionError("integer division by zero")
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def default_iterations(prec: int) -> int:
    return prec + 10


def oracle_newton_trace(a: int, prec: int, iters: int | None = None) -> list[int]:
    """Values of k after each iteration of k <- (k*k + a*100^prec) / (2k), k0 = 1.

    Raises ZeroDivisionError naming the (1-based) step whose divisor is zero.
    """
    if a < 0:
        raise ValueError(f"square root of negative value {a}")
    num = a * 100**prec
    iters = default_iterations(prec) if iters is None else iters
    k = 1
    trace = []
    for step in range(1, iters + 1):
        if k == 0:
            raise ZeroDivisionError(f"zero divisor at step {step}")
        k = _cdiv(k * k + num, 2 * k)
        trace.append(k)
    return trace


def oracle_sqrt_fixed(a: int, prec: int, frac_bits: int = 20, iters: int | None = None) -> Fraction:
    trace = oracle_newton_trace(a, prec, iters)
    k = trace[-1] if trace else 1
    # k and 10^prec are both lifted to fixed point, then one fixed division
    scale = 2**frac_bits
    raw = _cdiv(k * scale * scale, 10**prec * scale)
    return Fraction(raw, scale)


def _flatten(values) -> list[int]:
    values = list(values)
    if values and isinstance(values[0], (list, tuple)):
        return [x for part in values for x in part]
    return values


def oracle_stddev_exact(values: Iterable, prec: int = 1, frac_bits: int = 20,
                        iterations: int | None = None) -> Fraction:
    """Standard deviation with truncated integer mean and variance, then the Newton sqrt.

    ``values`` may be a flat list or one list per input party.
    """
    xs = _flatten(values)
    if not xs:
        raise ValueError("standard deviation of an empty data set")
    n = len(xs)
    mean = _cdiv(sum(xs), n)
    var = _cdiv(sum((x - mean) ** 2 for x in xs), n)
    return oracle_sqrt_fixed(var, prec, frac_bits, iterations)


def _marginals(matrix: Sequence[Sequence[int]]):
    rows = [sum(r) for r in matrix]
    cols = [sum(c) for c in zip(*matrix)]
    return rows, cols, sum(rows)


def oracle_chisq(matrix: Sequence[Sequence[int]]) -> tuple[float, int]:
    """Textbook Σ (O - E)^2 / E with E = row_sum * col_sum / total, and df."""
    rows, cols, total = _marginals(matrix)
    stat = 0.0
    for i, r in enumerate(matrix):
        for j, obs in enumerate(r):
            expected = rows[i] * cols[j] / total
            stat += (obs - expected) ** 2 / expected
    return stat, (len(matrix) - 1) * (len(matrix[0]) - 1)


def oracle_chisq_restructured(matrix: Sequence[Sequence[int]]) -> float:
    """Σ (x*s_o - s_c*s_r)^2 / (s_c*s_r*s_o): integer numerator and denominator per cell."""
    rows, cols, total = _marginals(matrix)
    stat = 0.0
    for i, r in enumerate(matrix):
        for j, x in enumerate(r):
            e = cols[j] * rows[i]
            stat += (x * total - e) ** 2 / (e * total)
    return stat
