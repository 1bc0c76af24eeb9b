"""Secure standard deviation and chi-squared programs.

Each program comes in an optimized form (batched, few divisions) and a
baseline form that performs the same arithmetic with the costlier schedule,
so the effect of each optimization shows up as a ledger difference.
Programs label their stages with ``net.phase`` so per-stage costs can be read
back from the ledger report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import EngineConfig, PartyNetwork
from .errors import ConfigurationError, DomainError, RangeOverflowError
from .protocols import (
    SecretFixed,
    SecretInt,
    div_fixed,
    div_fixed_batch,
    div_secret_int,
    int_to_fixed_batch,
    mul_fixed_batch,
    mul_public,
    mul_secret,
    mul_secret_batch,
    sub_fixed_batch,
    sum_secret,
    tree_sum_fixed,
)

PROGRAMS = ("stddev", "stddev-unopt", "chisq", "chisq-unopt")

# extra Newton iterations on top of prec
ITERATION_SLACK = 10


@dataclass
class StdDevInput:
    """One list of integer values per input party."""

    parties: list

    def __post_init__(self):
        self.parties = [list(vals) for vals in self.parties]
        for vals in self.parties:
            for v in vals:
                if not isinstance(v, int):
                    raise ConfigurationError(f"data values must be integers, got {v!r}")
        if self.total < 1:
            raise ConfigurationError("standard deviation needs at least one data value")

    @property
    def num_parties(self) -> int:
        return len(self.parties)

    @property
    def sizes(self) -> list[int]:
        return [len(v) for v in self.parties]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def values(self) -> list[int]:
        return [x for vals in self.parties for x in vals]


@dataclass
class ChiSqInput:
    """Contingency table; row i is contributed by input party i."""

    matrix: list

    def __post_init__(self):
        self.matrix = [list(r) for r in self.matrix]
        n = len(self.matrix)
        if n < 2:
            raise DomainError(f"chi-squared needs at least 2 rows, got {n}")
        m = len(self.matrix[0])
        if m < 2:
            raise DomainError(f"chi-squared needs at least 2 columns, got {m}")
        for i, row in enumerate(self.matrix):
            if len(row) != m:
                raise DomainError(f"row {i} has {len(row)} columns, expected {m}")
            for v in row:
                if not isinstance(v, int) or v < 0:
                    raise DomainError(f"counts must be non-negative integers, got {v!r} in row {i}")
        for i, row in enumerate(self.matrix):
            if sum(row) == 0:
                raise DomainError(f"row {i} sums to zero")
        for j in range(m):
            if sum(row[j] for row in self.matrix) == 0:
                raise DomainError(f"column {j} sums to zero")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.matrix[0])


@dataclass
class ChiSqResult:
    statistic: SecretFixed
    degrees_of_freedom: int


# -- square root ------------------------------------------------------------

def sqrt_newton(a: SecretInt, prec: int = 1, iterations: int | None = None) -> SecretFixed:
    """Integer Newton-Raphson square root with ``prec`` decimal digits.

    The input is scaled by 100**prec, k starts at 1 and the update
    k <- (k*k + a) / (2k) runs a fixed number of times (prec + 10 unless
    overridden) whatever the data.  The result is converted to fixed point and
    divided once by 10**prec.
    """
    if prec < 0:
        raise ConfigurationError(f"precision must be non-negative, got {prec}")
    net = a.net
    iterations = prec + ITERATION_SLACK if iterations is None else iterations
    num = mul_public(a, 100**prec)
    # k is bounded by max(k0, num), so it keeps the bitlength of num
    k_bits = max(num.bits, 1)
    k = net.constant(1, bits=k_bits)
    for _ in range(iterations):
        k = div_secret_int(mul_secret(k, k) + num, mul_public(k, 2), bits=k_bits)
    scale = mul_public(net.constant(1), 10**prec)
    ans, scale_fx = int_to_fixed_batch([k, scale])
    return div_fixed(ans, scale_fx)


# -- standard deviation -----------------------------------------------------

def _stddev(net: PartyNetwork, inp: StdDevInput, prec: int, iterations, batched: bool) -> SecretFixed:
    with net.phase("input"):
        data = []
        for pid, vals in enumerate(inp.parties):
            data += net.distribute_input(pid, vals)
    # private copy of the public total, as the reference program divides by it
    total = net.constant(inp.total)
    with net.phase("mean"):
        mean = div_secret_int(sum_secret(data), total)
    with net.phase("squares"):
        diffs = [x - mean for x in data]
        if batched:
            squares = mul_secret_batch([(d, d) for d in diffs])
        else:
            squares = [mul_secret(d, d) for d in diffs]
    with net.phase("variance"):
        var = div_secret_int(sum_secret(squares), total)
    with net.phase("sqrt"):
        return sqrt_newton(var, prec, iterations)


def stddev(net: PartyNetwork, inp: StdDevInput, prec: int = 1, iterations: int | None = None) -> SecretFixed:
    return _stddev(net, inp, prec, iterations, batched=True)


def stddev_unoptimized(net: PartyNetwork, inp: StdDevInput, prec: int = 1,
                       iterations: int | None = None) -> SecretFixed:
    """Same arithmetic as :func:`stddev`, squared differences one round each."""
    return _stddev(net, inp, prec, iterations, batched=False)


# -- chi-squared ------------------------------------------------------------

def _marginals(net: PartyNetwork, inp: ChiSqInput):
    with net.phase("input"):
        rows = [net.distribute_input(i, row) for i, row in enumerate(inp.matrix)]
    n, m = inp.shape
    with net.phase("marginals"):
        row_sums = [sum_secret(r) for r in rows]
        col_sums = [sum_secret([rows[i][j] for i in range(n)]) for j in range(m)]
        total = sum_secret(row_sums)
    return rows, row_sums, col_sums, total


def chisq_optimized(net: PartyNetwork, inp: ChiSqInput) -> ChiSqResult:
    """Per cell (x*s_o - s_c*s_r)^2 / (s_c*s_r*s_o): four batched products, one division."""
    n, m = inp.shape
    rows, row_sums, col_sums, total = _marginals(net, inp)
    cells = [(i, j) for i in range(n) for j in range(m)]
    nm = len(cells)
    with net.phase("cells"):
        stage1 = mul_secret_batch([(col_sums[j], row_sums[i]) for i, j in cells]
                                  + [(rows[i][j], total) for i, j in cells])
        expected, scaled = stage1[:nm], stage1[nm:]
        diffs = [x - e for x, e in zip(scaled, expected)]
        stage2 = mul_secret_batch([(d, d) for d in diffs] + [(e, total) for e in expected])
        fx = int_to_fixed_batch(stage2)
        contrib = div_fixed_batch(list(zip(fx[:nm], fx[nm:])))
    with net.phase("sum"):
        stat = tree_sum_fixed(contrib)
    return ChiSqResult(stat, (n - 1) * (m - 1))


def chisq_unoptimized(net: PartyNetwork, inp: ChiSqInput) -> ChiSqResult:
    """Textbook per-cell form: E = s_c*s_r/s_o, then (O - E)^2 / E in fixed point."""
    n, m = inp.shape
    rows, row_sums, col_sums, total = _marginals(net, inp)
    cells = [(i, j) for i in range(n) for j in range(m)]
    nm = len(cells)
    with net.phase("cells"):
        prods = mul_secret_batch([(col_sums[j], row_sums[i]) for i, j in cells])
        fx = int_to_fixed_batch(prods + [rows[i][j] for i, j in cells] + [total])
        prods_fx, obs_fx, total_fx = fx[:nm], fx[nm:2 * nm], fx[2 * nm]
        expected = div_fixed_batch([(e, total_fx) for e in prods_fx])
        dev = sub_fixed_batch(list(zip(obs_fx, expected)))
        dev_sq = mul_fixed_batch([(d, d) for d in dev])
        contrib = div_fixed_batch(list(zip(dev_sq, expected)))
    with net.phase("sum"):
        stat = tree_sum_fixed(contrib)
    return ChiSqResult(stat, (n - 1) * (m - 1))


# -- program runner ---------------------------------------------------------

@dataclass
class ProgramResult:
    program: str
    value: Fraction
    ledger: dict
    df: int | None = None
    elapsed: float = field(default=0.0, compare=False)


def required_bits(program: str, shape, input_bits: int, prec: int = 1) -> int:
    """Largest declared bitlength a program will create for inputs of ``shape``.

    ``shape`` is the total value count for stddev and (n, m) for chi-squared.
    Used to refuse sizes the field cannot hold before running anything.
    """
    def lg(k):
        return (k - 1).bit_length()

    if program.startswith("stddev"):
        mean_bits = input_bits + lg(shape)
        var_bits = 2 * (mean_bits + 1) + lg(shape)
        num_bits = var_bits + (100**prec - 1).bit_length()
        return 2 * num_bits + 1
    n, m = shape
    s_r = input_bits + lg(m)
    s_c = input_bits + lg(n)
    s_o = s_r + lg(n)
    diff = max(input_bits + s_o, s_c + s_r) + 1
    return max(2 * diff, s_c + s_r + s_o)


def run_program(program: str, data, config: EngineConfig | None = None, prec: int = 1,
                iterations: int | None = None) -> ProgramResult:
    """Run one program end to end and open its output.

    ``data`` is a list of per-party value lists (stddev) or the count matrix
    (chi-squared).
    """
    config = config or EngineConfig()
    if program not in PROGRAMS:
        raise ConfigurationError(f"unknown program {program!r}; choose from {', '.join(PROGRAMS)}")
    net = PartyNetwork(config)
    start = time.perf_counter()
    df = None
    if program.startswith("stddev"):
        inp = StdDevInput(data)
        need = required_bits(program, inp.total, config.input_bits, prec)
        if need > net.field.signed_capacity:
            raise RangeOverflowError(f"{program} on {inp.total} values needs {need} bits, field holds {net.field.signed_capacity}")
        fn = stddev if program == "stddev" else stddev_unoptimized
        out = fn(net, inp, prec, iterations)
    else:
        inp = ChiSqInput(data)
        need = required_bits(program, inp.shape, config.input_bits)
        if need > net.field.signed_capacity:
            raise RangeOverflowError(f"{program} on {inp.shape} needs {need} bits, field holds {net.field.signed_capacity}")
        fn = chisq_optimized if program == "chisq" else chisq_unoptimized
        res = fn(net, inp)
        out, df = res.statistic, res.degrees_of_freedom
    with net.phase("output"):
        value = net.open(out)
    elapsed = time.perf_counter() - start
    return ProgramResult(program, value, net.ledger_report(), df, elapsed)
