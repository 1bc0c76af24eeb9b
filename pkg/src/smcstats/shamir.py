"""(t, n)-threshold Shamir sharing over a prime field.

Parties sit at the fixed evaluation points 1..n.  The ``*_raw`` helpers work
on plain residues and are what the engine uses internally; :func:`share` and
:func:`reconstruct` are the checked API over :class:`Share` objects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import ConfigurationError, InsufficientSharesError
from .field import FieldElement, PrimeField


@dataclass(frozen=True)
class Share:
    point: int
    value: FieldElement
    degree: int


@dataclass(frozen=True)
class SharingConfig:
    """Party count, threshold, field and seed of the share generator.

    ``t = 0`` is accepted for tests (every share then equals the secret);
    engines always run with ``t >= 1``.
    """

    n: int
    t: int
    field: PrimeField
    rng_seed: int | None = 0

    def __post_init__(self):
        if self.n < 3:
            raise ConfigurationError(f"need at least 3 computational parties, got n={self.n}")
        if self.t < 0:
            raise ConfigurationError(f"threshold must be non-negative, got t={self.t}")
        if self.n < 2 * self.t + 1:
            raise ConfigurationError(f"honest majority requires n >= 2t+1 (n={self.n}, t={self.t})")
        if self.n >= self.field.modulus:
            raise ConfigurationError("field too small for the evaluation points 1..n")

    def make_rng(self, stream: str = "") -> random.Random:
        """Deterministic generator for ``stream``; fresh OS entropy if the seed is None."""
        if self.rng_seed is None:
            return random.SystemRandom()
        return random.Random(f"{self.rng_seed}:{stream}")


def share_raw(secret: int, n: int, t: int, p: int, rng: random.Random) -> list[int]:
    """Values at points 1..n of a random degree-t polynomial with f(0) = secret."""
    coeffs = [rng.randrange(p) for _ in range(t)]
    out = []
    for x in range(1, n + 1):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc + c) * x
        out.append((acc + secret) % p)
    return out


@lru_cache(maxsize=4096)
def lagrange_raw(points: tuple[int, ...], target: int, p: int) -> tuple[int, ...]:
    if len(set(points)) != len(points):
        raise ConfigurationError(f"duplicate evaluation points in {points}")
    if not points:
        raise ConfigurationError("need at least one evaluation point")
    coeffs = []
    for i, xi in enumerate(points):
        num, den = 1, 1
        for j, xj in enumerate(points):
            if i != j:
                num = num * (target - xj) % p
                den = den * (xi - xj) % p
        coeffs.append(num * pow(den, -1, p) % p)
    return tuple(coeffs)


def interpolate_raw(points: Sequence[int], values: Sequence[int], target: int, p: int) -> int:
    lam = lagrange_raw(tuple(points), target, p)
    return sum(l * v for l, v in zip(lam, values)) % p


def lagrange_coefficients(points: Sequence[int], target: int, field: PrimeField) -> list[FieldElement]:
    """Weights λ_i with Σ λ_i f(points_i) = f(target) for deg f < len(points)."""
    return [FieldElement(c, field) for c in lagrange_raw(tuple(points), target, field.modulus)]


def share(secret: FieldElement | int, cfg: SharingConfig, rng: random.Random | None = None) -> list[Share]:
    if isinstance(secret, FieldElement):
        if secret.field.modulus != cfg.field.modulus:
            raise ConfigurationError("secret and sharing config use different fields")
        value = secret.value
    else:
        value = secret % cfg.field.modulus
    if rng is None:
        rng = cfg.make_rng("share")
    raw = share_raw(value, cfg.n, cfg.t, cfg.field.modulus, rng)
    return [Share(i + 1, FieldElement(v, cfg.field), cfg.t) for i, v in enumerate(raw)]


def reconstruct(shares: Sequence[Share], target: int = 0) -> FieldElement:
    if not shares:
        raise InsufficientSharesError("no shares given")
    degree = shares[0].degree
    field = shares[0].value.field
    if any(s.degree != degree for s in shares):
        raise ConfigurationError("shares of different degrees")
    if len(shares) < degree + 1:
        raise InsufficientSharesError(f"degree-{degree} sharing needs {degree + 1} shares, got {len(shares)}")
    used = shares[: degree + 1]
    value = interpolate_raw([s.point for s in used], [s.value.value for s in used], target, field.modulus)
    return FieldElement(value, field)
