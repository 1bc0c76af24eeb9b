"""Arithmetic on secret-shared values.

Linear operations (addition, subtraction, scaling by a public integer) are
computed share-wise with no interaction.  Everything else is expressed as
gates and goes through the owning network's batch scheduler, so that cost is
recorded in one place.  ``*_batch`` variants schedule independent instances
together and pay the round cost once.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from .errors import ConfigurationError, RangeOverflowError
from .gates import Gate, GateKind

if TYPE_CHECKING:
    from .engine import PartyNetwork


def _ceil_log2(k: int) -> int:
    return (k - 1).bit_length()


class SecretInt:
    """Shares of a signed integer, one residue per party (party i at point i+1).

    ``bits`` is the declared magnitude bound, ``|value| < 2**bits``.
    """

    __slots__ = ("net", "shares", "bits")

    def __init__(self, net: PartyNetwork, shares: tuple[int, ...], bits: int):
        if bits > net.field.signed_capacity:
            raise RangeOverflowError(
                f"declared bitlength {bits} exceeds field capacity {net.field.signed_capacity}")
        self.net = net
        self.shares = shares
        self.bits = bits

    def party_shares(self):
        from .field import FieldElement
        from .shamir import Share

        f = self.net.field
        return [Share(i + 1, FieldElement(v, f), self.net.config.t) for i, v in enumerate(self.shares)]

    def __add__(self, other):
        if isinstance(other, SecretInt):
            return add_secret(self, other)
        if isinstance(other, int):
            return add_public(self, other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SecretInt):
            return sub_secret(self, other)
        if isinstance(other, int):
            return add_public(self, -other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return add_public(neg_secret(self), other)
        return NotImplemented

    def __neg__(self):
        return neg_secret(self)

    def __mul__(self, other):
        if isinstance(other, SecretInt):
            return mul_secret(self, other)
        if isinstance(other, int):
            return mul_public(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"SecretInt(bits={self.bits})"


class SecretFixed:
    """Fixed-point secret: ``raw`` encodes value * 2**f."""

    __slots__ = ("raw", "f")

    def __init__(self, raw: SecretInt, f: int):
        self.raw = raw
        self.f = f

    @property
    def net(self):
        return self.raw.net

    def __add__(self, other):
        return add_fixed(self, other)

    def __sub__(self, other):
        return sub_fixed(self, other)

    def __neg__(self):
        return neg_fixed(self)

    def __repr__(self):
        return f"SecretFixed(f={self.f}, bits={self.raw.bits})"


def _same_net(a: SecretInt, b: SecretInt):
    if a.net is not b.net:
        raise ConfigurationError("secrets belong to different networks")


# -- free linear operations -------------------------------------------------

def add_secret(a: SecretInt, b: SecretInt) -> SecretInt:
    _same_net(a, b)
    p = a.net.field.modulus
    return SecretInt(a.net, tuple((x + y) % p for x, y in zip(a.shares, b.shares)), max(a.bits, b.bits) + 1)


def sub_secret(a: SecretInt, b: SecretInt) -> SecretInt:
    _same_net(a, b)
    p = a.net.field.modulus
    return SecretInt(a.net, tuple((x - y) % p for x, y in zip(a.shares, b.shares)), max(a.bits, b.bits) + 1)


def neg_secret(a: SecretInt) -> SecretInt:
    p = a.net.field.modulus
    return SecretInt(a.net, tuple(-x % p for x in a.shares), a.bits)


def add_public(a: SecretInt, c: int) -> SecretInt:
    p = a.net.field.modulus
    # a constant is a degree-0 sharing, so every party adds it to its share
    shift = c % p
    return SecretInt(a.net, tuple((x + shift) % p for x in a.shares), max(a.bits, abs(c).bit_length()) + 1)


def mul_public(a: SecretInt, c: int) -> SecretInt:
    if not isinstance(c, int):
        raise ConfigurationError(f"public multiplier must be an integer, got {type(c).__name__}")
    p = a.net.field.modulus
    bits = a.bits + (abs(c) - 1).bit_length() if c else 0
    cc = c % p
    return SecretInt(a.net, tuple(x * cc % p for x in a.shares), bits)


def sum_secret(xs: Sequence[SecretInt]) -> SecretInt:
    """Free sum of many secrets; bound widens by ceil(log2 k) rather than k-1."""
    if not xs:
        raise ConfigurationError("cannot sum an empty list")
    net = xs[0].net
    p = net.field.modulus
    acc = [0] * len(xs[0].shares)
    for x in xs:
        _same_net(xs[0], x)
        for i, v in enumerate(x.shares):
            acc[i] += v
    bits = max(x.bits for x in xs) + _ceil_log2(len(xs))
    return SecretInt(net, tuple(v % p for v in acc), bits)


# -- interactive integer operations ----------------------------------------

def mul_secret_batch(pairs: Sequence[tuple[SecretInt, SecretInt]]) -> list[SecretInt]:
    if not pairs:
        return []
    return pairs[0][0].net.run_batch([Gate(GateKind.MUL, (a, b)) for a, b in pairs])


def mul_secret(a: SecretInt, b: SecretInt) -> SecretInt:
    _same_net(a, b)
    return mul_secret_batch([(a, b)])[0]


def div_secret_int_batch(pairs: Sequence[tuple[SecretInt, SecretInt]], bits: int | None = None) -> list[SecretInt]:
    """Quotients truncated toward zero, as C integer division does."""
    if not pairs:
        return []
    return pairs[0][0].net.run_batch([Gate(GateKind.DIV_INT, (a, b), bits=bits) for a, b in pairs])


def div_secret_int(a: SecretInt, b: SecretInt, bits: int | None = None) -> SecretInt:
    _same_net(a, b)
    return div_secret_int_batch([(a, b)], bits=bits)[0]


# -- fixed point ------------------------------------------------------------

def _check_f(a: SecretFixed, b: SecretFixed):
    if a.f != b.f:
        raise ConfigurationError(f"fixed-point operands with different precision ({a.f} vs {b.f})")
    _same_net(a.raw, b.raw)


def int_to_fixed_batch(xs: Sequence[SecretInt]) -> list[SecretFixed]:
    if not xs:
        return []
    return xs[0].net.run_batch([Gate(GateKind.INT_TO_FIXED, (x,)) for x in xs])


def int_to_fixed(a: SecretInt, f: int | None = None) -> SecretFixed:
    if f is not None and f != a.net.config.frac_bits:
        raise ConfigurationError(f"network runs with f={a.net.config.frac_bits}, asked for f={f}")
    return int_to_fixed_batch([a])[0]


def fixed_constant(net: PartyNetwork, value) -> SecretFixed:
    """Public constant as a fixed-point secret; ``value`` is rounded toward zero."""
    f = net.config.frac_bits
    q = Fraction(value) * 2**f
    raw = int(q)
    return SecretFixed(net.constant(raw), f)


def add_fixed_batch(pairs: Sequence[tuple[SecretFixed, SecretFixed]]) -> list[SecretFixed]:
    if not pairs:
        return []
    for a, b in pairs:
        _check_f(a, b)
    return pairs[0][0].net.run_batch([Gate(GateKind.ADD_FIXED, (a, b)) for a, b in pairs])


def add_fixed(a: SecretFixed, b: SecretFixed) -> SecretFixed:
    return add_fixed_batch([(a, b)])[0]


def neg_fixed(a: SecretFixed) -> SecretFixed:
    return SecretFixed(neg_secret(a.raw), a.f)


def sub_fixed_batch(pairs: Sequence[tuple[SecretFixed, SecretFixed]]) -> list[SecretFixed]:
    return add_fixed_batch([(a, neg_fixed(b)) for a, b in pairs])


def sub_fixed(a: SecretFixed, b: SecretFixed) -> SecretFixed:
    return sub_fixed_batch([(a, b)])[0]


def mul_fixed_batch(pairs: Sequence[tuple[SecretFixed, SecretFixed]]) -> list[SecretFixed]:
    """Raw product (scale 2**2f) followed by a batched truncation back to 2**f."""
    if not pairs:
        return []
    for a, b in pairs:
        _check_f(a, b)
    net = pairs[0][0].net
    prods = mul_secret_batch([(a.raw, b.raw) for a, b in pairs])
    return net.run_batch([Gate(GateKind.TRUNC_FIXED, (x,)) for x in prods])


def mul_fixed(a: SecretFixed, b: SecretFixed) -> SecretFixed:
    return mul_fixed_batch([(a, b)])[0]


def div_fixed_batch(pairs: Sequence[tuple[SecretFixed, SecretFixed]]) -> list[SecretFixed]:
    if not pairs:
        return []
    for a, b in pairs:
        _check_f(a, b)
    return pairs[0][0].net.run_batch([Gate(GateKind.DIV_FIXED, (a, b)) for a, b in pairs])


def div_fixed(a: SecretFixed, b: SecretFixed) -> SecretFixed:
    return div_fixed_batch([(a, b)])[0]


def tree_sum_fixed(xs: Sequence[SecretFixed]) -> SecretFixed:
    """Pairwise tree summation in ceil(log2 k) sequential batches.

    Element j is paired with element (live - j - 1), and the list is
    zero-padded to the next power of two first.
    """
    if not xs:
        raise ConfigurationError("tree sum of an empty list")
    f = xs[0].f
    for x in xs:
        _check_f(xs[0], x)
    live = 1 << _ceil_log2(len(xs))
    vals = list(xs)
    if live > len(vals):
        zero = fixed_constant(xs[0].net, 0)
        vals += [zero] * (live - len(vals))
    while live > 1:
        half = live // 2
        vals[:half] = add_fixed_batch([(vals[j], vals[live - j - 1]) for j in range(half)])
        live = half
    assert vals[0].f == f
    return vals[0]
