"""Prime field arithmetic and the signed (centered-lift) integer encoding.

Everything secret in the engine is an integer modulo one global prime.
Hot paths in the sharing and protocol layers work on raw ``int`` residues;
:class:`FieldElement` is the checked, user-facing wrapper around them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from sympy import isprime

from .errors import ConfigurationError, RangeOverflowError

DEFAULT_PRIME = 2**255 - 19


def parse_modulus(text) -> int:
    """Accept an int, a decimal string or a ``0x``-prefixed hex string."""
    if isinstance(text, int):
        return text
    text = str(text).strip().replace("_", "")
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigurationError(f"cannot parse modulus {text!r}") from None


@dataclass(frozen=True)
class PrimeField:
    modulus: int

    def __post_init__(self):
        p = self.modulus
        if not isinstance(p, int) or p < 3:
            raise ConfigurationError(f"modulus must be an odd prime, got {p!r}")
        if not isprime(p):
            raise ConfigurationError(f"modulus {p} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.modulus, self)

    def __repr__(self):
        return f"PrimeField({self.modulus:#x})" if self.modulus > 2**32 else f"PrimeField({self.modulus})"

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    @cached_property
    def byte_length(self) -> int:
        """Bytes needed to transmit one element, ceil(log2 p / 8)."""
        return (self.modulus.bit_length() + 7) // 8

    @cached_property
    def signed_capacity(self) -> int:
        """Largest ``b`` such that every ``|x| < 2**b`` encodes without wrap."""
        return self.modulus.bit_length() - 2

    def encode_signed_raw(self, x: int) -> int:
        if 2 * abs(x) >= self.modulus:
            raise RangeOverflowError(f"|{x}| does not fit below p/2 for p={self.modulus}")
        return x % self.modulus

    def decode_signed_raw(self, r: int) -> int:
        r %= self.modulus
        return r - self.modulus if 2 * r > self.modulus else r

    def encode_signed(self, x: int) -> FieldElement:
        return FieldElement(self.encode_signed_raw(x), self)

    def decode_signed(self, e: FieldElement) -> int:
        _check_same(e.field, self)
        return self.decode_signed_raw(e.value)


def _check_same(f1: PrimeField, f2: PrimeField):
    if f1.modulus != f2.modulus:
        raise ConfigurationError(f"field mismatch: {f1} vs {f2}")


class FieldElement:
    """Immutable residue of a :class:`PrimeField`."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        if not 0 <= value < field.modulus:
            raise ConfigurationError(f"{value} is not a reduced residue mod {field.modulus}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            _check_same(self.field, other.field)
            return other.value
        if isinstance(other, int):
            return other % self.field.modulus
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement((self.value + v) % self.field.modulus, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement((self.value - v) % self.field.modulus, self.field)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement((v - self.value) % self.field.modulus, self.field)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.value * v % self.field.modulus, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.field.modulus, self.field)

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return FieldElement(pow(self.value, -1, self.field.modulus), self.field)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * FieldElement(v, self.field).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field.modulus == other.field.modulus
        if isinstance(other, int):
            return self.value == other % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.field.modulus})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a.field, b.field)
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a.field, b.field)
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def encode_signed(x: int, field: PrimeField) -> FieldElement:
    return field.encode_signed(x)


def decode_signed(e: FieldElement) -> int:
    return e.field.decode_signed(e)
