import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from smcstats.errors import ConfigurationError, RangeOverflowError
from smcstats.field import (
    DEFAULT_PRIME,
    FieldElement,
    PrimeField,
    add,
    decode_signed,
    encode_signed,
    inv,
    mul,
    parse_modulus,
)

F101 = PrimeField(101)
FD = PrimeField(DEFAULT_PRIME)


def test_small_arithmetic():
    assert add(F101(3), F101(4)) == F101(7)
    assert mul(F101(50), F101(3)) == F101(49)
    assert F101(100) + F101(1) == F101(0)
    assert inv(F101(2)) == F101(51)
    assert inv(F101(1)) == F101(1)


def test_identities():
    a = FD(123456789)
    assert a + FD.zero == a
    assert a * FD.one == a
    assert a * FD.zero == FD.zero


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        inv(F101(0))


def test_field_mismatch():
    with pytest.raises(ConfigurationError):
        add(F101(1), PrimeField(103)(1))


def test_rejects_composite_modulus():
    with pytest.raises(ConfigurationError):
        PrimeField(100)


def test_parse_modulus():
    assert parse_modulus("0x65") == 101
    assert parse_modulus("101") == 101
    with pytest.raises(ConfigurationError):
        parse_modulus("ten")


def test_signed_encoding():
    assert encode_signed(-1, F101) == F101(100)
    assert decode_signed(F101(100)) == -1
    assert encode_signed(0, F101) == F101(0)
    with pytest.raises(RangeOverflowError):
        encode_signed(51, F101)


def test_signed_round_trip_random():
    rng = random.Random(5)
    half = DEFAULT_PRIME // 2
    for _ in range(1000):
        x = rng.randrange(-half, half + 1)
        assert decode_signed(encode_signed(x, FD)) == x


def test_element_is_immutable():
    e = F101(3)
    with pytest.raises(AttributeError):
        e.value = 4


@pytest.mark.parametrize("field", [F101, FD], ids=["p101", "default"])
def test_field_axioms(field):
    rng = random.Random(11)
    p = field.modulus
    for _ in range(300):
        a, b, c = (field(rng.randrange(p)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == field.zero
        if a.value:
            assert a * a.inverse() == field.one


@given(st.integers(-(2**100), 2**100), st.integers(-(2**100), 2**100))
def test_signed_products(a, b):
    got = decode_signed(mul(encode_signed(a, FD), encode_signed(b, FD)))
    assert got == a * b
