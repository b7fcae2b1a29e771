from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.harbourne.errors import FieldMismatchError, UnsupportedFieldError
from src.core.harbourne.exactnum import (
    OMEGA,
    EisensteinRational,
    FieldDescriptor,
    PrimeFieldElement,
    decode_scalar,
    encode_scalar,
    field_add,
    field_inverse,
    field_mul,
    field_neg,
    field_sub,
)
from src.utils.constants import SUPPORTED_PRIMES

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)
eisenstein = st.builds(EisensteinRational, rationals, rationals)


@st.composite
def prime_elements(draw):
    p = draw(st.sampled_from(SUPPORTED_PRIMES))
    return PrimeFieldElement(draw(st.integers(0, p - 1)), p)


def test_rational_addition():
    assert field_add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_prime_multiplication():
    assert field_mul(PrimeFieldElement(2, 3), PrimeFieldElement(2, 3)) == PrimeFieldElement(1, 3)


def test_omega_squared():
    assert field_mul(OMEGA, OMEGA) == EisensteinRational(-1, -1)


def test_omega_is_a_cube_root_of_unity():
    assert OMEGA * OMEGA * OMEGA == EisensteinRational(1)
    assert 1 + OMEGA + OMEGA * OMEGA == EisensteinRational(0)


def test_inverse_examples():
    assert field_inverse(Fraction(5, 3)) == Fraction(3, 5)
    assert field_inverse(PrimeFieldElement(2, 3)) == PrimeFieldElement(2, 3)
    x = EisensteinRational(1, 1)
    assert x.norm() == 1
    assert x * field_inverse(x) == EisensteinRational(1)


def test_negation_and_subtraction():
    assert field_neg(PrimeFieldElement(1, 5)) == PrimeFieldElement(4, 5)
    assert field_sub(EisensteinRational(1, 2), EisensteinRational(1, 1)) == OMEGA


@pytest.mark.parametrize(
    "zero",
    [Fraction(0), PrimeFieldElement(0, 7), EisensteinRational(0, 0)],
)
def test_inverse_of_zero(zero):
    with pytest.raises(ZeroDivisionError):
        field_inverse(zero)


def test_mismatched_fields():
    with pytest.raises(FieldMismatchError):
        field_add(PrimeFieldElement(1, 2), PrimeFieldElement(1, 3))
    with pytest.raises(FieldMismatchError):
        field_mul(Fraction(1, 2), OMEGA)
    with pytest.raises(FieldMismatchError):
        field_add(PrimeFieldElement(1, 3), Fraction(1))


def test_prime_field_construction():
    assert FieldDescriptor.prime(13).characteristic == 13
    with pytest.raises(ValueError):
        FieldDescriptor.prime(9)
    with pytest.raises(UnsupportedFieldError):
        FieldDescriptor.prime(17)


@pytest.mark.parametrize("p", [0, 1, 4, 9])
def test_prime_field_element_needs_a_prime_modulus(p):
    with pytest.raises(ValueError, match="not prime"):
        PrimeFieldElement(0, p)


@pytest.mark.parametrize(
    "text, kind, p",
    [("f3", "prime", 3), ("F2", "prime", 2), ("q", "rational", None), ("eisenstein", "eisenstein", None)],
)
def test_descriptor_parse(text, kind, p):
    field = FieldDescriptor.parse(text)
    assert (field.kind, field.p) == (kind, p)


@given(rationals.filter(bool))
def test_rational_inverse_property(x):
    assert field_mul(x, field_inverse(x)) == 1


@given(prime_elements().filter(bool))
def test_prime_inverse_property(x):
    assert field_mul(x, field_inverse(x)) == PrimeFieldElement(1, x.p)


@given(eisenstein.filter(bool))
def test_eisenstein_inverse_property(x):
    assert field_mul(x, field_inverse(x)) == EisensteinRational(1)


@given(eisenstein, eisenstein, eisenstein)
def test_eisenstein_ring_laws(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(st.sampled_from(SUPPORTED_PRIMES), st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_prime_field_agrees_with_integers_mod_p(p, a, b):
    x, y = PrimeFieldElement(a % p, p), PrimeFieldElement(b % p, p)
    assert (x + y).residue == (a + b) % p
    assert (x * y).residue == (a * b) % p
    assert (x - y).residue == (a - b) % p


@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_rationals_agree_with_integers(a, b):
    assert field_add(Fraction(a), Fraction(b)) == a + b
    assert field_mul(Fraction(a), Fraction(b)) == a * b


def test_scalar_encodings():
    assert encode_scalar(Fraction(-3, 4)) == "-3/4"
    assert encode_scalar(Fraction(6, 3)) == "2"
    assert encode_scalar(PrimeFieldElement(2, 3)) == 2
    assert encode_scalar(EisensteinRational(Fraction(1, 2), -1)) == ["1/2", "-1"]


def test_scalar_decoding_rejects_malformed_values():
    q = FieldDescriptor.rational()
    f3 = FieldDescriptor.prime(3)
    qw = FieldDescriptor.eisenstein()
    assert decode_scalar("-7/2", q) == Fraction(-7, 2)
    assert decode_scalar(["0", "1"], qw) == OMEGA
    for bad in ["1.5", "1/0", 3, "x"]:
        with pytest.raises(ValueError):
            decode_scalar(bad, q)
    for bad in [3, -1, True, "1"]:
        with pytest.raises(ValueError, match="lines"):
            decode_scalar(bad, f3, "lines[0][1]")
    with pytest.raises(ValueError):
        decode_scalar(["1"], qw)
