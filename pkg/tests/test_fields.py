"""Field arithmetic: examples checked against independent oracles, plus
axiom property tests (exhaustive on GF(2)/GF(4), randomized elsewhere)."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

import wallforms as wf
from wallforms.errors import (
    CapExceeded,
    DescriptorMismatch,
    DivisionByZero,
    NotASquare,
    ParseError,
)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def _poly_mul_mod_oracle(a, b, modulus, k):
    """Carry-less multiply then long-divide; written independently of the
    library's reduction (schoolbook on bit lists)."""
    prod = 0
    for i in range(k):
        if b >> i & 1:
            prod ^= a << i
    md = modulus.bit_length() - 1
    for i in range(prod.bit_length() - 1, md - 1, -1):
        if prod >> i & 1:
            prod ^= modulus << (i - md)
    return prod


def _poly_gcd_oracle(a, b):
    while b:
        # remainder by repeated top-bit cancellation
        while a and a.bit_length() >= b.bit_length():
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def test_gf4_multiplication_table_matches_modulus_oracle(f4):
    for a in range(4):
        for b in range(4):
            expected = _poly_mul_mod_oracle(a, b, 0b111, 2)
            assert f4.mul(a, b) == expected


def test_gf4_generator_example(f4):
    w = f4.parse("w")
    assert w * f4.parse("w+1") == f4.one


def test_add_zero_identity(f4, f7, ft):
    for field, lit in [(f4, "w+1"), (f7, "5"), (ft, "(t^2+1)/t")]:
        a = field.parse(lit)
        assert a + field.zero == a


def test_ratfunc_normalization_against_gcd_oracle(ft):
    # (t^2 + t) / t reduces by the gcd t
    num, den = 0b110, 0b10
    g = _poly_gcd_oracle(num, den)
    assert g == 0b10
    a = ft.fraction(num, den)
    assert a == ft.parse("t+1")
    assert a.payload == (0b11, 1)


def test_ratfunc_random_fractions_are_reduced(ft):
    for num in range(1, 40):
        for den in range(1, 40):
            n, d = ft.fraction(num, den).payload
            assert _poly_gcd_oracle(n, d) == 1


def test_descriptor_mismatch(f4, f7):
    with pytest.raises(DescriptorMismatch):
        f4.one + f7.one


def test_division_by_zero(f7, ft):
    with pytest.raises(DivisionByZero):
        f7.one / f7.zero
    with pytest.raises(DivisionByZero):
        ft.one / ft.zero


# ---------------------------------------------------------------------------
# square classes
# ---------------------------------------------------------------------------

def test_galois2_everything_is_square(f4, f8):
    for field in (f4, f8):
        for a in field.elements():
            assert field.is_square(a)
            r = field.sqrt(a)
            assert r * r == a


def test_gf8_sqrt_is_fourth_power(f8):
    for a in f8.elements():
        assert f8.sqrt(a) == a ** 4


def test_gf7_squares_by_euler_criterion(f7):
    # Euler: a is a square iff a^3 = 1 (mod 7), for a != 0
    for a in range(1, 7):
        assert f7.is_square(f7.element(a)) == (pow(a, 3, 7) == 1)
    assert not f7.is_square(f7.parse("3"))
    assert f7.is_square(f7.zero)


def test_gf7_sqrt_of_two(f7):
    r = f7.sqrt(f7.parse("2"))
    assert r.payload in (3, 4)
    assert r * r == f7.parse("2")


def test_gf7_sqrt_raises_for_nonsquare(f7):
    with pytest.raises(NotASquare):
        f7.sqrt(f7.parse("3"))


def test_ratfunc_squares(ft):
    assert not ft.is_square(ft.parse("t"))
    assert ft.is_square(ft.parse("t^2+1"))
    assert ft.sqrt(ft.parse("t^2+1")) == ft.parse("t+1")
    assert ft.is_square(ft.parse("(t^2)/(t^4+t^2+1)"))
    assert not ft.is_square(ft.parse("(t^3)/(t^2+1)"))


# ---------------------------------------------------------------------------
# field axioms: exhaustive on the tiny fields
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("literal", ["gf(2)", "gf(4;x^2+x+1)"])
def test_axioms_exhaustive(literal):
    field = wf.parse_field(literal)
    elems = list(field.elements())
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in elems:
        if a:
            assert a * (field.one / a) == field.one


# ---------------------------------------------------------------------------
# field axioms: randomized on the larger fields
# ---------------------------------------------------------------------------

F7 = wf.parse_field("gf(7)")
F8 = wf.parse_field("gf(8)")
FT = wf.parse_field("gf2(t)")

gf7_elements = st.integers(0, 6).map(F7.element)
gf8_elements = st.integers(0, 7).map(F8.element)
ratfunc_elements = st.builds(
    FT.fraction, st.integers(0, 255), st.integers(1, 255)
)


@settings(max_examples=200)
@given(gf7_elements, gf7_elements, gf7_elements)
def test_gf7_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=200)
@given(ratfunc_elements, ratfunc_elements, ratfunc_elements)
def test_ratfunc_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=100)
@given(ratfunc_elements)
def test_ratfunc_division_roundtrip(a):
    if a:
        assert (FT.one / a) * a == FT.one


@settings(max_examples=100)
@given(gf8_elements, gf8_elements)
def test_gf8_frobenius_additive(a, b):
    assert (a + b) ** 2 == a ** 2 + b ** 2


@settings(max_examples=100)
@given(ratfunc_elements)
def test_ratfunc_square_roundtrip(a):
    sq = a * a
    assert FT.is_square(sq)
    assert FT.sqrt(sq) * FT.sqrt(sq) == sq


# ---------------------------------------------------------------------------
# literals
# ---------------------------------------------------------------------------

def test_field_literal_roundtrip():
    for lit in ["gf(2)", "gf(7)", "gf(97)", "gf(4;x^2+x+1)", "gf(8;x^3+x+1)", "gf2(t)"]:
        field = wf.parse_field(lit)
        assert wf.parse_field(field.literal()) == field


def test_field_literal_defaults():
    assert wf.parse_field("gf(8)") == wf.parse_field("gf(8;x^3+x+1)")


def test_bad_field_literals():
    for lit in ["gf(6)", "gf(99)", "qq", "gf(4;x^2+1)", "gf(-3)"]:
        with pytest.raises((ParseError, CapExceeded)):
            wf.parse_field(lit)


def test_element_literal_roundtrip(f4, f7, ft):
    for field, lits in [
        (f4, ["0", "1", "w", "w+1"]),
        (f7, ["0", "3", "6"]),
        (ft, ["0", "1", "t", "t+1", "(t^2+1)/t", "(t^2+t)/(t^3+1)"]),
    ]:
        for lit in lits:
            e = field.parse(lit)
            assert field.parse(str(e)) == e


def test_prime_field_caps():
    with pytest.raises((ParseError, CapExceeded)):
        wf.PrimeField(101)
    with pytest.raises(ParseError):
        wf.PrimeField(9)


def test_ratfunc_degree_cap(ft):
    with pytest.raises(CapExceeded):
        ft.fraction(1 << 70, 1)


def test_gf32_raw_arithmetic_axioms():
    # k = 5 exceeds the table threshold, exercising the carry-less path
    field = wf.parse_field("gf(32)")
    elems = [field.element(p) for p in (0, 1, 7, 19, 30, 31)]
    for a in elems:
        for b in elems:
            assert a + b == b + a
            assert a * b == b * a
            if b:
                assert (a / b) * b == a
    for a in elems:
        for b in elems:
            for c in elems:
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c
    for a in elems:
        r = field.sqrt(a)
        assert r * r == a


def test_ratfunc_parse_rejects_double_slash(ft):
    with pytest.raises(ParseError):
        ft.parse("t/t/t")
    with pytest.raises(ParseError):
        ft.parse("t^-2")
