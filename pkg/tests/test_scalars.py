"""Exact scalar layer: ring axioms, canonical printing, q-objects."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qelliptic.errors import DegenerateParameters, DomainError
from qelliptic.scalars import (
    EXACT_Q,
    RATIONAL,
    ExactScalar,
    LaurentPoly,
    Tolerance,
    approx_eq,
    complex_field,
    q_binomial,
    q_factorial,
    q_number,
    q_number_numeric,
    st_number,
)

coeff_dicts = st.dictionaries(
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=-50, max_value=50),
    max_size=6,
)


def random_exact(rng: random.Random) -> ExactScalar:
    def poly():
        return LaurentPoly(
            {rng.randint(-4, 4): rng.randint(-9, 9) for _ in range(rng.randint(1, 4))}
        )

    den = poly()
    while den.is_zero:
        den = poly()
    return ExactScalar(poly(), den)


# -- Laurent polynomial ring ----------------------------------------------


@given(coeff_dicts, coeff_dicts)
def test_poly_add_commutes(c1, c2):
    a, b = LaurentPoly(c1), LaurentPoly(c2)
    assert a + b == b + a


@given(coeff_dicts, coeff_dicts)
def test_poly_mul_commutes(c1, c2):
    a, b = LaurentPoly(c1), LaurentPoly(c2)
    assert a * b == b * a


@given(coeff_dicts, coeff_dicts, coeff_dicts)
@settings(max_examples=50)
def test_poly_mul_distributes(c1, c2, c3):
    a, b, c = LaurentPoly(c1), LaurentPoly(c2), LaurentPoly(c3)
    assert a * (b + c) == a * b + a * c


@given(coeff_dicts)
def test_poly_print_parse_roundtrip(c):
    p = LaurentPoly(c)
    assert LaurentPoly.parse(str(p)) == p


def test_poly_print_grammar():
    assert str(LaurentPoly()) == "0"
    assert str(LaurentPoly({0: 1})) == "1"
    assert str(LaurentPoly({1: 1})) == "q"
    assert str(LaurentPoly({1: -1})) == "-q"
    assert str(LaurentPoly({-2: -1, -1: -1})) == "-q^-2 - q^-1"
    assert str(LaurentPoly({0: 1, 2: 3, 5: -1})) == "1 + 3*q^2 - q^5"


# -- canonical quotients ----------------------------------------------------


def test_normalization_examples():
    q = LaurentPoly.var()
    one = LaurentPoly.one()
    # (q^2 - 1) / (q^3 - q) reduces to (q + 1) / (q^2 + ... )? compute both ways
    x = ExactScalar(q * q - one, q * q * q - q)
    y = ExactScalar(one, q)
    assert x == y
    assert str(x) == "q^-1"
    # denominator sign gets normalized
    z = ExactScalar(one, LaurentPoly({0: -2}))
    assert str(z) == "(-1)/(2)"


def test_exact_scalar_roundtrip_strings():
    rng = random.Random(7)
    for _ in range(60):
        x = random_exact(rng)
        assert ExactScalar.parse(str(x)) == x


def test_exact_field_axioms():
    rng = random.Random(3)
    for _ in range(25):
        a, b, c = (random_exact(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + 0 == a
        assert a * 1 == a
        if not a.is_zero:
            assert a / a == ExactScalar.from_int(1)
            assert a * a ** -1 == ExactScalar.from_int(1)


def test_division_by_zero_rejected():
    one = ExactScalar.from_int(1)
    zero = ExactScalar.from_int(0)
    with pytest.raises(ZeroDivisionError):
        one / zero
    with pytest.raises(ZeroDivisionError):
        EXACT_Q.div(EXACT_Q.one, EXACT_Q.zero)
    f = complex_field()
    with pytest.raises(ZeroDivisionError):
        f.div(1 + 0j, 0j)


def test_numeric_field_axioms():
    rng = random.Random(11)
    f = complex_field()
    for _ in range(40):
        a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        assert f.eq(a * (b + c), a * b + a * c)
        assert f.eq((a + b) + c, a + (b + c))


# -- q-objects ---------------------------------------------------------------


def test_q_number_examples():
    assert q_number(0).is_zero
    assert q_number(1) == ExactScalar.from_int(1)
    assert str(q_number(3)) == "1 + q + q^2"
    assert str(q_number(-2)) == "-q^-2 - q^-1"


@pytest.mark.parametrize("m", range(-12, 13))
@pytest.mark.parametrize("n", [-12, -5, -1, 0, 1, 4, 12])
def test_q_number_difference_identity(m, n):
    # [m] - [n] = [m - n] * q^n, exactly
    lhs = q_number(m) - q_number(n)
    rhs = q_number(m - n) * ExactScalar.q_power(n)
    assert lhs == rhs


def test_q_factorial():
    assert q_factorial(0) == ExactScalar.from_int(1)
    expected = q_number(1) * q_number(2) * q_number(3)
    assert q_factorial(3) == expected
    assert q_factorial(5).evaluate_fraction(Fraction(1)) == 120
    with pytest.raises(DomainError):
        q_factorial(-1)


def test_q_binomial_frozen_values():
    assert q_binomial(4, 0) == ExactScalar.from_int(1)
    assert q_binomial(4, 4) == ExactScalar.from_int(1)
    assert str(q_binomial(4, 2)) == "1 + q + 2*q^2 + q^3 + q^4"


def test_q_binomial_symmetry_and_pascal():
    for n in range(1, 13):
        for k in range(n + 1):
            b = q_binomial(n, k)
            assert b == q_binomial(n, n - k)
            assert b.is_polynomial
            assert all(c > 0 for _, c in b.numerator.items())
            if 0 < k < n:
                qk = ExactScalar.q_power(k)
                qnk = ExactScalar.q_power(n - k)
                assert b == q_binomial(n - 1, k - 1) + qk * q_binomial(n - 1, k)
                assert b == qnk * q_binomial(n - 1, k - 1) + q_binomial(n - 1, k)


def test_q_binomial_counts_at_one():
    import math

    for n in range(9):
        for k in range(n + 1):
            val = q_binomial(n, k).evaluate_fraction(Fraction(1))
            assert val == math.comb(n, k)


def test_q_binomial_domain():
    with pytest.raises(DomainError):
        q_binomial(3, 4)
    with pytest.raises(DomainError):
        q_binomial(3, -1)


def test_exact_matches_numeric_evaluation():
    import cmath

    rng = random.Random(5)
    for _ in range(20):
        r = rng.uniform(0.3, 0.9)
        phi = rng.uniform(0, 2 * cmath.pi)
        q = r * cmath.exp(1j * phi)
        a = random_exact(rng)
        b = random_exact(rng)
        lhs = (a * b + a).evaluate(q)
        rhs = a.evaluate(q) * b.evaluate(q) + a.evaluate(q)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))


def test_q_number_numeric_limit():
    q = 0.7 + 0.2j
    for z in range(-4, 6):
        exact = q_number(z).evaluate(q)
        assert abs(exact - q_number_numeric(z, q)) < 1e-13
    assert q_number_numeric(5, 1) == 5


def test_stretch_substitutes_power():
    q = 0.6 + 0.1j
    x = q_binomial(5, 2)
    assert abs(x.stretch(3).evaluate(q) - x.evaluate(q ** 3)) < 1e-12


def test_st_number():
    assert st_number(0, 2, 1) == 0
    assert st_number(1, 2, 1) == 1
    assert st_number(3, 2, 1) == 7  # 2^2 + 2 + 1
    s = 0.8 + 0.1j
    # [i]_{s,t} at t = 1 is the ordinary q-number at q = s
    for i in range(6):
        assert abs(st_number(i, s, 1) - q_number(i).evaluate(s)) < 1e-12
    with pytest.raises(DegenerateParameters):
        st_number(4, 0.5 + 0.1j, 0.5 + 0.1j)


def test_tolerance_policy():
    tol = Tolerance(rel=1e-9, abs=1e-12)
    assert tol.close(1.0, 1.0 + 5e-10)
    assert not tol.close(1.0, 1.0 + 5e-8)
    # symmetry
    rng = random.Random(2)
    for _ in range(50):
        x = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        y = x + complex(rng.uniform(-1e-9, 1e-9), 0)
        assert tol.close(x, y) == tol.close(y, x)
    assert approx_eq(0.0, 1e-13)


def test_rational_field():
    assert RATIONAL.from_int(3) == Fraction(3)
    assert RATIONAL.div(Fraction(1), Fraction(2)) == Fraction(1, 2)
