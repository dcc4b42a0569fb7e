import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heatcone.exact import (
    ExactScalar,
    GradeMismatch,
    as_fraction,
    bernoulli,
    gamma_half,
    k_coefficients,
    linear_combination,
)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)
grades = st.integers(-8, 8)
scalars = st.builds(ExactScalar, fractions, grades)


@pytest.mark.parametrize("n,want", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (4, Fraction(-1, 30)), (6, Fraction(1, 42)), (12, Fraction(-691, 2730))])
def test_bernoulli_values(n, want):
    assert bernoulli(n) == want


@pytest.mark.parametrize("n", range(1, 25))
def test_bernoulli_recurrence(n):
    assert sum(math.comb(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0


@pytest.mark.parametrize("j", range(1, 11))
def test_odd_bernoulli_vanish(j):
    assert bernoulli(2 * j + 1) == 0


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


@pytest.mark.parametrize("l,want", [(1, [1]), (2, [-1, 1]), (3, [4, -5, 1]), (4, [-36, 49, -14, 1])])
def test_k_coefficients(l, want):
    assert list(k_coefficients(l).coeffs) == want


@pytest.mark.parametrize("l", range(1, 9))
def test_k_polynomial_roots_and_top_value(l):
    kp = k_coefficients(l)
    assert kp[l] == 1
    for q in range(l):
        assert kp.evaluate(q) == 0
    assert kp.evaluate(l) == l * math.factorial(2 * l - 1)


def test_k_polynomial_index_bounds():
    with pytest.raises(IndexError):
        k_coefficients(2)[3]
    with pytest.raises(ValueError):
        k_coefficients(0)


@pytest.mark.parametrize("l,want", [(0, 1), (1, Fraction(1, 2)), (2, Fraction(3, 4)), (-1, -2), (-2, Fraction(4, 3))])
def test_gamma_half(l, want):
    g = gamma_half(l)
    assert g == ExactScalar(want, 1)
    assert math.isclose(g.to_float(), math.gamma(l + 0.5), rel_tol=1e-14)


@given(scalars, scalars, scalars)
def test_multiplication_associative_commutative(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(fractions, fractions, fractions, grades)
def test_addition_within_grade(x, y, z, k):
    a, b, c = ExactScalar(x, k), ExactScalar(y, k), ExactScalar(z, k)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a - a == 0


@given(scalars)
def test_json_round_trip(a):
    assert ExactScalar.from_json(a.to_json()) == a
    assert ExactScalar.from_json(a.to_json()).pi_half == a.pi_half


@given(fractions.filter(bool), fractions.filter(bool), grades, grades)
def test_grade_mismatch(x, y, k1, k2):
    a, b = ExactScalar(x, k1), ExactScalar(y, k2)
    if k1 == k2:
        a + b
    else:
        with pytest.raises(GradeMismatch):
            a + b


@given(grades)
def test_zero_is_canonical_and_absorbing(k):
    z = ExactScalar(0, k)
    assert z.pi_half == 0
    assert z + ExactScalar(3, 5) == ExactScalar(3, 5)


@given(scalars)
def test_to_float_and_mpf_agree(a):
    assert math.isclose(a.to_float(), float(a.to_mpf(30)), rel_tol=1e-15, abs_tol=0)


def test_float_mixing_is_refused():
    a = ExactScalar(1, 2)
    with pytest.raises(TypeError):
        a + 0.5
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_ordering_across_grades_refused():
    with pytest.raises(GradeMismatch):
        ExactScalar(1, 2) < ExactScalar(1, 4)
    assert ExactScalar(-1, 2) < 0


def test_str_forms():
    assert str(ExactScalar(2, 4)) == "2*pi^2"
    assert str(ExactScalar(Fraction(1, 2), 1)) == "1/2*pi^(1/2)"
    assert str(ExactScalar(1, 2)) == "pi"


def test_linear_combination_exact_and_float():
    v = [ExactScalar(1, 2), ExactScalar(3, 2)]
    assert linear_combination([2, Fraction(1, 3)], v) == ExactScalar(3, 2)
    # zero coefficients never force demotion
    assert linear_combination([1, 0], [ExactScalar(1), 0.7]) == 1
    assert linear_combination([1, 1], [ExactScalar(1), 0.5]) == 1.5
