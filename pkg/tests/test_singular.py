import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from heatcone.crosssection import Circle, ExplicitSpectrum, FlatTorus, Lens, RealProjective, SpaceForm, Sphere
from heatcone.exact import ExactScalar
from heatcone.heat_coeffs import HeatCoeffList, heat_coeffs_for, sphere_volume
from heatcone.singular import (
    Provenance,
    SingularTerms,
    TermValue,
    Verdict,
    b_4d_space_form,
    classify,
    constant_term,
    constant_term_from_combo,
    lens_constant,
    log_term,
    rpn_constant_closed,
    rpn_constant_summands,
    singular_terms,
    surface_constant,
    surface_isospectral_gate,
    torus_log_term,
    torus_log_term_heat,
    vanishing_criterion,
)
from heatcone.zeta import ZetaCombo, ZetaTerm, combo_value, shifted_zeta_sphere

H = Fraction(1, 2)
sines = st.fractions(min_value=Fraction(1, 40), max_value=1, max_denominator=40).filter(lambda x: x > 0)


def test_log_term_examples():
    assert log_term(heat_coeffs_for(Sphere(3), 2), 4) == 0
    assert log_term(heat_coeffs_for(Sphere.with_radius(3, 2), 2), 4) == Fraction(-9, 64)
    assert log_term(heat_coeffs_for(Circle(H), 1), 2) == 0


@given(st.lists(st.fractions(max_denominator=20), min_size=1, max_size=6), st.integers(0, 4))
def test_log_term_odd_m_vanishes(vals, k):
    a = HeatCoeffList(2 * k + 2, tuple(ExactScalar.of(v) for v in vals))
    assert log_term(a, 2 * k + 1) == 0


def test_log_term_needs_coefficients():
    with pytest.raises(ValueError):
        log_term(heat_coeffs_for(Sphere(3), 1), 4)


@pytest.mark.parametrize("kappa", [Fraction(1, 4), H, Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])
def test_4d_log_term_non_positive(kappa):
    c = log_term(heat_coeffs_for(Sphere(3, kappa, 1), 2), 4)
    assert c <= 0
    assert c.is_zero() == (kappa == 1)


@given(sines)
def test_vanishing_criterion_circle(s):
    assert vanishing_criterion(heat_coeffs_for(Circle(s), 1), 1)


def test_vanishing_criterion_spheres():
    assert vanishing_criterion(heat_coeffs_for(Sphere(3), 2), 3)
    assert not vanishing_criterion(heat_coeffs_for(Sphere.with_radius(3, 2), 2), 3)
    for n in (5, 7, 9):
        assert vanishing_criterion(heat_coeffs_for(Sphere(n), (n + 1) // 2), n)


@pytest.mark.parametrize("A", [H, Fraction(1), Fraction(2), Fraction(3)])
def test_vanishing_criterion_matches_log_term(A):
    a = heat_coeffs_for(Sphere.with_radius(3, A), 2)
    assert vanishing_criterion(a, 3) == log_term(a, 4).is_zero()


@given(sines)
def test_surface_constant_term(s):
    b = constant_term(Circle(s), 2)
    assert b == (1 / s - s) / 12
    assert b >= 0 and (b == 0) == (s == 1)


def test_surface_constant_float_sine():
    s = 2**-0.5
    assert abs(constant_term(Circle(s), 2) - (1 / s - s) / 12) <= 1e-12


def test_surface_constant_examples():
    assert surface_constant([1]) == 0
    assert surface_constant([H]) == Fraction(1, 8)
    assert surface_constant([H, 1]) == Fraction(1, 8)
    with pytest.raises(ValueError):
        surface_constant([0])


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_sphere_constant_term_vanishes(n):
    assert constant_term(Sphere(n), n + 1) == 0
    assert constant_term(SpaceForm(n, 1), n + 1) == 0


def test_projective_constant_term():
    assert constant_term(RealProjective(5), 6) == Fraction(1, 128)
    assert rpn_constant_closed(5) == Fraction(1, 128)
    for n in (9, 13):
        assert constant_term(RealProjective(n), n + 1) == rpn_constant_closed(n)
        parts = rpn_constant_summands(n)
        assert all(p > 0 for p in parts) or all(p < 0 for p in parts)
    with pytest.raises(ValueError):
        rpn_constant_closed(7)


def test_lens_constant():
    assert lens_constant(1) == 0
    assert lens_constant(2) == Fraction(1, 32)
    assert lens_constant(3) == Fraction(2, 27)
    assert all(lens_constant(k) > 0 for k in range(2, 30))
    with pytest.raises(ValueError):
        lens_constant(0)


def test_projective_three_agrees_with_lens_two():
    assert constant_term(RealProjective(3), 4) == lens_constant(2)


def test_unavailable_constant_terms():
    assert constant_term(FlatTorus(3), 4) is None
    assert constant_term(Sphere.with_radius(3, 2), 4) is None
    assert constant_term(SpaceForm(3, Fraction(1, 5)), 4) is None
    assert constant_term(ExplicitSpectrum(3, ((0.0, 1),)), 4) is None


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        constant_term(Sphere(3), 6)
    with pytest.raises(ValueError):
        constant_term(Sphere(3), 5)


def test_explicit_spectrum_with_combo():
    cs = ExplicitSpectrum(3, ((0.0, 1),), combo=shifted_zeta_sphere(3), heat_coeffs=heat_coeffs_for(Sphere(3), 2))
    st_ = singular_terms(cs)
    assert st_.b.value == 0 and st_.c.value == 0
    assert st_.verdict is Verdict.APPARENT_CANDIDATE
    with pytest.raises(ValueError):
        singular_terms(ExplicitSpectrum(3, ((0.0, 1),)))


def test_constant_term_from_user_combo():
    # zeta(2s) alone: -1/2 zeta(-1) - 1/4 B_2 Res(1/2) = 1/24 - 1/24
    f = ZetaCombo((ZetaTerm(ExactScalar.of(1), Fraction(1), 0),))
    assert constant_term_from_combo(f, 2) == 0
    # terms need i >= 0, so no combo is singular at -1/2
    with pytest.raises(ValueError):
        ZetaTerm(ExactScalar.of(1), Fraction(1), -1)


def test_torus_log_terms():
    assert math.isclose(torus_log_term(3), 1 / (64 * math.pi**3.5), rel_tol=1e-14)
    assert math.isclose(torus_log_term(5), -(4**6) / (2**13 * math.pi**5.5 * 6), rel_tol=1e-14)
    assert torus_log_term_heat(3) == ExactScalar(Fraction(-1, 64), -4)


def test_space_form_shortcut_disagrees_on_sphere():
    z = combo_value(shifted_zeta_sphere(3), -H)
    assert z == Fraction(1, 120)
    assert b_4d_space_form(z, sphere_volume(3)) == Fraction(-1, 480)
    assert constant_term(Sphere(3), 4) == 0


def test_classify_truth_table():
    assert singular_terms(Sphere.with_radius(3, 2)).verdict is Verdict.ACTUAL
    assert singular_terms(Lens(2)).verdict is Verdict.ACTUAL
    assert singular_terms(Sphere(3)).verdict is Verdict.APPARENT_CANDIDATE
    st_ = SingularTerms(TermValue.of(ExactScalar.zero()), TermValue.unavailable(), 4)
    assert classify(st_) is Verdict.NEEDS_B


@given(st.floats(min_value=1e-11, max_value=1.0), st.booleans())
def test_classify_perturbation(eps, which):
    zero = TermValue.of(0.0)
    bumped = TermValue.of(eps)
    st_ = SingularTerms(bumped if which else zero, zero if which else bumped, 4)
    base = SingularTerms(zero, zero, 4)
    assert classify(base) is Verdict.APPARENT_CANDIDATE
    assert classify(st_) is Verdict.ACTUAL


def test_float_terms_keep_provenance():
    st_ = singular_terms(Circle(0.5))
    assert st_.b.provenance is Provenance.NUMERIC
    assert st_.to_json()["verdict"] == "ACTUAL"


def test_isospectral_gate():
    assert surface_isospectral_gate([H])
    assert not surface_isospectral_gate([])
    assert not surface_isospectral_gate([1, 1])
    assert surface_isospectral_gate([0.9, 1])
