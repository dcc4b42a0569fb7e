"""Acceptance criteria 1 to 12, one test each.

Every test stores its outcome in ``conftest.ACCEPTANCE``; the summary hook
prints one PASS/FAIL line per criterion after the run.
"""
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import conftest
from heatcone.crosssection import Circle, FlatTorus, Lens, RealProjective, Sphere
from heatcone.curvpoly import build, build_direct, build_from_log_term, roots
from heatcone.exact import ExactScalar
from heatcone.heat_coeffs import (
    CurvatureData3,
    geometric_log_term_4d,
    heat_coeffs_for,
    sphere_coeff,
    sphere_coeff_closed,
    sphere_volume,
)
from heatcone.oracle import dirichlet_sum, fit_heat_coeffs, spectrum
from heatcone.singular import (
    Verdict,
    constant_term,
    lens_constant,
    log_term,
    rpn_constant_closed,
    rpn_constant_summands,
    singular_terms,
)
from heatcone.verify import run_suite, torus_report
from heatcone.zeta import (
    ResidueConvention,
    combo_residue,
    combo_value_mpf,
    residue_from_heat,
    shifted_zeta_circle,
    shifted_zeta_projective,
    shifted_zeta_sphere,
)


@contextmanager
def criterion(k, text):
    conftest.ACCEPTANCE[k] = (False, text)
    t0 = time.perf_counter()
    yield
    conftest.ACCEPTANCE[k] = (True, f"{text} ({time.perf_counter() - t0:.2f} s)")


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_criterion_01_surface_constant():
    with criterion(1, "surface b = (1/sin a - sin a)/12"):
        for s in (Fraction(1), Fraction(1, 2)):
            b = constant_term(Circle(s), 2)
            assert isinstance(b, ExactScalar) and b == ExactScalar.of((1 / s - s) / 12)
        s = 2**-0.5
        b = constant_term(Circle(s), 2)
        assert abs(float(b) - (1 / s - s) / 12) <= 1e-12


def test_criterion_02_four_dim_log_term():
    with criterion(2, "c(S^3_A) = -(A^2-1)^2/(32A), two routes, zero iff A = 1"):
        for A in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3)):
            want = ExactScalar.of(-(A * A - 1) ** 2 / (32 * A))
            heat = log_term(heat_coeffs_for(Sphere.with_radius(3, A), 2), 4)
            geo = geometric_log_term_4d(CurvatureData3.constant_curvature(1 / A**2, sphere_volume(3) * A**3))
            assert heat == want and geo == want
            assert heat.is_zero() == (A == 1)


def test_criterion_03_sphere_coefficients():
    with criterion(3, "sphere coefficients equal closed forms, n = 3, 5, 7, j <= 6"):
        for n in (3, 5, 7):
            for j in range(7):
                assert sphere_coeff(n, j) == sphere_coeff_closed(n, j)


def test_criterion_04_curvature_polynomials():
    with criterion(4, "curvature polynomials and their roots"):
        assert build(3).normalized == (1, -2, 1)
        assert build(5).normalized == (1, -4, 5, -2)
        p7 = build(7)
        assert p7.primitive == (109, -668, 1414, -1260, 405)
        assert build_direct(7).coeffs == build_from_log_term(7).coeffs
        assert [(r.value, r.mult) for r in roots(build(3))] == [(1.0, 2)]
        assert [(r.value, r.mult) for r in roots(build(5))] == [(1.0, 2), (2.0, 1)]
        r7 = roots(p7)
        assert [r.mult for r in r7] == [2, 1, 1]
        assert r7[0].exact == (1, 0, 0, 1)
        lo, hi = (225 - 36 * math.sqrt(5)) / 109, (225 + 36 * math.sqrt(5)) / 109
        got = sorted(r.value for r in r7[1:])
        assert abs(got[0] - lo) <= 1e-12 and abs(got[1] - hi) <= 1e-12
        assert {r.exact for r in r7[1:]} == {(225, 36, 5, 109), (225, -36, 5, 109)}


def test_criterion_05_sphere_constant_vanishes():
    with criterion(5, "b(S^n) = 0 for n = 3, 5, 7, 9"):
        for n in (3, 5, 7, 9):
            b = constant_term(Sphere(n), n + 1)
            assert isinstance(b, ExactScalar) and b.is_zero()


def test_criterion_06_rp5():
    with criterion(6, "RP^5 b = 1/128 by two routes; RP^5, RP^9 summands nonzero, one sign"):
        assert constant_term(RealProjective(5), 6) == ExactScalar.of(Fraction(1, 128))
        assert rpn_constant_closed(5) == Fraction(1, 128)
        for n in (5, 9):
            parts = rpn_constant_summands(n)
            assert all(x > 0 for x in parts) or all(x < 0 for x in parts)
            assert sum(parts) != 0
        assert constant_term(RealProjective(9), 10) == ExactScalar.of(rpn_constant_closed(9))


def test_criterion_07_lens():
    with criterion(7, "lens b(k) = (k^2+11)(k^2-1)/(720k), b(1) = 0, b(k) > 0"):
        for k in range(1, 7):
            want = Fraction((k * k + 11) * (k * k - 1), 720 * k)
            assert lens_constant(k) == want
            assert constant_term(Lens(k), 4) == ExactScalar.of(want)
        assert lens_constant(1) == 0
        assert all(lens_constant(k) > 0 for k in range(2, 7))


def test_criterion_08_dirichlet_sums():
    with criterion(8, "Dirichlet sums match combos to 1e-8 at s = 3, 4"):
        cases = [
            (Sphere(3), shifted_zeta_sphere(3), 1.0, 1e6),
            (Sphere(5), shifted_zeta_sphere(5), 2.0, 1e8),
            (RealProjective(5), shifted_zeta_projective(5), 2.0, 1e8),
            (Circle(Fraction(1, 2)), shifted_zeta_circle(Fraction(1, 2)), 0.0, 1e8),
        ]
        for cs, f, shift, cutoff in cases:
            sp = spectrum(cs, cutoff)
            for s in (3, 4):
                assert rel(dirichlet_sum(sp, shift, s).value, float(combo_value_mpf(f, s))) <= 1e-8


def test_criterion_09_residue_routes():
    with criterion(9, "heat-route residues equal combo residues"):
        for n in (3, 5, 7, 9):
            u = (n - 1) // 2
            for cs, f in ((Sphere(n), shifted_zeta_sphere(n)), (RealProjective(n), shifted_zeta_projective(n))):
                a = heat_coeffs_for(cs, (n + 1) // 2)
                for l in range((n + 1) // 2 + 1):
                    s0 = Fraction(n, 2) - l
                    assert residue_from_heat(a, n, u, l) == combo_residue(f, s0, ResidueConvention.S_VARIABLE)


def test_criterion_10_heat_fit():
    with criterion(10, "fitted a_0, a_1 within 1% for S^3, S^5"):
        pi = math.pi
        for cs, want in ((Sphere(3), (2 * pi**2, 2 * pi**2)), (Sphere(5), (pi**3, 10 * pi**3 / 3))):
            got = fit_heat_coeffs(cs, 1, cutoff=1e4)
            for j in range(2):
                assert rel(got[j], want[j]) <= 0.01


def test_criterion_11_torus_arbitration():
    with criterion(11, "torus report lists candidates and the oracle supports one"):
        t = torus_report()
        labels = [r["label"] for r in t["candidates"]]
        assert len(labels) >= 4
        assert t["supported"], t
        c = t["oracle"]["c"]
        assert rel(c, -1 / (64 * math.pi**2)) <= 1e-6
        rep = run_suite("oracle")
        assert rep.torus is not None and rep.ok


def test_criterion_12_classifier():
    with criterion(12, "classifier truth table"):
        assert singular_terms(Sphere.with_radius(3, 2)).verdict is Verdict.ACTUAL
        lens = singular_terms(Lens(2))
        assert lens.c.is_zero() and not lens.b.is_zero()
        assert lens.verdict is Verdict.ACTUAL
        assert singular_terms(Sphere(3)).verdict is Verdict.APPARENT_CANDIDATE
