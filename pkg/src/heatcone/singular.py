"""Logarithmic coefficient ``c`` and constant term ``b`` at a conic point.

For a cone of dimension ``m`` over ``N`` write ``l = (m-2)/2`` and
``zeta_N^l(s) = sum (lambda + l^2)^(-s)``.  Then

* ``c = 1/2 Res_s zeta(-1/2)``, expressed through the heat coefficients of
  ``N`` (zero in odd ``m``);
* ``b = -1/2 FP zeta(-1/2) + Gamma'(-1/2)/(4 sqrt(pi)) Res zeta(-1/2)
  - 1/4 sum_{j<=m/2} B_2j / j Res zeta(j - 1/2)``, where the residues are
  taken in the Riemann-zeta argument.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath

from .crosssection import (
    Circle,
    CrossSection,
    ExplicitSpectrum,
    FlatTorus,
    Lens,
    RealProjective,
    SpaceForm,
    Sphere,
    parse_number,
)
from .exact import ExactScalar, as_fraction, bernoulli, k_coefficients, linear_combination
from .heat_coeffs import HeatCoeffList, heat_coeffs_for
from .zeta import (
    PoleHit,
    ResidueConvention,
    ZetaCombo,
    combo_residue,
    combo_value,
    shifted_zeta_circle,
    shifted_zeta_projective,
    shifted_zeta_sphere,
)

__all__ = [
    "Provenance",
    "Verdict",
    "TermValue",
    "SingularTerms",
    "PoleAtFinitePart",
    "log_term",
    "vanishing_criterion",
    "constant_term",
    "rpn_constant_closed",
    "rpn_constant_summands",
    "lens_constant",
    "surface_constant",
    "torus_log_term",
    "torus_log_term_heat",
    "b_4d_space_form",
    "classify",
    "surface_isospectral_gate",
    "singular_terms",
]

Value = Union[ExactScalar, float]
ZERO_TOL = 1e-12


class PoleAtFinitePart(ArithmeticError):
    """The shifted zeta function is singular at -1/2; no finite part is taken."""


class Provenance(enum.Enum):
    EXACT = "exact"
    NUMERIC = "numeric"
    UNAVAILABLE = "unavailable"


class Verdict(enum.Enum):
    ACTUAL = "ACTUAL"
    NEEDS_B = "NEEDS_B"
    APPARENT_CANDIDATE = "APPARENT_CANDIDATE"


@dataclass(frozen=True)
class TermValue:
    value: Optional[Value]
    provenance: Provenance
    # largest intermediate magnitude, for relative zero tests on floats
    scale: float = 1.0

    @classmethod
    def of(cls, v: Optional[Value], scale: float = 1.0) -> "TermValue":
        if v is None:
            return cls(None, Provenance.UNAVAILABLE)
        if isinstance(v, ExactScalar):
            return cls(v, Provenance.EXACT)
        return cls(float(v), Provenance.NUMERIC, max(scale, abs(float(v))))

    @classmethod
    def unavailable(cls) -> "TermValue":
        return cls(None, Provenance.UNAVAILABLE)

    def is_zero(self, tol: float = ZERO_TOL) -> bool:
        if self.value is None:
            raise ValueError("value unavailable")
        if isinstance(self.value, ExactScalar):
            return self.value.is_zero()
        return abs(self.value) <= tol * max(self.scale, 1.0)

    def to_json(self) -> dict:
        if self.value is None:
            return {"value": "unavailable", "provenance": self.provenance.value}
        v = self.value.to_json() if isinstance(self.value, ExactScalar) else self.value
        return {"value": v, "provenance": self.provenance.value}


@dataclass(frozen=True)
class SingularTerms:
    c: TermValue
    b: TermValue
    m: int

    @property
    def verdict(self) -> Verdict:
        return classify(self)

    def to_json(self) -> dict:
        return {"c": self.c.to_json(), "b": self.b.to_json(), "m": self.m, "verdict": self.verdict.value}


# ---------------------------------------------------------------------------
# log term


def _log_weights(m: int) -> list[Fraction]:
    # weight of a_{m/2 - k}
    return [Fraction((-1) ** (k + 1) * (m - 2) ** (2 * k), 4**k * math.factorial(k)) for k in range(m // 2 + 1)]


def log_term(a: HeatCoeffList, m: int) -> Value:
    """``c = (2 (4 pi)^(m/2))^-1 sum_k (-1)^(k+1) (m-2)^(2k) / (4^k k!) a_{m/2-k}``.

    Exactly zero for odd ``m``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2 == 1:
        return ExactScalar.zero()
    h = m // 2
    a.require(h)
    w = _log_weights(m)
    total = linear_combination(w, [a[h - k] for k in range(h + 1)])
    pref = ExactScalar(Fraction(1, 2 * 2**m), -m)
    if isinstance(total, ExactScalar):
        return total * pref
    return total * pref.to_float()


def vanishing_criterion(a: HeatCoeffList, n: int) -> bool:
    """Whether the log term of the ``(n+1)``-dimensional cone vanishes.

    Tests ``a_h = sum_{k=1..h} (-1)^(k+1) (n-1)^(2k)/(4^k k!) a_{h-k}`` with
    ``h = (n+1)/2``.  Float coefficient lists are compared at a relative
    tolerance of 1e-12.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd")
    h = (n + 1) // 2
    a.require(h)
    w = _log_weights(n + 1)
    rhs = linear_combination(w[1:], [a[h - k] for k in range(1, h + 1)])
    lhs = a[h]
    if isinstance(lhs, ExactScalar) and isinstance(rhs, ExactScalar):
        return lhs == rhs
    lf = lhs.to_float() if isinstance(lhs, ExactScalar) else lhs
    rf = rhs.to_float() if isinstance(rhs, ExactScalar) else rhs
    scale = max(abs(lf), abs(rf), max(abs(float(x)) for x in a.values[: h + 1]))
    return abs(lf - rf) <= ZERO_TOL * max(scale, 1.0)


# ---------------------------------------------------------------------------
# constant term


def _gamma_prime_ratio() -> float:
    """``Gamma'(-1/2) / (4 sqrt(pi))``."""
    with mpmath.workdps(30):
        g = mpmath.gamma(-0.5) * mpmath.digamma(mpmath.mpf(-0.5))
        return float(g / (4 * mpmath.sqrt(mpmath.pi)))


def _combo_for(cs: CrossSection, shift: Fraction) -> Optional[ZetaCombo]:
    if isinstance(cs, Circle):
        if shift != 0:
            return None
        return shifted_zeta_circle(cs.sin_alpha)
    if isinstance(cs, Sphere):
        if not cs.is_unit() or shift != (cs.n - 1) // 2:
            return None
        return shifted_zeta_sphere(cs.n)
    if isinstance(cs, SpaceForm):
        if cs.vol_ratio != 1 or shift != (cs.n - 1) // 2:
            return None
        return shifted_zeta_sphere(cs.n)
    if isinstance(cs, RealProjective):
        if shift != (cs.n - 1) // 2:
            return None
        return shifted_zeta_projective(cs.n)
    if isinstance(cs, ExplicitSpectrum):
        if cs.combo is None:
            return None
        if cs.combo.shift is not None and cs.combo.shift != shift:
            raise ValueError(f"combo built for shift {cs.combo.shift}, cone needs {shift}")
        return cs.combo
    return None


def constant_term_from_combo(f: ZetaCombo, m: int) -> Value:
    """The constant term from a shifted zeta combination, pinned conventions."""
    za = ResidueConvention.ZETA_ARGUMENT
    half = Fraction(-1, 2)
    res_mid = combo_residue(f, half, za)
    try:
        fp = combo_value(f, half)
    except PoleHit as e:
        raise PoleAtFinitePart(str(e)) from e
    coeffs = [Fraction(-1, 2)]
    values: list = [fp]
    for j in range(1, m // 2 + 1):
        coeffs.append(-bernoulli(2 * j) / (4 * j))
        values.append(combo_residue(f, Fraction(2 * j - 1, 2), za))
    total = linear_combination(coeffs, values)
    if res_mid:
        # only reached by user combos; every built-in family is regular at -1/2
        rm = res_mid.to_float() if isinstance(res_mid, ExactScalar) else res_mid
        tf = total.to_float() if isinstance(total, ExactScalar) else total
        return tf + _gamma_prime_ratio() * rm
    return total


def constant_term(cs: CrossSection, m: int) -> Optional[Value]:
    """Constant term ``b`` of the ``m``-dimensional cone over ``cs``.

    ``None`` when the cross-section carries neither a zeta combination nor a
    closed form (flat tori, non-unit spheres, spectra without a combo).
    """
    if m < 2 or m % 2:
        raise ValueError("m must be even and >= 2")
    if cs.n != m - 1:
        raise ValueError(f"cross-section of dimension {cs.n} does not fit a cone of dimension {m}")
    shift = Fraction(m - 2, 2)
    if isinstance(cs, Lens):
        return ExactScalar.of(lens_constant(cs.k))
    f = _combo_for(cs, shift)
    if f is None:
        return None
    return constant_term_from_combo(f, m)


def rpn_constant_summands(n: int) -> list[Fraction]:
    if n < 5 or n % 4 != 1:
        raise ValueError("n must be of the form 4v + 1 with v >= 1")
    u = (n - 1) // 2
    k = k_coefficients(u)
    den = 4 * math.factorial(n - 1)
    return [
        Fraction((2 ** (2 * i + 2) - 1)) * bernoulli(2 * i + 2) * k[i] / (den * (i + 1))
        for i in range(1, u + 1)
    ]


def rpn_constant_closed(n: int) -> Fraction:
    """Closed-form constant term for the cone over ``RP^n``, ``n = 4v + 1``.

    ``sum_i (2^(2i+2) - 1) B_(2i+2) K_i / (4 (i+1) (n-1)!)``.  All summands
    share one sign, so the value is never zero.
    """
    parts = rpn_constant_summands(n)
    total = sum(parts, Fraction(0))
    if total == 0:
        raise ArithmeticError("closed form vanished; sign argument violated")
    return total


def lens_constant(k: int) -> Fraction:
    """``(k^2 + 11)(k^2 - 1) / (720 k)`` for the cone over ``S^3 / Z_k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return Fraction((k * k + 11) * (k * k - 1), 720 * k)


def surface_constant(angles: Sequence) -> Value:
    """``(1/12) sum (1/sin a - sin a)`` over the cone points of a surface."""
    vals = [parse_number(x) for x in angles]
    for s in vals:
        if not 0 < s <= 1:
            raise ValueError(f"sin(alpha) must lie in (0, 1], got {s}")
    if all(isinstance(s, Fraction) for s in vals):
        return ExactScalar.of(sum(((1 / s - s) / 12 for s in vals), Fraction(0)))
    return math.fsum((1 / float(s) - float(s)) / 12 for s in vals)


def torus_log_term(n: int) -> float:
    """Candidate closed form ``(-1)^((n+1)/2) (n-1)^(n+1)
    / (2^(2n+3) pi^(n+1/2) ((n+1)/2)!)`` for the cone over ``T^n``.

    Kept for comparison only: the Epstein residue and the heat coefficients
    both give :func:`torus_log_term_heat` instead.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    h = (n + 1) // 2
    v = (-1) ** h * (n - 1) ** (n + 1) / (2 ** (2 * n + 3) * math.pi ** (n + 0.5) * math.factorial(h))
    if v == 0:
        raise ArithmeticError("torus log term vanished")
    return v


def torus_log_term_heat(n: int, volume=1) -> Value:
    """Log term of the cone over the flat ``T^n`` from ``a_0 = Vol``, ``a_j = 0``."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd")
    return log_term(heat_coeffs_for(FlatTorus(n, volume), (n + 1) // 2), n + 1)


def b_4d_space_form(zeta_value_at_minus_half: ExactScalar, vol: ExactScalar) -> ExactScalar:
    """Shortcut ``-1/2 zeta^1_N(-1/2) + Vol(N) / (960 pi^2)`` for a 3-d space form.

    This mixes a rational with ``Vol/pi^2``; a space form volume is a rational
    multiple of ``pi^2``, so the result is rational.  On the unit ``S^3`` it
    gives -1/480 where :func:`constant_term` gives 0.
    """
    z = ExactScalar.of(zeta_value_at_minus_half)
    v = ExactScalar.of(vol) * ExactScalar(Fraction(1, 960), -4)
    return z * Fraction(-1, 2) + v


# ---------------------------------------------------------------------------
# classification


def classify(st: SingularTerms, tol: float = ZERO_TOL) -> Verdict:
    if not st.c.is_zero(tol):
        return Verdict.ACTUAL
    if st.b.value is None:
        return Verdict.NEEDS_B
    return Verdict.APPARENT_CANDIDATE if st.b.is_zero(tol) else Verdict.ACTUAL


def surface_isospectral_gate(angles: Sequence, genus_term=Fraction(1, 3)) -> bool:
    """Whether the constant heat coefficient exceeds the smooth value.

    Compares ``genus_term + surface_constant(angles)`` against ``genus_term``;
    true exactly when some cone angle is below ``pi/2``.
    """
    if not angles:
        return False
    g = as_fraction(genus_term)
    b = surface_constant(angles)
    if isinstance(b, ExactScalar):
        return g + b.rational > g
    return float(g) + b > float(g) + ZERO_TOL


def singular_terms(cs: CrossSection, m: Optional[int] = None) -> SingularTerms:
    """``(c, b)`` for the cone over ``cs``; ``m`` defaults to ``dim N + 1``."""
    m = cs.n + 1 if m is None else m
    if cs.n != m - 1:
        raise ValueError(f"cross-section of dimension {cs.n} does not fit a cone of dimension {m}")
    if m % 2:
        c: Value = ExactScalar.zero()
        b = None
    else:
        if isinstance(cs, ExplicitSpectrum) and cs.heat_coeffs is None:
            raise ValueError("the log term of an explicit spectrum needs heat coefficients")
        c = log_term(heat_coeffs_for(cs, m // 2), m)
        b = constant_term(cs, m)
    return SingularTerms(TermValue.of(c), TermValue.of(b), m)
