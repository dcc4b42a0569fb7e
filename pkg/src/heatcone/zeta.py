"""Shifted spectral zeta functions of cross-sections.

For the round sphere, real projective space and the circle, the shifted zeta
function ``sum (lambda + shift^2)^(-s)`` is a finite combination
``sum coeff * beta^(2s) * zeta(2s - 2i)`` of Riemann zeta values.  This module
builds those combinations, evaluates them exactly at integer and
half-integer points, and takes residues in either of two conventions:

* ``S_VARIABLE``: the residue in the variable ``s``;
* ``ZETA_ARGUMENT``: the residue in ``z = 2s - 2i``, twice the former.

It also carries a float Riemann zeta and the analytic continuation of the
Epstein zeta function of a cubic flat torus, both used as oracles.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import mpmath
import numpy as np

from .exact import (
    ExactScalar,
    GradeMismatch,
    as_fraction,
    bernoulli,
    exact_sum,
    gamma_half,
    k_coefficients,
    linear_combination,
)
from .heat_coeffs import HeatCoeffList

__all__ = [
    "ZetaTerm",
    "ZetaCombo",
    "ResidueConvention",
    "PoleHit",
    "NonExactPoint",
    "shifted_zeta_circle",
    "shifted_zeta_sphere",
    "shifted_zeta_rpn",
    "shifted_zeta_projective",
    "riemann_zeta_exact",
    "combo_value",
    "combo_value_terms",
    "combo_value_mpf",
    "combo_float",
    "combo_residue",
    "residue_from_heat",
    "epstein_residue_closed_form",
    "riemann_zeta_numeric",
    "epstein_zeta",
    "epstein_numeric_residue",
]

Beta = Union[Fraction, float]


class PoleHit(ArithmeticError):
    """A combo term sits on the pole of the Riemann zeta function."""


class NonExactPoint(ValueError):
    """The requested value has no exact rational-times-pi-power form."""


class ResidueConvention(enum.Enum):
    S_VARIABLE = "s"
    ZETA_ARGUMENT = "zeta"


@dataclass(frozen=True)
class ZetaTerm:
    coeff: ExactScalar
    beta: Beta
    i: int

    def __post_init__(self) -> None:
        if self.i < 0:
            raise ValueError("i must be >= 0")
        b = self.beta if isinstance(self.beta, float) else as_fraction(self.beta)
        if not b > 0:
            raise ValueError("beta must be positive")
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "coeff", ExactScalar.of(self.coeff))

    def beta_power(self, e: int) -> Beta:
        return self.beta**e


@dataclass(frozen=True)
class ZetaCombo:
    """``f(s) = sum_t t.coeff * t.beta^(2s) * zeta(2s - 2 t.i)``.

    ``shift`` records the shift the combination was built for, if known.
    """

    terms: tuple[ZetaTerm, ...]
    shift: Optional[Fraction] = None
    label: str = ""

    def __post_init__(self) -> None:
        seen = set()
        for t in self.terms:
            key = (t.beta, t.i)
            if key in seen:
                raise ValueError(f"duplicate term beta={t.beta}, i={t.i}")
            seen.add(key)
        if self.shift is not None:
            object.__setattr__(self, "shift", as_fraction(self.shift))

    @property
    def max_i(self) -> int:
        return max((t.i for t in self.terms), default=0)

    def to_json(self) -> dict:
        out = []
        for t in self.terms:
            d = {"coeff": t.coeff.to_json(), "i": t.i}
            if isinstance(t.beta, Fraction):
                d["beta_num"], d["beta_den"] = str(t.beta.numerator), str(t.beta.denominator)
            else:
                d["beta_float"] = t.beta
            out.append(d)
        doc = {"terms": out}
        if self.shift is not None:
            doc["shift"] = str(self.shift)
        if self.label:
            doc["label"] = self.label
        return doc

    @classmethod
    def from_json(cls, d: dict) -> "ZetaCombo":
        terms = []
        for t in d["terms"]:
            if "beta_float" in t:
                beta: Beta = float(t["beta_float"])
            else:
                beta = Fraction(int(t["beta_num"]), int(t["beta_den"]))
            terms.append(ZetaTerm(ExactScalar.from_json(t["coeff"]), beta, int(t["i"])))
        shift = Fraction(d["shift"]) if "shift" in d else None
        return cls(tuple(terms), shift, d.get("label", ""))


# ---------------------------------------------------------------------------
# combos for the built-in families


def shifted_zeta_circle(sin_alpha) -> ZetaCombo:
    """``2 sin(alpha)^(2s) zeta(2s)``, the unshifted zeta of the circle."""
    s = sin_alpha if isinstance(sin_alpha, float) else as_fraction(sin_alpha)
    if not 0 < s <= 1:
        raise ValueError("sin(alpha) must lie in (0, 1]")
    return ZetaCombo((ZetaTerm(ExactScalar.of(2), s, 0),), Fraction(0), "circle")


def shifted_zeta_sphere(n: int) -> ZetaCombo:
    """Zeta of the unit ``S^n`` shifted by ``(n-1)/2``, ``n`` odd."""
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    u = (n - 1) // 2
    k = k_coefficients(u)
    pre = Fraction(2, math.factorial(2 * u))
    terms = tuple(ZetaTerm(ExactScalar.of(pre * k[i]), Fraction(1), i) for i in range(1, u + 1))
    return ZetaCombo(terms, Fraction(u), f"S^{n}")


def shifted_zeta_rpn(n: int) -> ZetaCombo:
    """Zeta of ``RP^n`` shifted by ``(n-1)/2`` for ``n = 4v + 1``."""
    if n < 5 or n % 4 != 1:
        raise ValueError("n must be of the form 4v + 1 with v >= 1")
    return shifted_zeta_projective(n)


def shifted_zeta_projective(n: int) -> ZetaCombo:
    """Zeta of ``RP^n`` shifted by ``u = (n-1)/2`` for any odd ``n >= 3``.

    ``lambda_k + u^2 = (2k + u)^2`` and the multiplicity is
    ``(2/(n-1)!) sum_i K_i^u l^(2i)`` at ``l = 2k + u``, so the sum runs over
    integers ``l`` of the parity of ``u``.  Even ``u`` gives
    ``2^(2i-2s) zeta(2s-2i)``; odd ``u`` gives ``(1 - 2^(2i-2s)) zeta(2s-2i)``.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    u = (n - 1) // 2
    k = k_coefficients(u)
    pre = Fraction(2, math.factorial(n - 1))
    half = Fraction(1, 2)
    terms = []
    for i in range(1, u + 1):
        c = pre * k[i]
        if u % 2 == 0:
            terms.append(ZetaTerm(ExactScalar.of(c * 4**i), half, i))
        else:
            terms.append(ZetaTerm(ExactScalar.of(c), Fraction(1), i))
            terms.append(ZetaTerm(ExactScalar.of(-c * 4**i), half, i))
    return ZetaCombo(tuple(terms), Fraction(u), f"RP^{n}")


# ---------------------------------------------------------------------------
# exact values


def riemann_zeta_exact(d: int) -> ExactScalar:
    """``zeta(d)`` at an integer with a closed form: ``d <= 0`` or ``d`` even."""
    if d == 1:
        raise PoleHit("zeta has a pole at 1")
    if d <= 0:
        k = -d
        return ExactScalar.of((-1) ** k * bernoulli(k + 1) / (k + 1))
    if d % 2 == 0:
        k = d // 2
        r = Fraction((-1) ** (k + 1)) * bernoulli(d) * 2 ** (d - 1) / math.factorial(d)
        return ExactScalar(r, 2 * d)
    raise NonExactPoint(f"zeta({d}) has no closed form here")


def _as_exact_point(s) -> Fraction:
    if isinstance(s, float):
        raise NonExactPoint("float evaluation point; use combo_float")
    q = as_fraction(s)
    if (2 * q).denominator != 1:
        raise NonExactPoint(f"2s must be an integer, got s={q}")
    return q


def _term_value(t: ZetaTerm, s: Fraction):
    two_s = int(2 * s)
    z = riemann_zeta_exact(two_s - 2 * t.i)
    bp = t.beta_power(two_s)
    if isinstance(bp, float):
        return t.coeff.to_float() * bp * z.to_float()
    return t.coeff * z * bp


def combo_value_terms(f: ZetaCombo, s) -> list:
    """Per-term values at ``s``; exact unless ``beta`` is a float."""
    q = _as_exact_point(s)
    out = []
    for t in f.terms:
        if int(2 * q) - 2 * t.i == 1:
            raise PoleHit(f"term i={t.i} hits the zeta pole at s={q}")
        out.append(_term_value(t, q))
    return out


def combo_value(f: ZetaCombo, s):
    """Exact value of the combo at ``s``.

    Raises :class:`PoleHit` on a pole and :class:`NonExactPoint` when the
    point needs a numeric zeta value or when terms carry different pi-grades.
    A float ``beta`` yields a float result.
    """
    vals = combo_value_terms(f, s)
    if all(isinstance(v, ExactScalar) for v in vals):
        try:
            return exact_sum(vals)
        except GradeMismatch as e:
            raise NonExactPoint(f"terms carry different powers of pi at s={s}") from e
    return math.fsum(v.to_float() if isinstance(v, ExactScalar) else v for v in vals)


def combo_value_mpf(f: ZetaCombo, s, dps: int = 30) -> mpmath.mpf:
    """Sum of the exact per-term values at ``dps`` digits.

    Covers points where the terms are exact but of different pi-grades.
    """
    vals = combo_value_terms(f, s)
    with mpmath.workdps(dps + 5):
        return +mpmath.fsum(v.to_mpf(dps) if isinstance(v, ExactScalar) else mpmath.mpf(v) for v in vals)


def combo_float(f: ZetaCombo, s: float) -> float:
    """Float value of the combo at any real ``s`` away from its poles."""
    parts = []
    for t in f.terms:
        z = 2 * s - 2 * t.i
        zint = round(z)
        if z == zint and (zint <= 0 or zint % 2 == 0):
            zv = riemann_zeta_exact(zint).to_float()
        else:
            zv = riemann_zeta_numeric(z)
        parts.append(t.coeff.to_float() * float(t.beta) ** (2 * s) * zv)
    return math.fsum(parts)


def combo_residue(f: ZetaCombo, s0, conv: ResidueConvention):
    """Residue of the combo at ``s0`` in the chosen convention."""
    q = as_fraction(s0)
    two_s = 2 * q
    factor = Fraction(1) if conv is ResidueConvention.ZETA_ARGUMENT else Fraction(1, 2)
    vals = []
    for t in f.terms:
        if two_s - 2 * t.i == 1:
            bp = t.beta_power(int(two_s))
            vals.append(t.coeff.to_float() * bp * float(factor) if isinstance(bp, float) else t.coeff * bp * factor)
    if not vals:
        return ExactScalar.zero()
    if all(isinstance(v, ExactScalar) for v in vals):
        return exact_sum(vals)
    return math.fsum(v.to_float() if isinstance(v, ExactScalar) else v for v in vals)


def residue_from_heat(a: HeatCoeffList, n: int, shift, l: int):
    """S-variable residue of the shifted zeta at ``s = n/2 - l`` from heat data.

    ``(4 pi)^(-n/2) / Gamma(n/2 - l) * sum_{i<=l} (-shift^2)^i / i! * a_{l-i}``;
    zero when ``n/2 - l`` is a non-positive integer.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    a.require(l)
    c = as_fraction(shift) ** 2
    coeffs = [(-c) ** i / math.factorial(i) for i in range(l + 1)]
    total = linear_combination(coeffs, [a[l - i] for i in range(l + 1)])
    if n % 2 == 1:
        g = gamma_half((n - 1) // 2 - l)
    else:
        arg = n // 2 - l
        if arg <= 0:
            return ExactScalar.zero()
        g = ExactScalar.of(math.factorial(arg - 1))
    pref = 1 / (ExactScalar(Fraction(2**n), n) * g)
    if isinstance(total, ExactScalar):
        return total * pref
    return total * pref.to_float()


def epstein_residue_closed_form(n: int, s) -> float:
    """Float evaluation of a candidate closed form for the torus residues.

    ``(-1)^(n/2+s) pi^(s/2) ((n-1)/2)^(n-2s)
    / (sqrt((4 pi^2)^n) Gamma(s) Gamma(n/2 - s + 1))``.  For odd ``n`` and
    half-integer ``s`` the exponent ``n/2 + s`` is an integer, so the sign is
    real.  It disagrees with :func:`epstein_numeric_residue` and is kept only
    as a comparison value.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    q = as_fraction(s)
    if q.denominator != 2 or q > Fraction(n, 2):
        raise ValueError(f"s={q} is not a pole (need a half-integer <= n/2)")
    e = Fraction(n, 2) + q
    sign = -1.0 if int(e) % 2 else 1.0
    sf = float(q)
    u = (n - 1) / 2
    return (
        sign * math.pi ** (sf / 2) * u ** (n - 2 * sf)
        / (math.sqrt((4 * math.pi**2) ** n) * math.gamma(sf) * math.gamma(n / 2 - sf + 1))
    )


# ---------------------------------------------------------------------------
# numeric Riemann zeta

_EM_DIRECT = 50
_EM_CORRECTIONS = 10


@lru_cache(maxsize=None)
def _em_coeffs() -> tuple[float, ...]:
    return tuple(float(bernoulli(2 * j) / math.factorial(2 * j)) for j in range(1, _EM_CORRECTIONS + 1))


def _zeta_em(s: float) -> float:
    n = _EM_DIRECT
    parts = [k ** (-s) for k in range(1, n)]
    parts.append(n ** (1 - s) / (s - 1))
    parts.append(0.5 * n ** (-s))
    rising = s
    for j, b in enumerate(_em_coeffs(), start=1):
        parts.append(b * rising * n ** (1 - s - 2 * j))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return math.fsum(parts)


def riemann_zeta_numeric(s: float) -> float:
    """``zeta(s)`` by Euler-Maclaurin (50 direct terms, 10 corrections).

    Left of ``-1/2`` the functional equation maps to ``1 - s`` first, which
    avoids the cancellation of the direct expansion.
    """
    s = float(s)
    if s == 1.0:
        raise PoleHit("zeta has a pole at 1")
    if s < -0.5:
        if s == round(s) and round(s) % 2 == 0:
            return 0.0
        return (
            2.0**s * math.pi ** (s - 1) * math.sin(math.pi * s / 2)
            * math.gamma(1 - s) * _zeta_em(1 - s)
        )
    return _zeta_em(s)


# ---------------------------------------------------------------------------
# Epstein zeta of the cubic flat torus
#
# For Theta(t) = sum_k exp(-A |k|^2 t) with A = 4 pi^2 / L^2 and c = shift^2,
#   Gamma(s) Z(s) = sum_k (A|k|^2 + c)^(-s) Gamma(s, (A|k|^2 + c) t0)
#                 + (pi/A)^(n/2) [ c^(n/2-s) gamma(s - n/2, c t0)
#                   + sum_{m != 0} int_0^t0 t^(s-n/2-1) exp(-c t - pi^2 |m|^2 / (A t)) dt ]
# after splitting at t0 and theta-transforming the small-t half.  Only the
# lower incomplete gamma carries poles.

_EPSTEIN_DPS = 30
_LATTICE_NORM_MAX = 20  # exp(-pi * 20) ~ 5e-28 at the balanced split


@lru_cache(maxsize=None)
def lattice_counts(n: int, norm_max: int) -> tuple[int, ...]:
    """``r_n(N)`` = number of ``k`` in ``Z^n`` with ``|k|^2 = N``, ``N <= norm_max``."""
    one = np.zeros(norm_max + 1, dtype=object)
    r = math.isqrt(norm_max)
    one[0] = 1
    for j in range(1, r + 1):
        one[j * j] = 2
    acc = np.zeros(norm_max + 1, dtype=object)
    acc[0] = 1
    for _ in range(n):
        acc = np.convolve(acc, one)[: norm_max + 1]
    return tuple(int(x) for x in acc)


def _lattice_a(n: int, volume) -> mpmath.mpf:
    v = mpmath.mpf(volume) if isinstance(volume, float) else mpmath.mpf(Fraction(volume).numerator) / Fraction(volume).denominator
    return 4 * mpmath.pi**2 / mpmath.power(v, mpmath.mpf(2) / n)


def epstein_zeta(n: int, shift: float, s: float, volume=1) -> float:
    """Analytic continuation of ``sum_{k in Z^n} (A |k|^2 + shift^2)^(-s)``.

    ``A = 4 pi^2 / volume^(2/n)``; valid for every real ``s`` off the poles
    ``n/2 - j``.  Evaluated with mpmath at 30 digits.
    """
    if shift <= 0:
        raise ValueError("shift must be positive")
    with mpmath.workdps(_EPSTEIN_DPS):
        s_ = mpmath.mpf(s)
        c = mpmath.mpf(shift) ** 2
        a = _lattice_a(n, volume)
        t0 = mpmath.pi / a
        counts = lattice_counts(n, _LATTICE_NORM_MAX)
        half_n = mpmath.mpf(n) / 2
        upper = mpmath.mpf(0)
        for norm, cnt in enumerate(counts):
            if cnt:
                x = a * norm + c
                upper += cnt * x ** (-s_) * mpmath.gammainc(s_, x * t0)
        z = s_ - half_n
        lower = c ** (-z) * (mpmath.gamma(z) - mpmath.gammainc(z, c * t0))
        for norm, cnt in enumerate(counts):
            if norm == 0 or not cnt:
                continue
            b = mpmath.pi**2 * norm / a
            val, err = mpmath.quad(
                lambda t: t ** (z - 1) * mpmath.exp(-c * t - b / t), [0, t0 / 4, t0], error=True
            )
            if err > mpmath.mpf(10) ** (-20) * (1 + abs(val)):
                raise ArithmeticError(f"Epstein quadrature did not converge (norm {norm}, err {err})")
            lower += cnt * val
        total = upper + (mpmath.pi / a) ** half_n * lower
        return float(total / mpmath.gamma(s_))


def epstein_numeric_residue(n: int, shift: float, volume=1, s0=Fraction(-1, 2)) -> float:
    """S-variable residue of the shifted torus zeta at the half-integer ``s0``.

    Read off the pole-carrying piece ``(pi/A)^(n/2) c^(n/2-s) gamma(s-n/2, c t0)
    / Gamma(s)`` of the continuation: the lower incomplete gamma has the
    residue ``(-1)^N / N!`` at ``-N``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if shift <= 0:
        raise ValueError("shift must be positive")
    q = as_fraction(s0)
    big_n = Fraction(n, 2) - q
    if big_n.denominator != 1 or big_n < 0:
        raise ValueError(f"s0={q} is not a pole of the torus zeta")
    N = int(big_n)
    with mpmath.workdps(_EPSTEIN_DPS):
        a = _lattice_a(n, volume)
        c = mpmath.mpf(shift) ** 2
        s_ = mpmath.mpf(q.numerator) / q.denominator
        g = mpmath.gamma(s_)
        res = (mpmath.pi / a) ** (mpmath.mpf(n) / 2) * c ** (N) * (-1) ** N / (mpmath.factorial(N) * g)
        if not mpmath.isfinite(res):
            raise ArithmeticError("residue evaluation failed")
        return float(res)
