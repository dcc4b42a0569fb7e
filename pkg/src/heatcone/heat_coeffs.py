"""Heat-trace coefficients ``a_j`` of cross-sections.

``tr exp(-t Delta_N) ~ (4 pi t)^(-n/2) sum_j a_j t^j``.  Values are exact
(:class:`ExactScalar`) whenever the family allows it; circles with an
irrational ``sin(alpha)`` fall back to floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .crosssection import (
    Circle,
    CrossSection,
    ExplicitSpectrum,
    FlatTorus,
    Lens,
    RealProjective,
    SpaceForm,
    Sphere,
)
from .exact import ExactScalar, as_fraction, gamma_half, k_coefficients

__all__ = [
    "HeatCoeffList",
    "CurvatureData3",
    "sphere_coeff",
    "sphere_coeff_closed",
    "scaled_coeff",
    "sphere_volume",
    "geometric_log_term_4d",
    "u2_integral",
    "heat_coeffs_for",
]

Coeff = Union[ExactScalar, float]


@dataclass(frozen=True)
class HeatCoeffList:
    """``a_0 .. a_J`` for an ``n``-dimensional cross-section."""

    n: int
    values: tuple[Coeff, ...]

    def __post_init__(self) -> None:
        vals = tuple(v if isinstance(v, (ExactScalar, float)) else ExactScalar.of(v) for v in self.values)
        grades = {v.pi_half for v in vals if isinstance(v, ExactScalar) and not v.is_zero()}
        if len(grades) > 1:
            raise ValueError(f"heat coefficients mix pi-grades {sorted(grades)}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, j: int) -> Coeff:
        if j < 0:
            raise IndexError(j)
        try:
            return self.values[j]
        except IndexError:
            raise IndexError(f"a_{j} not available (have a_0..a_{len(self.values) - 1})") from None

    @property
    def exact(self) -> bool:
        return all(isinstance(v, ExactScalar) for v in self.values)

    def require(self, j: int) -> None:
        if len(self.values) <= j:
            raise ValueError(f"need heat coefficients up to a_{j}, have {len(self.values)}")


@dataclass(frozen=True)
class CurvatureData3:
    """Pointwise-constant curvature invariants of a closed 3-manifold.

    Fields may be Fractions (with ``volume`` an :class:`ExactScalar`) for an
    exact evaluation, or plain floats.
    """

    scal: Union[Fraction, float]
    ric_norm_sq: Union[Fraction, float]
    riem_norm_sq: Union[Fraction, float]
    volume: Union[ExactScalar, Fraction, float]

    @classmethod
    def constant_curvature(cls, kappa, volume) -> "CurvatureData3":
        k = as_fraction(kappa) if not isinstance(kappa, float) else kappa
        return cls(6 * k, 12 * k * k, 12 * k * k, volume)

    @property
    def exact(self) -> bool:
        return not any(isinstance(x, float) for x in (self.scal, self.ric_norm_sq, self.riem_norm_sq, self.volume))


def _check_odd_dim(n: int) -> int:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"sphere coefficients need odd n >= 3, got {n}")
    return (n - 1) // 2


def sphere_volume(n: int) -> ExactScalar:
    """``Vol(S^n) = 2 pi^((n+1)/2) / Gamma((n+1)/2)`` for odd ``n``."""
    if n < 1 or n % 2 == 0:
        raise ValueError("only odd-dimensional spheres are supported")
    h = (n + 1) // 2
    return ExactScalar(Fraction(2, math.factorial(h - 1)), n + 1)


def sphere_coeff(n: int, j: int) -> ExactScalar:
    """Heat coefficient ``a_j`` of the unit round ``S^n``, ``n`` odd.

    Terms whose factorial argument ``j + l - (n-1)/2`` is negative vanish.
    """
    u = _check_odd_dim(n)
    if j < 0:
        raise ValueError("j must be >= 0")
    k = k_coefficients(u)
    total = ExactScalar.zero()
    for l in range(1, u + 1):
        e = j + l - u
        if e < 0:
            continue
        total = total + gamma_half(l) * Fraction(u ** (2 * e) * k[l], math.factorial(e))
    # (4 pi)^(n/2) = 2^n pi^(n/2)
    return total * ExactScalar(Fraction(2**n, math.factorial(n - 1)), n)


def sphere_coeff_closed(n: int, j: int) -> ExactScalar:
    """Dimension-specific closed forms for ``n`` in {3, 5, 7}."""
    if j < 0:
        raise ValueError("j must be >= 0")
    f = math.factorial(j)
    if n == 3:
        return ExactScalar(Fraction(2, f), 4)
    if n == 5:
        return ExactScalar(Fraction(2) ** (2 * j - 1) * (6 - j) / (3 * f), 6)
    if n == 7:
        return ExactScalar(Fraction(3) ** (2 * j - 6) * (16 * j * j - 286 * j + 1215) / (5 * f), 8)
    raise ValueError(f"no closed form for n={n}")


def scaled_coeff(n: int, j: int, kappa, vol_ratio) -> ExactScalar:
    """``kappa^j * a_j(S^n) * vol_ratio`` for constant curvature ``kappa``.

    Negative ``kappa`` is accepted for polynomial evaluation only.
    """
    return sphere_coeff(n, j) * (as_fraction(kappa) ** j * as_fraction(vol_ratio))


def _four_pi_sq_inv():
    return ExactScalar(Fraction(1, 16), -4)


def geometric_log_term_4d(curv: CurvatureData3):
    """Log term of a 4-d cone from the curvature of its 3-d cross-section.

    ``c = -(1/720) (4 pi)^-2 [5 (Scal - 6)^2 - 2 |Ric|^2 + 2 |R|^2] Vol(N)``;
    the ``Delta Scal`` contribution integrates to zero on a closed manifold.
    Exact inputs give an :class:`ExactScalar`, otherwise a float.
    """
    integrand = 5 * (curv.scal - 6) ** 2 - 2 * curv.ric_norm_sq + 2 * curv.riem_norm_sq
    vol = curv.volume
    if (vol.to_float() if isinstance(vol, ExactScalar) else vol) < 0:
        raise ValueError("volume must be non-negative")
    if curv.exact:
        return ExactScalar.of(vol) * _four_pi_sq_inv() * (-as_fraction(integrand) / 720)
    v = vol.to_float() if isinstance(vol, ExactScalar) else float(vol)
    return -float(integrand) * v / (720.0 * 16.0 * math.pi**2)


def u2_integral(curv: CurvatureData3):
    """``a_2 = (1/360) int (5 Scal^2 - 2 |Ric|^2 + 2 |R|^2)`` for constant data."""
    integrand = 5 * curv.scal**2 - 2 * curv.ric_norm_sq + 2 * curv.riem_norm_sq
    if curv.exact:
        return ExactScalar.of(curv.volume) * (as_fraction(integrand) / 360)
    v = curv.volume.to_float() if isinstance(curv.volume, ExactScalar) else float(curv.volume)
    return float(integrand) * v / 360.0


def _constant_curvature_list(n: int, kappa, vol_ratio, max_j: int) -> HeatCoeffList:
    return HeatCoeffList(n, tuple(scaled_coeff(n, j, kappa, vol_ratio) for j in range(max_j + 1)))


def heat_coeffs_for(cs: CrossSection, max_j: int) -> HeatCoeffList:
    """Coefficients ``a_0 .. a_max_j`` for a built-in cross-section family."""
    if max_j < 0:
        raise ValueError("max_j must be >= 0")
    if isinstance(cs, Circle):
        s = cs.sin_alpha
        a0: Coeff = ExactScalar(2 * s, 2) if isinstance(s, Fraction) else 2 * math.pi * s
        return HeatCoeffList(1, (a0,) + (ExactScalar.zero(),) * max_j)
    if isinstance(cs, Sphere):
        return _constant_curvature_list(cs.n, cs.curvature, cs.vol_ratio, max_j)
    if isinstance(cs, (SpaceForm, Lens, RealProjective)):
        return _constant_curvature_list(cs.n, 1, cs.vol_ratio, max_j)
    if isinstance(cs, FlatTorus):
        v = cs.volume
        a0 = ExactScalar(v) if isinstance(v, Fraction) else float(v)
        return HeatCoeffList(cs.n, (a0,) + (ExactScalar.zero(),) * max_j)
    if isinstance(cs, ExplicitSpectrum):
        if cs.heat_coeffs is None:
            raise ValueError("explicit spectrum carries no heat coefficients")
        cs.heat_coeffs.require(max_j)
        return HeatCoeffList(cs.n, cs.heat_coeffs.values[: max_j + 1])
    raise TypeError(f"unsupported cross-section {cs!r}")


def family_volume(cs: CrossSection) -> Coeff:
    return heat_coeffs_for(cs, 0)[0]
