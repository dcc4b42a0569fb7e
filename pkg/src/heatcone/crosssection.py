"""Tagged descriptions of the cone cross-section ``N``."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Sequence, Union

from .exact import as_fraction

if TYPE_CHECKING:  # pragma: no cover
    from .heat_coeffs import HeatCoeffList
    from .zeta import ZetaCombo

__all__ = [
    "Circle",
    "Sphere",
    "SpaceForm",
    "Lens",
    "RealProjective",
    "FlatTorus",
    "ExplicitSpectrum",
    "CrossSection",
    "parse_number",
]

Number = Union[int, Fraction, float]


def parse_number(x) -> Number:
    """Prefer an exact Fraction; fall back to float for things like ``0.7071``."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, float):
        return x
    s = str(x).strip()
    try:
        return Fraction(s) if ("." not in s and "e" not in s.lower()) else float(s)
    except ValueError:
        return float(s)


def _check_odd(n: int, lo: int = 3) -> None:
    if n < lo or n % 2 == 0:
        raise ValueError(f"dimension must be odd and >= {lo}, got {n}")


@dataclass(frozen=True)
class Circle:
    """Circle of length ``2 pi sin(alpha)``; the 2-d cone of opening angle alpha."""

    sin_alpha: Number

    def __post_init__(self) -> None:
        s = parse_number(self.sin_alpha)
        if not 0 < s <= 1:
            raise ValueError(f"sin(alpha) must lie in (0, 1], got {s}")
        object.__setattr__(self, "sin_alpha", s)

    @property
    def n(self) -> int:
        return 1


@dataclass(frozen=True)
class Sphere:
    """Constant curvature ``kappa`` with volume ``vol_ratio * Vol(S^n)``.

    The round sphere of radius ``A`` is ``Sphere.with_radius(n, A)``.
    """

    n: int
    curvature: Fraction = Fraction(1)
    vol_ratio: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        _check_odd(self.n)
        object.__setattr__(self, "curvature", as_fraction(self.curvature))
        object.__setattr__(self, "vol_ratio", as_fraction(self.vol_ratio))
        if self.vol_ratio <= 0:
            raise ValueError("vol_ratio must be positive")

    @classmethod
    def with_radius(cls, n: int, radius) -> "Sphere":
        a = as_fraction(radius)
        if a <= 0:
            raise ValueError("radius must be positive")
        return cls(n, 1 / a**2, a**n)

    def is_unit(self) -> bool:
        return self.curvature == 1 and self.vol_ratio == 1


@dataclass(frozen=True)
class SpaceForm:
    """Quotient of the unit ``S^n`` by a free isometric group action."""

    n: int
    vol_ratio: Fraction

    def __post_init__(self) -> None:
        _check_odd(self.n)
        object.__setattr__(self, "vol_ratio", as_fraction(self.vol_ratio))
        if not 0 < self.vol_ratio <= 1:
            raise ValueError("vol_ratio must lie in (0, 1]")


@dataclass(frozen=True)
class Lens:
    """Lens space ``S^3 / Z_k`` with the round metric."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def n(self) -> int:
        return 3

    @property
    def vol_ratio(self) -> Fraction:
        return Fraction(1, self.k)


@dataclass(frozen=True)
class RealProjective:
    n: int

    def __post_init__(self) -> None:
        _check_odd(self.n)

    @property
    def vol_ratio(self) -> Fraction:
        return Fraction(1, 2)


@dataclass(frozen=True)
class FlatTorus:
    """Cubic flat torus ``R^n / (L Z)^n`` with ``L^n = volume``.

    The unit-volume torus has eigenvalues ``4 pi^2 |k|^2``.
    """

    n: int
    volume: Number = Fraction(1)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        v = parse_number(self.volume)
        if v <= 0:
            raise ValueError("volume must be positive")
        object.__setattr__(self, "volume", v)


@dataclass(frozen=True)
class ExplicitSpectrum:
    """User-supplied eigenvalues with multiplicities.

    Singular terms need more than finitely many eigenvalues: pass
    ``heat_coeffs`` for the log term and ``combo`` for the constant term.
    """

    n: int
    entries: tuple[tuple[float, int], ...]
    combo: Optional["ZetaCombo"] = None
    heat_coeffs: Optional["HeatCoeffList"] = field(default=None)

    def __post_init__(self) -> None:
        ent = tuple(sorted((float(lam), int(mu)) for lam, mu in self.entries))
        if any(lam < 0 or mu <= 0 for lam, mu in ent):
            raise ValueError("eigenvalues must be >= 0 and multiplicities > 0")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[tuple[float, int]], **kw) -> "ExplicitSpectrum":
        return cls(n, tuple(pairs), **kw)


CrossSection = Union[Circle, Sphere, SpaceForm, Lens, RealProjective, FlatTorus, ExplicitSpectrum]
