"""Exact arithmetic substrate.

Every closed form handled by the package is a rational number times a
half-integer power of pi.  :class:`ExactScalar` carries exactly that, and
refuses to add quantities of different pi-grade.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence, Union

import mpmath

__all__ = [
    "ExactScalar",
    "GradeMismatch",
    "KPolynomial",
    "bernoulli",
    "k_coefficients",
    "gamma_half",
    "factorial_or_inf",
    "as_fraction",
    "exact_sum",
    "linear_combination",
]

RationalLike = Union[int, Fraction]


class GradeMismatch(ArithmeticError):
    """Raised when adding exact scalars carrying different powers of pi."""


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"3/4"`` to a Fraction.

    Floats are rejected: silently turning a float into a dyadic rational is
    exactly the kind of promotion this module avoids.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """``rational * pi**(pi_half / 2)``.

    Zero is canonicalised to ``pi_half == 0`` so that it adds to anything.
    """

    rational: Fraction
    pi_half: int = 0

    def __post_init__(self) -> None:
        q = as_fraction(self.rational)
        object.__setattr__(self, "rational", q)
        object.__setattr__(self, "pi_half", int(self.pi_half) if q else 0)

    # -- construction -----------------------------------------------------
    @classmethod
    def of(cls, x: "ExactScalar | RationalLike") -> "ExactScalar":
        return x if isinstance(x, ExactScalar) else cls(as_fraction(x), 0)

    @classmethod
    def pi_power(cls, half_power: int, coeff: RationalLike = 1) -> "ExactScalar":
        return cls(as_fraction(coeff), half_power)

    @classmethod
    def zero(cls) -> "ExactScalar":
        return cls(Fraction(0), 0)

    # -- accessors ----------------------------------------------------------
    @property
    def numerator(self) -> int:
        return self.rational.numerator

    @property
    def denominator(self) -> int:
        return self.rational.denominator

    def is_zero(self) -> bool:
        return self.rational == 0

    def sign(self) -> int:
        return (self.rational > 0) - (self.rational < 0)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, float):
            raise TypeError("mixing ExactScalar with float; call to_float() first")
        return ExactScalar(as_fraction(other), 0)

    def __add__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if o.pi_half != self.pi_half:
            raise GradeMismatch(
                f"cannot add pi^({self.pi_half}/2) and pi^({o.pi_half}/2) terms"
            )
        return ExactScalar(self.rational + o.rational, self.pi_half)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rational, self.pi_half)

    def __pos__(self) -> "ExactScalar":
        return self

    def __sub__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar(self.rational * o.rational, self.pi_half + o.pi_half)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("ExactScalar division by zero")
        return ExactScalar(self.rational / o.rational, self.pi_half - o.pi_half)

    def __rtruediv__(self, other) -> "ExactScalar":
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "ExactScalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and self.is_zero():
            raise ZeroDivisionError("0 ** negative")
        return ExactScalar(self.rational**k, self.pi_half * k)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, float):
            return NotImplemented
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.rational == o.rational and self.pi_half == o.pi_half

    def __hash__(self) -> int:
        return hash((self.rational, self.pi_half))

    def _cmp_key(self, other) -> tuple[Fraction, Fraction]:
        o = self._coerce(other)
        if self.is_zero() or o.is_zero() or self.pi_half == o.pi_half:
            return self.rational, o.rational
        raise GradeMismatch("ordering across pi-grades is not defined exactly")

    def __lt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other) -> bool:
        a, b = self._cmp_key(other)
        return a >= b

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- demotion -----------------------------------------------------------
    def to_float(self) -> float:
        if self.is_zero():
            return 0.0
        if self.pi_half == 0:
            return float(self.rational)
        return float(self.to_mpf(30))

    __float__ = to_float

    def to_mpf(self, dps: int = 30) -> mpmath.mpf:
        """High-precision value with at least ``dps`` significant digits."""
        with mpmath.workdps(dps + 5):
            v = mpmath.mpf(self.numerator) / self.denominator
            if self.pi_half:
                v *= mpmath.pi ** (mpmath.mpf(self.pi_half) / 2)
            return +v

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        return {"num": str(self.numerator), "den": str(self.denominator), "pi_half": self.pi_half}

    @classmethod
    def from_json(cls, d: dict) -> "ExactScalar":
        den = int(d["den"])
        if den <= 0:
            raise ValueError("denominator must be positive")
        return cls(Fraction(int(d["num"]), den), int(d["pi_half"]))

    def __str__(self) -> str:
        r = str(self.rational)
        if self.pi_half == 0:
            return r
        k = self.pi_half
        p = f"pi^{k // 2}" if k % 2 == 0 else f"pi^({k}/2)"
        if k == 2:
            p = "pi"
        return p if self.rational == 1 else f"{r}*{p}"

    def __repr__(self) -> str:
        return f"ExactScalar({self.rational!s}, pi_half={self.pi_half})"


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; produces B_1 = +1/2, flipped below.
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    if n >= 1:
        out[1] = -out[1]
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number ``B_n`` with the ``B_1 = -1/2`` convention."""
    if n < 0:
        raise ValueError("n must be >= 0")
    # tables are cached by size; round up so nearby requests share one
    return _bernoulli_table(max(32, 1 << n.bit_length()))[n]


# ---------------------------------------------------------------------------
# K-polynomials


@dataclass(frozen=True)
class KPolynomial:
    """Coefficients of ``prod_{q=0}^{l-1} (v^2 - q^2) = sum_i K_i v^(2i)``.

    ``coeffs[i-1]`` holds ``K_i`` for ``i = 1..l``.
    """

    l: int
    coeffs: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        if not 1 <= i <= self.l:
            raise IndexError(f"K_{i} undefined for l={self.l}")
        return self.coeffs[i - 1]

    def evaluate(self, v: RationalLike) -> Fraction:
        w = as_fraction(v) ** 2
        return sum((c * w**i for i, c in enumerate(self.coeffs, start=1)), Fraction(0))


@lru_cache(maxsize=None)
def k_coefficients(l: int) -> KPolynomial:
    if l < 1:
        raise ValueError("l must be >= 1")
    # polynomial in w = v^2, ascending powers; start with the q = 0 factor w
    poly = [0, 1]
    for q in range(1, l):
        shifted = [0] + poly
        poly = [s - q * q * p for s, p in zip(shifted, poly + [0])]
    return KPolynomial(l, tuple(Fraction(c) for c in poly[1:]))


# ---------------------------------------------------------------------------
# Gamma at half integers


def gamma_half(l: int) -> ExactScalar:
    """``Gamma(l + 1/2)`` as a rational multiple of ``sqrt(pi)``."""
    if l >= 0:
        r = Fraction(math.factorial(2 * l), 4**l * math.factorial(l))
    else:
        m = -l
        r = Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m))
    return ExactScalar(r, 1)


def factorial_or_inf(k: int) -> int | None:
    """``k!`` for ``k >= 0``; ``None`` stands for the infinite value at negative k."""
    return math.factorial(k) if k >= 0 else None


def exact_sum(values: Sequence[ExactScalar]) -> ExactScalar:
    total = ExactScalar.zero()
    for v in values:
        total = total + v
    return total


def linear_combination(coeffs, values):
    """``sum c_i * v_i`` with exact rationals ``c_i``.

    Stays exact when every value with a nonzero coefficient is an
    :class:`ExactScalar`; otherwise demotes to a float (compensated sum).
    Zero coefficients never force demotion.
    """
    used = [(as_fraction(c), v) for c, v in zip(coeffs, values, strict=True) if c != 0]
    if all(isinstance(v, ExactScalar) for _, v in used):
        return exact_sum([v * c for c, v in used])
    return math.fsum(float(c) * (v.to_float() if isinstance(v, ExactScalar) else float(v)) for c, v in used)
