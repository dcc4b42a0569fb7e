"""The log term of a constant-curvature cross-section as a polynomial in kappa.

For ``N`` of constant curvature ``kappa`` and fixed volume ratio,
``a_j^N = kappa^j a_j(S^n) r``, so ``c`` is a polynomial of degree
``(n+1)/2`` in ``kappa``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import ExactScalar, as_fraction, exact_sum, gamma_half, k_coefficients
from .heat_coeffs import HeatCoeffList, scaled_coeff
from .singular import log_term

__all__ = [
    "CurvaturePolynomial",
    "Root",
    "build",
    "build_direct",
    "build_from_log_term",
    "evaluate",
    "roots",
]


@dataclass(frozen=True)
class Root:
    value: float
    mult: int
    # (p, q, d, r) meaning (p + q sqrt(d)) / r, or a rational root as (p, 0, 0, r)
    exact: Optional[tuple[int, int, int, int]] = None

    def to_json(self) -> dict:
        d: dict = {"value": self.value, "mult": self.mult}
        if self.exact is not None:
            p, q, dd, r = self.exact
            d["exact"] = {"p": str(p), "q": str(q), "d": str(dd), "r": str(r)}
        return d


@dataclass(frozen=True)
class CurvaturePolynomial:
    """``coeffs[k]`` multiplies ``kappa^(deg - k)`` (highest power first)."""

    n: int
    vol_ratio: Fraction
    coeffs: tuple[ExactScalar, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def common_factor(self) -> ExactScalar:
        return self.coeffs[0]

    @property
    def normalized(self) -> tuple[Fraction, ...]:
        """Monic rational coefficients, highest power first."""
        lead = self.coeffs[0]
        return tuple((c / lead).rational if c else Fraction(0) for c in self.coeffs)

    @property
    def primitive(self) -> tuple[int, ...]:
        """Coprime integer coefficients with positive leading term."""
        q = self.normalized
        den = math.lcm(*(x.denominator for x in q))
        ints = [int(x * den) for x in q]
        g = math.gcd(*ints)
        return tuple(i // g for i in ints)

    def to_json(self, with_roots: bool = False) -> dict:
        d: dict = {"n": self.n, "coeffs": [str(x) for x in self.normalized]}
        if with_roots:
            d["roots"] = [r.to_json() for r in roots(self)]
        return d


def _check(n: int) -> int:
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and >= 3")
    return (n - 1) // 2


def build_direct(n: int, vol_ratio=1) -> CurvaturePolynomial:
    """Coefficients from the explicit double sum over ``k`` and ``l``.

    The coefficient of ``kappa^(h-k)``, ``h = (n+1)/2``, is ``(4 sqrt(pi))^-1
    r (-1)^(k+1) (n-1)^(2k)/(4^k k!) sum_l u^(2l-2k+2) Gamma(l+1/2) K_l / ((l-k+1)!
    (n-1)!)``; terms with a negative factorial argument are dropped.
    """
    u = _check(n)
    r = as_fraction(vol_ratio)
    h = u + 1
    kp = k_coefficients(u)
    out = []
    for k in range(h + 1):
        inner = []
        for l in range(1, u + 1):
            e = l - k + 1
            if e < 0:
                continue
            inner.append(gamma_half(l) * Fraction(u ** (2 * e) * kp[l], math.factorial(e) * math.factorial(n - 1)))
        w = Fraction((-1) ** (k + 1) * (n - 1) ** (2 * k), 4**k * math.factorial(k))
        # 1/(4 sqrt(pi))
        out.append(exact_sum(inner) * ExactScalar(w * r / 4, -1))
    return CurvaturePolynomial(n, r, tuple(out))


def build_from_log_term(n: int, vol_ratio=1) -> CurvaturePolynomial:
    """Coefficients by feeding unit-curvature coefficient lists into the log term.

    ``c(kappa) = sum_k w_k kappa^(h-k) a_{h-k}``, so the coefficient of
    ``kappa^(h-k)`` is the log term of the list with only ``a_{h-k}`` kept.
    """
    u = _check(n)
    r = as_fraction(vol_ratio)
    h = u + 1
    full = [scaled_coeff(n, j, 1, r) for j in range(h + 1)]
    out = []
    for k in range(h + 1):
        keep = h - k
        vals = tuple(v if j == keep else ExactScalar.zero() for j, v in enumerate(full))
        out.append(log_term(HeatCoeffList(n, vals), n + 1))
    return CurvaturePolynomial(n, r, tuple(out))


def build(n: int, vol_ratio=1) -> CurvaturePolynomial:
    """Build by both routes and insist they agree exactly."""
    p = build_direct(n, vol_ratio)
    q = build_from_log_term(n, vol_ratio)
    if p.coeffs != q.coeffs:
        raise ArithmeticError(f"curvature polynomial routes disagree for n={n}")
    return p


def evaluate(p: CurvaturePolynomial, kappa) -> ExactScalar:
    k = as_fraction(kappa)
    acc = ExactScalar.zero()
    for c in p.coeffs:
        acc = acc * k + c
    return acc


# ---------------------------------------------------------------------------
# roots


def _deflate(poly: list[Fraction], root: Fraction) -> tuple[list[Fraction], Fraction]:
    """Synthetic division by ``(x - root)``; returns quotient and remainder."""
    out = [poly[0]]
    for c in poly[1:]:
        out.append(c + out[-1] * root)
    return out[:-1], out[-1]


def _divisors(x: int) -> list[int]:
    x = abs(x)
    small = [d for d in range(1, math.isqrt(x) + 1) if x % d == 0]
    return sorted(set(small + [x // d for d in small]))


def _rational_roots(poly: list[Fraction]) -> list[Fraction]:
    den = math.lcm(*(c.denominator for c in poly))
    ints = [int(c * den) for c in poly]
    while ints and ints[-1] == 0:
        ints.pop()
    if len(ints) < 2:
        return []
    cands = set()
    # the divisor search is only cheap for modest constants
    if abs(ints[-1]) > 10**12 or abs(ints[0]) > 10**12:
        return []
    for p in _divisors(ints[-1]):
        for q in _divisors(ints[0]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    return sorted(c for c in cands if _horner(poly, c) == 0)


def _horner(poly, x):
    acc = 0 * x
    for c in poly:
        acc = acc * x + c
    return acc


def _sturm_count(seq: list[list[float]], x: float) -> int:
    signs = []
    for p in seq:
        v = _horner(p, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _derivative(p: list[Fraction]) -> list[Fraction]:
    d = len(p) - 1
    return [c * (d - i) for i, c in enumerate(p[:-1])]


def _real_roots_numeric(poly: list[Fraction], tol: float = 1e-14) -> list[float]:
    """Real roots of a squarefree polynomial: Sturm isolation, bisection, Newton."""
    seq = [poly, _derivative(poly)]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    fseq = [[float(c) for c in p] for p in seq]
    # Cauchy bound
    bound = 1 + max(abs(float(c / poly[0])) for c in poly[1:])

    def count(x: float) -> int:
        return _sturm_count(fseq, x)

    found: list[float] = []

    def isolate(lo: float, hi: float, depth: int = 0) -> None:
        k = count(lo) - count(hi)
        if k == 0:
            return
        if k == 1 or depth > 200:
            found.append(_refine(fseq[0], fseq[1], lo, hi, tol))
            return
        mid = 0.5 * (lo + hi)
        isolate(lo, mid, depth + 1)
        isolate(mid, hi, depth + 1)

    isolate(-bound, bound)
    return sorted(found)


def _refine(p: list[float], dp: list[float], lo: float, hi: float, tol: float) -> float:
    flo = _horner(p, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = _horner(p, mid)
        if fm == 0 or hi - lo < tol * max(1.0, abs(mid)):
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        d = _horner(dp, x)
        if d == 0:
            break
        step = _horner(p, x) / d
        if not lo - tol <= x - step <= hi + tol:
            break
        x -= step
    return x


def _squarefree_split(r: int) -> tuple[int, int]:
    """``r = s^2 d`` with ``d`` squarefree, ``r > 0``."""
    s, d = 1, r
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            s *= f
        f += 1
    return s, d


def _quadratic_roots(a: Fraction, b: Fraction, c: Fraction) -> list[Root]:
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        x = -b / (2 * a)
        return [Root(float(x), 2, (x.numerator, 0, 0, x.denominator))]
    # (-b +- sqrt(disc)) / (2a), disc = N/D -> sqrt(N D)/D
    num, den = disc.numerator, disc.denominator
    s, d = _squarefree_split(num * den)
    if d == 1:
        out = []
        for sign in (1, -1):
            x = (-b + sign * Fraction(s, den)) / (2 * a)
            out.append(Root(float(x), 1, (x.numerator, 0, 0, x.denominator)))
        return sorted(out, key=lambda r: r.value)
    # x = (-b den + sign s sqrt(d)) / (2 a den); bring to a common integer form
    lead = 2 * a * den
    pb = -b * den
    L = math.lcm(lead.denominator, pb.denominator)
    P, Q, R = int(pb * L), s * L, int(lead * L)
    g = math.gcd(math.gcd(P, Q), R)
    P, Q, R = P // g, Q // g, R // g
    if R < 0:
        P, Q, R = -P, -Q, -R
    out = []
    for sign in (1, -1):
        val = (P + sign * Q * math.sqrt(d)) / R
        out.append(Root(val, 1, (P, sign * Q, d, R)))
    return sorted(out, key=lambda r: r.value)


def _real_roots_of(poly: list[Fraction]) -> list[Root]:
    # peel rational roots exactly, with multiplicity
    found: list[Root] = []
    for r in _rational_roots(poly):
        mult = 0
        while len(poly) > 1:
            q, rem = _deflate(poly, r)
            if rem != 0:
                break
            poly, mult = q, mult + 1
        found.append(Root(float(r), mult, (r.numerator, 0, 0, r.denominator)))
    deg = len(poly) - 1
    if deg == 2:
        found.extend(_quadratic_roots(*poly))
    elif deg > 2:
        found.extend(Root(x, 1) for x in _real_roots_numeric(_squarefree(poly)))
    elif deg == 1:
        x = -poly[1] / poly[0]
        found.append(Root(float(x), 1, (x.numerator, 0, 0, x.denominator)))
    return found


def _squarefree(poly: list[Fraction]) -> list[Fraction]:
    a, b = list(poly), _derivative(poly)
    while b:
        a, b = b, _poly_rem(a, b)
    if len(a) <= 1:
        return poly
    # exact division by the gcd
    q: list[Fraction] = []
    rem = list(poly)
    while len(rem) >= len(a):
        f = rem[0] / a[0]
        q.append(f)
        for i in range(len(a)):
            rem[i] -= f * a[i]
        rem.pop(0)
    return q


def roots(p: CurvaturePolynomial) -> list[Root]:
    """Real roots with multiplicities, ascending.

    Rational roots and quadratic factors are exact; remaining factors of
    degree three or more are solved numerically on their squarefree part.
    """
    return sorted(_real_roots_of(list(p.normalized)), key=lambda r: r.value)
