"""Brute-force ground truth from explicit spectra.

Everything here is float arithmetic on enumerated eigenvalues, kept apart
from the exact pipelines it is used to check.  Summation goes through
``math.fsum`` (exactly rounded) so results do not depend on block order or
worker count.

``HEATCONE_PRECISION=extended`` evaluates each term with mpmath at 30
digits before the final rounding.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from .crosssection import (
    Circle,
    CrossSection,
    ExplicitSpectrum,
    FlatTorus,
    RealProjective,
    Sphere,
)
from .exact import ExactScalar
from .heat_coeffs import family_volume

__all__ = [
    "Spectrum",
    "HeatTraceValue",
    "DirichletValue",
    "ResidueEstimate",
    "NonSimplePole",
    "SumNotConverged",
    "spectrum",
    "heat_trace_partial",
    "fit_heat_coeffs",
    "dirichlet_sum",
    "numeric_residue",
    "precision_tier",
]

MAX_BUCKETS = 10**7


class NonSimplePole(ArithmeticError):
    pass


class SumNotConverged(ArithmeticError):
    pass


def precision_tier() -> str:
    tier = os.environ.get("HEATCONE_PRECISION", "double").strip().lower()
    if tier not in ("double", "extended"):
        raise ValueError(f"HEATCONE_PRECISION must be 'double' or 'extended', got {tier!r}")
    return tier


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues ``<= cutoff`` with multiplicities, ascending."""

    source: CrossSection
    lambdas: np.ndarray
    mults: np.ndarray
    cutoff: float

    def __post_init__(self) -> None:
        if len(self.lambdas) != len(self.mults):
            raise ValueError("lambdas and mults differ in length")
        if len(self.lambdas) > 1 and np.any(np.diff(self.lambdas) <= 0):
            raise ValueError("eigenvalues must be strictly ascending")

    @property
    def entries(self) -> list[tuple[float, int]]:
        return [(float(l), int(m)) for l, m in zip(self.lambdas, self.mults)]

    @property
    def dim(self) -> int:
        return self.source.n

    def total_multiplicity(self) -> int:
        return int(sum(int(m) for m in self.mults))

    def weyl_constant(self) -> Optional[float]:
        """``C`` in ``N(lambda) ~ C lambda^(n/2)``, when the volume is known."""
        try:
            vol = family_volume(self.source)
        except (TypeError, ValueError):
            return None
        v = vol.to_float() if isinstance(vol, ExactScalar) else float(vol)
        n = self.dim
        return v / ((4 * math.pi) ** (n / 2) * math.gamma(n / 2 + 1))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lambda", "multiplicity"])
        for lam, mu in self.entries:
            w.writerow([repr(lam), mu])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# spectra


def _sphere_mult(n: int, k: int) -> int:
    # (n+k-2)! / (k! (n-1)!) * (n+2k-1)
    q = Fraction(math.comb(n + k - 2, k) * (n + 2 * k - 1), n - 1)
    if q.denominator != 1:
        raise ArithmeticError("non-integral sphere multiplicity")
    return int(q)


def _rp_mult(n: int, k: int) -> int:
    if k == 0:
        return 1
    return _sphere_mult(n, 2 * k)


def _sphere_spectrum(n: int, kappa: float, cutoff: float):
    lams, mus = [], []
    k = 0
    while kappa * k * (n + k - 1) <= cutoff:
        lams.append(kappa * k * (n + k - 1))
        mus.append(_sphere_mult(n, k))
        k += 1
    return lams, mus


def _torus_spectrum(n: int, volume: float, cutoff: float):
    a = 4 * math.pi**2 / volume ** (2 / n)
    nmax = int(math.floor(cutoff / a + 1e-12))
    if nmax + 1 > MAX_BUCKETS:
        raise ValueError(f"cutoff needs {nmax + 1} norm buckets; cap is {MAX_BUCKETS}")
    one = np.zeros(nmax + 1, dtype=np.int64)
    r = math.isqrt(nmax)
    one[0] = 1
    one[np.arange(1, r + 1) ** 2] = 2
    acc = np.zeros(nmax + 1, dtype=np.int64)
    acc[0] = 1
    for _ in range(n):
        acc = np.convolve(acc, one)[: nmax + 1]
    idx = np.nonzero(acc)[0]
    return [a * float(i) for i in idx], [int(acc[i]) for i in idx]


def spectrum(cs: CrossSection, cutoff: float) -> Spectrum:
    """All eigenvalues ``<= cutoff`` of the Laplacian on ``cs``."""
    if not cutoff > 0:
        raise ValueError("cutoff must be positive")
    if isinstance(cs, Sphere):
        # a round sphere of curvature kappa has volume ratio kappa^(-n/2)
        if cs.vol_ratio**2 * cs.curvature**cs.n != 1:
            raise ValueError("spectrum known only for round spheres (vol_ratio = kappa^(-n/2))")
        lams, mus = _sphere_spectrum(cs.n, float(cs.curvature), cutoff)
    elif isinstance(cs, RealProjective):
        n = cs.n
        lams, mus = [], []
        k = 0
        while 2 * k * (n + 2 * k - 1) <= cutoff:
            lams.append(float(2 * k * (n + 2 * k - 1)))
            mus.append(_rp_mult(n, k))
            k += 1
    elif isinstance(cs, Circle):
        s2 = float(cs.sin_alpha) ** 2
        lams, mus = [0.0], [1]
        k = 1
        while k * k / s2 <= cutoff:
            lams.append(k * k / s2)
            mus.append(2)
            k += 1
    elif isinstance(cs, FlatTorus):
        lams, mus = _torus_spectrum(cs.n, float(cs.volume), cutoff)
    elif isinstance(cs, ExplicitSpectrum):
        merged: dict[float, int] = {}
        for lam, mu in cs.entries:
            if lam <= cutoff:
                merged[lam] = merged.get(lam, 0) + mu
        lams = sorted(merged)
        mus = [merged[l] for l in lams]
    else:
        raise TypeError(f"no explicit spectrum for {type(cs).__name__}")
    return Spectrum(cs, np.asarray(lams, dtype=float), np.asarray(mus, dtype=object), float(cutoff))


# ---------------------------------------------------------------------------
# summation helpers


def _blocks(n: int, workers: int) -> list[slice]:
    w = max(1, workers)
    size = max(1, -(-n // w))
    return [slice(i, min(n, i + size)) for i in range(0, n, size)]


def _terms(sp: Spectrum, fn_double, fn_ext, workers: int) -> float:
    ext = precision_tier() == "extended"

    def block(sl: slice) -> list:
        lam, mu = sp.lambdas[sl], sp.mults[sl]
        if ext:
            with mpmath.workdps(30):
                return [float(fn_ext(mpmath.mpf(float(l))) * int(m)) for l, m in zip(lam, mu)]
        return [fn_double(float(l)) * int(m) for l, m in zip(lam, mu)]

    sls = _blocks(len(sp.lambdas), workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(block, sls))
    else:
        parts = [block(s) for s in sls]
    # one exactly rounded sum over all terms: independent of the partition
    return math.fsum(x for p in parts for x in p)


@dataclass(frozen=True)
class HeatTraceValue:
    value: float
    tail_bound: float


def _counting_bound(sp: Spectrum) -> Callable[[float], float]:
    """Some ``N_up >= N``, where ``N(lam)`` counts eigenvalues ``<= lam``."""
    cs = sp.source
    n = sp.dim
    if isinstance(cs, (Sphere, RealProjective)):
        # degree K <= sqrt(lam / kappa); harmonics of degree <= K number
        # C(K+n, n) + C(K+n-1, n) <= 2 (K+n)^n / n!
        kappa = float(cs.curvature) if isinstance(cs, Sphere) else 1.0
        return lambda lam: 2 * (math.sqrt(lam / kappa) + n) ** n / math.factorial(n)
    if isinstance(cs, Circle):
        s = float(cs.sin_alpha)
        return lambda lam: 2 * s * math.sqrt(lam) + 1
    if isinstance(cs, FlatTorus):
        # integer points with |m| <= r lie in unit cubes inside the ball of radius r + sqrt(n)/2
        a = 4 * math.pi**2 / float(cs.volume) ** (2 / n)
        ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
        return lambda lam: ball * (math.sqrt(lam / a) + math.sqrt(n) / 2) ** n
    raise TypeError(f"no counting bound for {type(cs).__name__}")


def _heat_tail_bound(sp: Spectrum, t: float) -> float:
    cs = sp.source
    if isinstance(cs, ExplicitSpectrum):
        return math.fsum(mu * math.exp(-t * lam) for lam, mu in cs.entries if lam > sp.cutoff)
    # tail = t int_L^oo exp(-t lam) (N(lam) - N(L)) dlam, and N(L) is known exactly
    big_n = _counting_bound(sp)
    L = sp.cutoff
    have = sp.total_multiplicity()
    f = lambda x: mpmath.exp(-x) * max(big_n(L + float(x) / t) - have, 0.0)
    val = mpmath.exp(-t * L) * mpmath.quad(f, [0, 1, 10, mpmath.inf])
    return float(val) * (1 + 1e-9)



def heat_trace_partial(sp: Spectrum, t: float, workers: int = 1) -> HeatTraceValue:
    """``sum mu exp(-t lambda)`` over the stored spectrum, with a tail bound.

    The bound is rigorous: it integrates ``exp(-t lambda)`` against an
    elementary upper bound for the counting function beyond the cutoff.
    For explicit spectra it is the exact sum of the dropped entries.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    val = _terms(sp, lambda l: math.exp(-t * l), lambda l: mpmath.exp(-t * l), workers)
    bound = _heat_tail_bound(sp, t)
    return HeatTraceValue(val, bound)


def fit_heat_coeffs(
    cs: CrossSection,
    J: int,
    t_grid: Optional[Sequence[float]] = None,
    cutoff: Optional[float] = None,
    max_cond: float = 1e12,
) -> list[float]:
    """Estimate ``a_0 .. a_J`` from ``F(t) = (4 pi t)^(n/2) tr exp(-t Delta)``.

    Peeling: fit a polynomial to ``F`` on the grid and keep its constant
    term as ``a_0``; replace ``F`` by ``(F - a_0)/t`` and fit again with one
    degree less, and so on.  The default grid is 8 geometric points in
    [0.02, 0.2]; the default cutoff makes the heat-trace truncation below
    1e-10 at the smallest ``t``.
    """
    if J < 0:
        raise ValueError("J must be >= 0")
    ts = np.geomspace(0.02, 0.2, 8) if t_grid is None else np.asarray(sorted(t_grid), dtype=float)
    if len(ts) < J + 2 or np.any(ts <= 0):
        raise ValueError("grid needs at least J + 2 positive points")
    if cutoff is None:
        cutoff = max(1e4, 40.0 / ts[0])
    sp = spectrum(cs, cutoff)
    n = cs.n
    vals = []
    for t in ts:
        ht = heat_trace_partial(sp, float(t))
        if ht.tail_bound > 1e-10 * max(1.0, abs(ht.value)):
            raise SumNotConverged(f"heat-trace tail {ht.tail_bound:.3g} at t={t}: raise the cutoff")
        vals.append((4 * math.pi * t) ** (n / 2) * ht.value)
    f = np.asarray(vals)
    deg = min(len(ts) - 2, J + 4)
    out = []
    for j in range(J + 1):
        d = max(deg - j, 0)
        x = ts / ts[-1]  # column scaling keeps the Vandermonde tame
        v = np.vander(x, d + 1, increasing=True)
        cond = np.linalg.cond(v)
        if cond > max_cond:
            raise ValueError(f"ill-conditioned fit (condition {cond:.3g})")
        coef, *_ = np.linalg.lstsq(v, f, rcond=None)
        a = float(coef[0])
        out.append(a)
        f = (f - a) / ts
    return out


# ---------------------------------------------------------------------------
# Dirichlet sums


@dataclass(frozen=True)
class DirichletValue:
    value: float
    error: float


def _weyl_tail(c: float, n: int, shift_sq: float, s: float, start: float) -> float:
    # int_start^inf (lambda + c0)^(-s) C (n/2) lambda^(n/2 - 1) d lambda
    h = n / 2
    with mpmath.workdps(30):
        f = lambda x: (x + shift_sq) ** (-s) * x ** (h - 1)
        return float(c * h * mpmath.quad(f, [start, 2 * start, mpmath.inf]))


def _dirichlet_raw(sp: Spectrum, shift_sq: float, s: float, upto: float, workers: int) -> float:
    # keep at least one stored eigenvalue beyond the truncation so the
    # continuum can start half way to it
    k = min(int(np.searchsorted(sp.lambdas, upto, side="right")), len(sp.lambdas) - 1)
    sub = Spectrum(sp.source, sp.lambdas[:k], sp.mults[:k], float(sp.lambdas[k]))
    lam = sub.lambdas
    # drop a zero mode when the shift is zero
    keep = lam + shift_sq > 0
    sub = Spectrum(sp.source, lam[keep], sub.mults[keep], sub.cutoff)
    total = _terms(
        sub,
        lambda l: (l + shift_sq) ** (-s),
        lambda l: (l + shift_sq) ** (-mpmath.mpf(s)),
        workers,
    )
    c = sp.weyl_constant()
    if c is not None and len(sub.lambdas) and not isinstance(sp.source, ExplicitSpectrum):
        # start the continuum half way to the next eigenvalue
        start = 0.5 * (float(sub.lambdas[-1]) + sub.cutoff)
        total += _weyl_tail(c, sp.dim, shift_sq, s, start)
    return total


def dirichlet_sum(
    sp: Spectrum, shift: float, s: float, workers: int = 1, tol: float = 1e-9
) -> DirichletValue:
    """``sum mu (lambda + shift^2)^(-s)`` with a Weyl-density tail correction.

    The error estimate compares against the same sum truncated at a quarter
    of the cutoff; :class:`SumNotConverged` is raised when it exceeds
    ``tol`` relative to the value.
    """
    n = sp.dim
    if not s > n / 2:
        raise SumNotConverged(f"s={s} is outside the convergence region s > {n / 2}")
    c2 = float(shift) ** 2
    full = _dirichlet_raw(sp, c2, s, sp.cutoff, workers)
    coarse = _dirichlet_raw(sp, c2, s, sp.cutoff / 4, workers)
    err = abs(full - coarse)
    if err > tol * max(abs(full), 1e-300):
        raise SumNotConverged(f"error estimate {err:.3g} too large at s={s}; raise the cutoff")
    return DirichletValue(full, err)


# ---------------------------------------------------------------------------
# numeric residues


@dataclass(frozen=True)
class ResidueEstimate:
    value: float
    error: float


def numeric_residue(
    sampler: Callable[[float], float],
    s0: float,
    h_max: float = 1e-1,
    h_min: float = 1e-4,
    symmetric: bool = True,
) -> ResidueEstimate:
    """Limit of ``(s - s0) f(s)`` as ``s -> s0`` by Neville extrapolation.

    Samples at ``h`` halving from ``h_max`` down to about ``h_min``.  With
    ``symmetric`` the two one-sided values are averaged, which removes the
    odd powers of ``h`` (the extrapolation then runs in ``h^2``).  A
    non-simple pole shows up as a diverging tableau and raises
    :class:`NonSimplePole`.
    """
    hs = []
    h = h_max
    while h >= h_min * 0.999:
        hs.append(h)
        h /= 2
    g = []
    for h in hs:
        v = h * sampler(s0 + h)
        if symmetric:
            v = 0.5 * (v - h * sampler(s0 - h))
        g.append(v)
    x = [h * h for h in hs] if symmetric else list(hs)
    # divergence check: h f(s0+h) ~ a/h for a double pole
    if abs(g[-1]) > 8 * abs(g[0]) + 1e-300 and abs(g[-1]) > 4 * abs(g[-2]) * 0.9:
        raise NonSimplePole(f"(s - s0) f(s) grows as s -> {s0}")
    # Neville tableau toward x = 0
    table = [list(g)]
    best, best_err = g[-1], abs(g[-1] - g[-2])
    for k in range(1, len(g)):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            xi, xj = x[i], x[i + k]
            row.append((xj * prev[i] - xi * prev[i + 1]) / (xj - xi))
        table.append(row)
        for i in range(len(row)):
            ref = table[k - 1][i + 1]
            e = abs(row[i] - ref)
            if e < best_err:
                best, best_err = row[i], e
    scale = max(abs(best), 1.0)
    best_err = max(best_err, 4 * math.ulp(scale))
    if best_err > 1e-3 * scale:
        raise NonSimplePole(f"extrapolation did not settle near {s0} (spread {best_err:.3g})")
    return ResidueEstimate(best, best_err)
