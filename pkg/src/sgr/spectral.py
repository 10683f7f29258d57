"""Singularities, radius of convergence, norms, Green's functions and growth fits.

Exact polynomial algebra (discriminants, factorization, complex root
isolation with rational rectangles) is delegated to sympy; branch tracking
and fitting use floating point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
import sympy as sp

from sgr import groupring as gr
from sgr.errors import (
    ContractError,
    DomainError,
    MismatchError,
    PathError,
    PrecisionError,
    UnsupportedInputError,
)
from sgr.guess import AlgEquation, guess_algebraic
from sgr.moments import MomentData, compute_moments, detect_stride
from sgr.zseries import ZSeries, format_poly

_Y, _Z = sp.symbols("y z")


@dataclass(frozen=True)
class AlgebraicNumber:
    """A root of ``poly`` (integer coefficients, low to high) isolated in ``rect``.

    ``rect = (re_lo, re_hi, im_lo, im_hi)`` has rational corners and contains
    exactly one root of ``poly``; real roots have ``im_lo == im_hi == 0``.
    """

    poly: tuple
    rect: tuple
    approx: complex

    def __abs__(self) -> float:
        return abs(self.approx)

    @property
    def is_real(self) -> bool:
        return self.rect[2] == 0 and self.rect[3] == 0

    @property
    def is_rational(self) -> bool:
        return len(self.poly) == 2

    def exact(self) -> Fraction | None:
        if not self.is_rational:
            return None
        c0, c1 = self.poly
        return Fraction(-c0, c1)

    def contains(self, x: complex) -> bool:
        re_lo, re_hi, im_lo, im_hi = (float(v) for v in self.rect)
        return re_lo <= x.real <= re_hi and im_lo <= x.imag <= im_hi

    def reciprocal(self, eps: Fraction = Fraction(1, 10**15)) -> AlgebraicNumber:
        if self.approx == 0:
            raise DomainError("zero has no reciprocal")
        rev = tuple(reversed(self.poly))
        target = 1 / self.approx
        roots = isolate_roots(rev, eps)
        return min(roots, key=lambda r: abs(r.approx - target))

    def sqrt_positive(self, eps: Fraction = Fraction(1, 10**15)) -> AlgebraicNumber:
        """Positive square root of a positive real algebraic number."""
        if not self.is_real or self.approx.real <= 0:
            raise DomainError("need a positive real number")
        # p(x^2)
        sq = []
        for c in self.poly:
            sq += [c, 0]
        sq = tuple(sq[:-1])
        target = math.sqrt(self.approx.real)
        best = None
        for f in _irreducible_factors(sq):
            for r in isolate_roots(f, eps):
                if best is None or abs(r.approx - target) < abs(best.approx - target):
                    best = r
        return best

    def describe(self) -> str:
        coeffs = self.poly if self.poly[-1] > 0 else [-c for c in self.poly]
        poly = format_poly(coeffs, "z", descending=True)
        lo, hi, ilo, ihi = self.rect
        if self.is_real:
            box = f"[{lo}, {hi}]"
        else:
            box = f"[{lo}, {hi}] x [{ilo}, {ihi}]i"
        return f"root of {poly} in {box}"


def _irreducible_factors(coeffs_low_high) -> list[tuple]:
    poly = sp.Poly(list(reversed(coeffs_low_high)), _Z)
    out = []
    for f, _mult in sp.factor_list(poly)[1]:
        if f.degree() >= 1:
            out.append(tuple(int(c) for c in reversed(f.all_coeffs())))
    return out


def isolate_roots(coeffs_low_high: Sequence[int], eps: Fraction = Fraction(1, 10**15)) -> list:
    """All complex roots of a squarefree integer polynomial, exactly isolated."""
    poly = sp.Poly(list(reversed([int(c) for c in coeffs_low_high])), _Z)
    if poly.degree() < 1:
        return []
    eps_r = sp.Rational(eps.numerator, eps.denominator)
    real, cplx = poly.intervals(all=True, eps=eps_r)
    out = []
    key = tuple(int(c) for c in coeffs_low_high)
    for (a, b), _ in real:
        a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
        out.append(AlgebraicNumber(key, (a, b, Fraction(0), Fraction(0)), complex(float((a + b) / 2))))
    for (lo, hi), _ in cplx:
        lo_re, lo_im = (sp.Rational(x) for x in lo.as_real_imag())
        hi_re, hi_im = (sp.Rational(x) for x in hi.as_real_imag())
        rect = tuple(Fraction(int(x.p), int(x.q)) for x in (lo_re, hi_re, lo_im, hi_im))
        approx = complex(float((rect[0] + rect[1]) / 2), float((rect[2] + rect[3]) / 2))
        out.append(AlgebraicNumber(key, rect, approx))
    return out


def _sympy_q(eq: AlgEquation):
    return sp.Poly(sum(c * _Y**j * _Z**k for (j, k), c in eq.coeffs.items()), _Y, _Z)


def singular_candidates(eq: AlgEquation, eps: Fraction = Fraction(1, 10**15)) -> list:
    """Roots of the y-discriminant and of the leading y-coefficient of Q.

    z = 0 is dropped: the series branch is analytic there.  Candidates are
    deduplicated and sorted by modulus, then argument.
    """
    q = _sympy_q(eq)
    coeffs = eq.y_coefficients()
    if eq.dy == 0:
        polys = [sp.Poly(list(reversed(coeffs[0])), _Z)]
    else:
        lead = sp.Poly(list(reversed(coeffs[eq.dy])), _Z)
        polys = [lead]
        if eq.dy >= 2:
            disc = sp.discriminant(q.as_expr(), _Y)
            polys.append(sp.Poly(disc, _Z))
    factors: set = set()
    for p in polys:
        if p.is_zero:
            continue
        for f, _m in sp.factor_list(p)[1]:
            if f.degree() < 1:
                continue
            t = tuple(int(c) for c in reversed(f.all_coeffs()))
            if t[-1] < 0:
                t = tuple(-c for c in t)
            if t == (0, 1):
                continue  # the factor z
            factors.add(t)
    cands = []
    for f in sorted(factors):
        cands.extend(isolate_roots(f, eps))
    cands.sort(key=lambda r: (abs(r.approx), cmath.phase(r.approx)))
    for a, b in zip(cands, cands[1:]):
        if abs(a.approx - b.approx) <= 4 * float(eps) * max(1.0, abs(a.approx)):
            raise PrecisionError(f"candidates {a.approx} and {b.approx} not separated at {float(eps)}")
    return cands


# empirical radius


def _strided(m: MomentData | Sequence, stride: int | None):
    seq = m.seq if isinstance(m, MomentData) else tuple(Fraction(a) for a in m)
    if stride is None:
        stride = detect_stride(seq)
    return stride, [Fraction(a) for a in seq[::stride]]


def _richardson(values: Sequence[Fraction], k0: int, max_order: int = 12) -> Fraction:
    """Extrapolate s_k = s + c_1/k + c_2/k^2 + ... from its last terms.

    ``values[i]`` is s_{k0+i}.  The order with the smallest jump between
    consecutive extrapolants is kept.
    """
    K = k0 + len(values) - 1
    ests = []
    for m in range(0, min(max_order, len(values) - 1) + 1):
        N = K - m
        acc = Fraction(0)
        for j in range(m + 1):
            acc += values[N + j - k0] * Fraction((N + j) ** m * (-1) ** (j + m),
                                                 math.factorial(j) * math.factorial(m - j))
        ests.append(acc)
    if len(ests) == 1:
        return ests[0]
    jumps = [abs(ests[i] - ests[i - 1]) for i in range(1, len(ests))]
    i = min(range(len(jumps)), key=lambda t: jumps[t])
    return ests[i + 1]


def _log_abs(x: Fraction) -> float:
    x = abs(x)
    return math.log(x.numerator) - math.log(x.denominator)


def empirical_growth(m: MomentData | Sequence, stride: int | None = None) -> tuple[float, int]:
    """Limit of |b_{k+1}/b_k| for b_k = a_{stride k}; returns (limit, stride)."""
    stride, b = _strided(m, stride)
    nz = [k for k, x in enumerate(b) if x]
    if len(nz) < 12:
        raise ContractError("need at least 12 nonzero strided terms")
    tail_start = len(b) // 2
    tail = b[tail_start:]
    if any(not x for x in tail):
        raise UnsupportedInputError("zero terms in the tail")
    ratios = [abs(tail[i + 1] / tail[i]) for i in range(len(tail) - 1)]
    diffs = [ratios[i + 1] - ratios[i] for i in range(len(ratios) - 1)]
    monotone = all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)
    if monotone:
        return float(_richardson(ratios, tail_start)), stride
    # root test with a linear fit in 1/k
    ks = list(range(max(tail_start, 1), len(b)))
    us = [math.exp(_log_abs(b[k]) / k) for k in ks]
    xs = [1.0 / k for k in ks]
    slope, icept = np.polyfit(xs, us, 1)
    return float(icept), stride


def radius_of_convergence(m: MomentData, eq: AlgEquation | None = None, tol: float = 1e-6,
                          stride: int | None = None):
    """(empirical radius, certified singularity or None).

    With an equation, the smallest-modulus candidate whose modulus matches
    the empirical radius within ``tol`` (relative) is the certificate;
    positive real candidates are preferred when the strided terms are
    nonnegative.
    """
    growth, stride = empirical_growth(m, stride)
    if growth <= 0:
        raise UnsupportedInputError("no exponential growth detected")
    rho = growth ** (-1.0 / stride)
    if eq is None:
        return rho, None
    cands = singular_candidates(eq)
    match = [c for c in cands if abs(abs(c) - rho) <= tol * rho]
    if not match:
        raise MismatchError(
            f"no candidate singularity matches empirical radius {rho:.12g} "
            f"(candidate moduli {[round(abs(c), 12) for c in cands]})",
            rho, cands,
        )
    best_mod = min(abs(c) for c in match)
    same = [c for c in match if abs(abs(c) - best_mod) <= tol * rho]
    _, b = _strided(m, stride)
    if all(x >= 0 for x in b):
        pos = [c for c in same if c.is_real and c.approx.real > 0]
        if pos:
            return rho, pos[0]
    return rho, same[0]


# norms


@dataclass
class NormOptions:
    n_max: int = 80
    dy_max: int = 4
    dz_max: int = 4
    guard: int = 10
    tolerance: float = 1e-6
    method: str = "auto"
    route: str = "auto"  # "star" forces the P*P route even for self-adjoint P


@dataclass
class NormReport:
    norm: float
    empirical: float
    certificate: AlgebraicNumber | None = None  # for 1/rho of the self-adjoint element
    certified: float | None = None
    agreement: bool | None = None
    tolerance: float = 1e-6
    route: str = "direct"  # "direct" (self-adjoint) or "star" (via P*P)
    equation: AlgEquation | None = None
    exact: Fraction | None = None
    radius: float = 0.0
    moments: MomentData | None = field(default=None, repr=False)


def find_equation(series: ZSeries, dy_max: int, dz_max: int, guard: int = 10) -> AlgEquation | None:
    """Largest search box the available order allows, capped at (dy_max, dz_max)."""
    dy, dz = dy_max, dz_max
    while (dy + 1) * (dz + 1) + guard > series.order and (dy > 1 or dz > 0):
        if dz >= dy and dz > 0:
            dz -= 1
        else:
            dy -= 1
    if (dy + 1) * (dz + 1) + guard > series.order:
        return None
    return guess_algebraic(series, dy, dz, guard)


def norm(p: gr.RingMatrix, options: NormOptions | None = None) -> NormReport:
    """Operator norm through the dominant singularity of R_S, S = P or P*P."""
    opt = options or NormOptions()
    if opt.route not in ("auto", "star"):
        raise ValueError(f"unknown route {opt.route!r}")
    if opt.route == "auto" and gr.is_self_adjoint(p):
        s, route = p, "direct"
    else:
        s, route = gr.mat_mul(gr.star_matrix(p), p), "star"
    m = compute_moments(s, opt.n_max, opt.method)
    eq = find_equation(ZSeries(m.seq), opt.dy_max, opt.dz_max, opt.guard)
    rho, cert = radius_of_convergence(m, eq, opt.tolerance)
    power = 0.5 if route == "star" else 1.0
    empirical = (1.0 / rho) ** power
    report = NormReport(empirical, empirical, tolerance=opt.tolerance, route=route,
                        equation=eq, radius=rho, moments=m)
    if cert is not None:
        inv = cert.reciprocal()
        certified = abs(inv) ** power
        report.certificate = inv
        report.certified = certified
        report.norm = certified
        report.agreement = abs(empirical - certified) <= opt.tolerance * certified
        if inv.is_rational:
            val = abs(inv.exact())
            if route == "direct":
                report.exact = val
            else:
                num, den = math.isqrt(val.numerator), math.isqrt(val.denominator)
                if num * num == val.numerator and den * den == val.denominator:
                    report.exact = Fraction(num, den)
    return report


# Green's function


def _y_roots(eq: AlgEquation, z: complex) -> np.ndarray:
    coeffs = [complex(sum(c * z**k for k, c in enumerate(cj))) for cj in eq.y_coefficients()]
    scale = max(abs(c) for c in coeffs) or 1.0
    while len(coeffs) > 1 and abs(coeffs[-1]) <= 1e-14 * scale:
        coeffs.pop()
    if len(coeffs) <= 1:
        return np.array([], dtype=complex)
    return np.roots(list(reversed(coeffs)))


def _track(eq: AlgEquation, path, y0: complex, min_step: float = 1e-9) -> complex:
    """Follow the root of Q(., path(t)) starting at y0 from t = 0 to t = 1."""
    t, y, h = 0.0, complex(y0), 1.0 / 64
    prev = None
    while t < 1.0:
        t1 = min(1.0, t + h)
        roots = _y_roots(eq, path(t1))
        pred = y if prev is None else y + (y - prev[1]) * (t1 - t) / (t - prev[0])
        if len(roots) == 0:
            raise PathError(f"no finite roots at z={path(t1)}")
        d = np.abs(roots - pred)
        order = np.argsort(d)
        d1 = d[order[0]]
        d2 = d[order[1]] if len(roots) > 1 else math.inf
        if d1 < 0.25 * d2 and d1 < 0.1 * (1.0 + abs(y)):
            prev = (t, y)
            t, y = t1, complex(roots[order[0]])
            if d1 < 0.05 * d2:
                h = min(2 * h, 1.0 / 16)
        else:
            h /= 2
            if h < min_step:
                raise PathError(f"branch collision near z={path(t1)}")
    return y


def _pin(eq: AlgEquation, a0) -> complex:
    roots = _y_roots(eq, 0j)
    if len(roots) == 0:
        raise DomainError("Q(y, 0) has no roots")
    a0 = complex(a0)
    d = np.abs(roots - a0)
    i = int(np.argmin(d))
    others = np.delete(d, i)
    if d[i] > 1e-8 * (1 + abs(a0)) or (len(others) and others.min() < 1e-6):
        raise DomainError(f"a0={a0} is not a simple root of Q(y, 0)")
    return complex(roots[i])


def branch_radius(eq: AlgEquation, a0, eta: float = 1e-6) -> AlgebraicNumber:
    """Dominant singularity of the branch with R(0) = a0, from the equation alone.

    A candidate is a singularity of the branch if the tracked value runs off
    to infinity there or lands on a multiple root of Q(., lambda).
    """
    y0 = _pin(eq, a0)
    for lam in singular_candidates(eq):
        target = lam.approx * (1 - eta)
        try:
            y = _track(eq, lambda t: target * t, y0)
        except PathError:
            return lam
        roots = _y_roots(eq, lam.approx)
        if len(roots) == 0:
            return lam
        d = np.abs(roots - y)
        i = int(np.argmin(d))
        if d[i] > 1e-2 * (1 + abs(y)):
            return lam
        others = np.delete(np.abs(roots - roots[i]), i)
        if len(others) and others.min() < 1e-5 * (1 + abs(roots[i])):
            return lam
    raise DomainError("no candidate is a singularity of this branch")


def green_eval(eq: AlgEquation, a0, w: complex, radius: float | None = None,
               margin: float = 0.05, max_retries: int = 8) -> complex:
    """G(w) = (1/w) R(1/w) off the spectral disk.

    The branch is pinned by R(0) = a0, continued radially in z to
    1/w0 with w0 = 10/rho on the ray of w, then along the straight segment
    from w0 to w.  Path errors rotate the start point by k/20 radians.
    """
    w = complex(w)
    if radius is None:
        radius = abs(branch_radius(eq, a0))
    inv_rho = 1.0 / radius
    if abs(w) <= inv_rho * (1 + margin):
        raise DomainError(f"|w|={abs(w):.6g} not outside the spectral radius {inv_rho:.6g} "
                          f"with margin {margin}")
    y0 = _pin(eq, a0)
    last = None
    for attempt in range(max_retries + 1):
        k = (attempt + 1) // 2
        delta = (k if attempt % 2 else -k) / 20.0
        w0 = 10 * inv_rho * cmath.exp(1j * (cmath.phase(w) + delta))
        z0 = 1 / w0
        try:
            y1 = _track(eq, lambda t: z0 * t, y0)
            y = _track(eq, lambda t: 1 / (w0 + (w - w0) * t), y1)
            return y / w
        except PathError as exc:
            last = exc
    raise PathError(f"continuation failed after {max_retries} retries: {last}")


def series_green(m: MomentData, w: complex) -> complex:
    """(1/w) sum_{n<=T} a_n w^{-n}, summed in extended precision."""
    with mpmath.workdps(40):
        wm = mpmath.mpc(complex(w))
        acc = mpmath.mpc(0)
        term = 1 / wm
        for a in m.seq:
            acc += mpmath.mpf(a.numerator) / a.denominator * term
            term /= wm
        return complex(acc)


def green_tail_bound(m: MomentData, w: complex, norm_value: float) -> float:
    """Bound on the omitted tail: |a_n| <= N ||P||^n for the normalized trace."""
    N = m.dim or 1
    q = norm_value / abs(complex(w))
    if q >= 1:
        return math.inf
    T = len(m.seq)
    return N * q**T / (abs(complex(w)) * (1 - q))


# asymptotics


@dataclass
class AsymptoticFit:
    growth_base: float  # lambda_fit for the strided terms b_k
    alpha: float  # b_k ~ c lambda^k k^(-alpha-1)
    constant: float
    window: tuple
    residual_rms: float
    stride: int
    log_factor_suspected: bool


def asymptotic_fit(m: MomentData | Sequence, rho: float | None = None, stride: int | None = None,
                   residual_threshold: float = 1e-3) -> AsymptoticFit:
    """Least squares fit of log|b_k| - k log(lambda) = (-alpha-1) log k + c on the tail half."""
    stride, b = _strided(m, stride)
    if len(b) < 16:
        raise ContractError("need at least 16 strided terms")
    k0 = max(len(b) // 2, 1)
    tail = b[k0:]
    if any(not x for x in tail):
        raise UnsupportedInputError("zero terms in the fitting window")
    if not (all(x > 0 for x in tail) or all(x < 0 for x in tail)):
        raise UnsupportedInputError("sign changes in the fitting window")
    if rho is None:
        growth, _ = empirical_growth(b, 1)
    else:
        growth = rho ** (-stride)
    lg = math.log(growth)
    ks = np.arange(k0, len(b), dtype=float)
    ys = np.array([_log_abs(b[int(k)]) - k * lg for k in ks])
    A = np.vstack([np.log(ks), np.ones_like(ks)]).T
    (e, c), *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ np.array([e, c])
    rms = float(np.sqrt(np.mean(resid**2)))
    return AsymptoticFit(growth, float(-e - 1), float(c), (k0, len(b) - 1), rms, stride,
                         rms > residual_threshold)
