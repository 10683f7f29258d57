"""Reconstruct annihilating certificates from truncated series.

* algebraic equations Q(f(z), z) = 0 (Hermite-Pade with the powers of f),
* linear recurrences sum_j p_j(n) b_{n+j} = 0 with polynomial coefficients,
  and the matching differential operator,
* the common-denominator growth check for G-functions.

Certificates are annihilating and verified on the full input truncation.
No factorization is attempted, so Q need not be the minimal polynomial.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sgr.errors import ContractError
from sgr.linalg import nullspace
from sgr.moments import detect_stride
from sgr.zseries import ZSeries, format_poly, poly_add, poly_mul, poly_trim

log = logging.getLogger(__name__)

DEFAULT_GUARD = 10


def _normalize_int(coeffs: Sequence, order_key=None) -> list[int]:
    """Clear denominators, divide by content, make the first nonzero coefficient positive."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = math.lcm(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g:
        ints = [x // g for x in ints]
    idx = range(len(ints)) if order_key is None else order_key
    for i in idx:
        if ints[i]:
            if ints[i] < 0:
                ints = [-x for x in ints]
            break
    return ints


# algebraic equations


@dataclass(frozen=True)
class AlgEquation:
    """Q(y, z) = sum coeffs[(j, k)] y^j z^k with integer coefficients."""

    coeffs: dict
    dy: int
    dz: int
    verified_order: int = 0

    @classmethod
    def from_coeffs(cls, coeffs: dict, verified_order: int = 0) -> AlgEquation:
        items = {jk: c for jk, c in coeffs.items() if c}
        if not items:
            raise ContractError("Q must be nonzero")
        keys = sorted(items)
        ints = _normalize_int([items[k] for k in keys])
        clean = dict(zip(keys, ints))
        dy = max(j for j, _ in clean)
        dz = max(k for _, k in clean)
        return cls(clean, dy, dz, verified_order)

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.dy, self.dz))

    def __eq__(self, other):
        if not isinstance(other, AlgEquation):
            return NotImplemented
        return self.coeffs == other.coeffs

    def y_coefficients(self) -> list[tuple]:
        """[c_0(z), ..., c_dy(z)] as low-to-high integer tuples."""
        out = []
        for j in range(self.dy + 1):
            c = [0] * (self.dz + 1)
            for (jj, k), v in self.coeffs.items():
                if jj == j:
                    c[k] = v
            out.append(tuple(c))
        return out

    def term_count(self) -> int:
        return len(self.coeffs)

    def __str__(self):
        return format_equation(self)

    def scaled(self, c) -> AlgEquation:
        """Q(y, c z), renormalized."""
        c = Fraction(c)
        return AlgEquation.from_coeffs({(j, k): v * c**k for (j, k), v in self.coeffs.items()},
                                       self.verified_order)


def format_equation(eq: AlgEquation) -> str:
    """Descending powers of y; multi-term z-coefficients are parenthesized.

    >>> format_equation(AlgEquation.from_coeffs({(2, 2): 4, (2, 0): -1, (0, 0): 1}))
    '(4*z^2-1)*y^2+1'
    """
    parts = []
    for j, c in reversed(list(enumerate(eq.y_coefficients()))):
        nz = [k for k, v in enumerate(c) if v]
        if not nz:
            continue
        poly = format_poly(c, "z", descending=True).replace(" ", "")
        ymono = "" if j == 0 else ("y" if j == 1 else f"y^{j}")
        if not ymono:
            piece = poly
        elif len(nz) > 1:
            piece = f"({poly})*{ymono}"
        elif poly == "1":
            piece = ymono
        elif poly == "-1":
            piece = f"-{ymono}"
        else:
            piece = f"{poly}*{ymono}"
        if parts and not piece.startswith("-"):
            piece = "+" + piece
        parts.append(piece)
    return "".join(parts)


def _powers(series: ZSeries, dy: int) -> list[list[Fraction]]:
    n = series.order
    pw = [[Fraction(1)] + [Fraction(0)] * (n - 1)]
    for _ in range(dy):
        nxt = poly_mul(pw[-1], series.coeffs, n)
        pw.append(nxt + [Fraction(0)] * (n - len(nxt)))
    return pw


def _alg_system(pw, dy: int, dz: int, order: int):
    cols = [(j, k) for j in range(dy + 1) for k in range(dz + 1)]
    rows = []
    for n in range(order):
        rows.append([pw[j][n - k] if n >= k else 0 for (j, k) in cols])
    return cols, rows


def _alg_candidate(pw, dy, dz, order):
    cols, rows = _alg_system(pw, dy, dz, order)
    basis = nullspace(rows, len(cols))
    return cols, basis


def _pick(cols, basis, make):
    cands = [make(dict(zip(cols, v))) for v in basis]
    cands = [c for c in cands if c is not None]
    if not cands:
        return None
    return min(cands, key=lambda q: (q.term_count(), _canon_key(q)))


def _canon_key(q):
    return tuple(sorted(q.coeffs.items()))


def required_order(dy: int, dz: int, guard: int = DEFAULT_GUARD) -> int:
    return (dy + 1) * (dz + 1) + guard


def guess_algebraic(series: ZSeries, dy: int, dz: int,
                    guard: int = DEFAULT_GUARD) -> AlgEquation | None:
    """Smallest annihilating Q with deg_y <= dy and deg_z <= dz, or None.

    Search order: increasing y-degree, then z-degree; among kernel vectors at
    the first feasible pair the sparsest wins.  All available coefficients
    are used as equations, so a returned Q vanishes to the full input order.
    """
    need = required_order(dy, dz, guard)
    if series.order < need:
        raise ContractError(f"need at least {need} series terms for (dy, dz) = ({dy}, {dz}), "
                            f"got {series.order}")
    order = series.order
    pw = _powers(series, dy)

    def feasible(a, b):
        return _alg_candidate(pw, a, b, order)

    def make(coeffs):
        if not any(v for (j, _), v in coeffs.items() if j > 0):
            return None  # Q(z) alone cannot vanish on a series
        return AlgEquation.from_coeffs(coeffs, order)

    # a solution at smaller degrees is also one at larger degrees, so the
    # outermost system decides existence
    cols, basis = feasible(dy, dz)
    if _pick(cols, basis, make) is None:
        return None
    for a in range(1, dy + 1):
        cols, basis = feasible(a, dz)
        if _pick(cols, basis, make) is None:
            continue
        for b in range(dz + 1):
            cols, basis = feasible(a, b)
            best = _pick(cols, basis, make)
            if best is not None:
                return best
    return None  # pragma: no cover


def verify_algebraic(eq: AlgEquation, series: ZSeries) -> int:
    """Largest k <= order with Q(f, z) = 0 mod z^k."""
    order = series.order
    acc = [Fraction(0)] * order
    power = [Fraction(1)] + [Fraction(0)] * (order - 1)
    for j, c in enumerate(eq.y_coefficients()):
        if j:
            power = poly_mul(power, series.coeffs, order)
        if any(c):
            term = poly_mul(list(c), power, order)
            acc = poly_add(acc, term)
    for k in range(order):
        if acc[k] if k < len(acc) else 0:
            return k
    return order


# recurrences


@dataclass(frozen=True)
class Recurrence:
    """sum_{j=0..order} polys[j](n) * b_{n+j} = 0 for b_k = a_{stride*k}."""

    polys: tuple  # polys[j] = integer coefficients of p_j, low to high
    stride: int = 1
    verified_range: tuple = (0, 0)

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    @property
    def degree(self) -> int:
        return max(len(poly_trim(p)) for p in self.polys) - 1

    def term_count(self) -> int:
        return sum(1 for p in self.polys for c in p if c)

    @property
    def coeffs(self):
        return {(j, k): c for j, p in enumerate(self.polys) for k, c in enumerate(p) if c}

    def residual(self, b: Sequence, n: int):
        return sum(_peval(p, n) * b[n + j] for j, p in enumerate(self.polys))

    def __str__(self):
        parts = []
        for j in reversed(range(len(self.polys))):
            p = self.polys[j]
            if not any(p):
                continue
            poly = format_poly(p, "n", descending=True).replace(" ", "")
            idx = "n" if j == 0 else f"n+{j}"
            nz = sum(1 for c in p if c)
            piece = f"({poly})*b[{idx}]" if nz > 1 else (
                f"b[{idx}]" if poly == "1" else f"-b[{idx}]" if poly == "-1" else f"{poly}*b[{idx}]")
            if parts and not piece.startswith("-"):
                piece = "+" + piece
            parts.append(piece)
        return "".join(parts) + " = 0"


def _peval(p, n):
    acc = 0
    for c in reversed(p):
        acc = acc * n + c
    return acc


def _rec_system(b, d, m):
    cols = [(j, k) for j in range(d + 1) for k in range(m + 1)]
    rows = []
    for n in range(len(b) - d):
        rows.append([Fraction(n) ** k * b[n + j] for (j, k) in cols])
    return cols, rows


def _make_rec(coeffs, d, m, stride, nterms):
    if not any(coeffs.get((d, k)) for k in range(m + 1)):
        return None
    cols = sorted(coeffs)
    # orient by the leading coefficient of p_d
    lead = [(d, k) for k in range(m, -1, -1)]
    order_key = [cols.index(c) for c in lead if c in cols]
    ints = _normalize_int([coeffs[c] for c in cols], order_key=order_key)
    table = dict(zip(cols, ints))
    polys = tuple(tuple(table.get((j, k), 0) for k in range(m + 1)) for j in range(d + 1))
    polys = tuple(tuple(poly_trim(p)) or (0,) for p in polys)
    return Recurrence(polys, stride, (0, nterms - d - 1))


def stride_terms(seq: Sequence, stride: int | None):
    if stride is None:
        stride = detect_stride(seq)
        if stride == 2:
            log.info("odd-index terms vanish; using stride 2")
    return stride, [Fraction(a) for a in seq[::stride]]


def guess_recurrence(seq: Sequence, d: int, m: int, stride: int | None = 1,
                     guard: int = DEFAULT_GUARD) -> Recurrence | None:
    """Recurrence of order <= d and coefficient degree <= m on b_k = a_{stride k}.

    ``stride=None`` detects stride 2 when every odd term vanishes.  Search
    order: increasing order, then degree; sparsest kernel vector wins.
    """
    stride, b = stride_terms(seq, stride)
    need = (d + 1) * (m + 1) + guard
    if len(b) < need:
        raise ContractError(f"need at least {need} terms after stride {stride}, got {len(b)}")
    for dd in range(1, d + 1):
        for mm in range(m + 1):
            cols, rows = _rec_system(b, dd, mm)
            basis = nullspace(rows, len(cols))
            cands = [_make_rec(dict(zip(cols, v)), dd, mm, stride, len(b)) for v in basis]
            cands = [c for c in cands if c is not None]
            if cands:
                return min(cands, key=lambda r: (r.term_count(), tuple(sorted(r.coeffs.items()))))
    return None


def verify_recurrence(rec: Recurrence, seq: Sequence) -> int:
    """Number of consecutive n (from 0) on which the recurrence holds for the strided terms."""
    b = [Fraction(a) for a in seq[:: rec.stride]]
    count = 0
    for n in range(len(b) - rec.order):
        if rec.residual(b, n):
            break
        count += 1
    return count


# differential operators


@dataclass(frozen=True)
class ODE:
    """sum_k coeffs[k](z) * f^{(k)}(z) = 0; polynomials low to high."""

    coeffs: tuple
    verified_order: int = 0

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        parts = []
        for k in reversed(range(len(self.coeffs))):
            c = self.coeffs[k]
            if not any(c):
                continue
            poly = format_poly(c, "z", descending=True).replace(" ", "")
            deriv = "f" if k == 0 else ("f'" if k == 1 else f"f^({k})")
            nz = sum(1 for x in c if x)
            piece = f"({poly})*{deriv}" if nz > 1 else (
                deriv if poly == "1" else f"-{deriv}" if poly == "-1" else f"{poly}*{deriv}")
            if parts and not piece.startswith("-"):
                piece = "+" + piece
            parts.append(piece)
        return "".join(parts) + " = 0"


def _op_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, p in b.items():
        out[k] = poly_add(out.get(k, []), p)
    return out


def _op_mul_poly(op: dict, p) -> dict:
    return {k: poly_mul(list(p), list(c)) for k, c in op.items()}


def _op_theta(op: dict) -> dict:
    """z d/dz composed on the left of sum c_k(z) D^k."""
    out: dict = {}
    for k, c in op.items():
        dc = [i * c[i] for i in range(1, len(c))]
        out = _op_add(out, {k: [Fraction(0)] + dc})
        out = _op_add(out, {k + 1: [Fraction(0)] + list(c)})
    return out


def _op_d(op: dict) -> dict:
    """d/dz composed on the left."""
    out: dict = {}
    for k, c in op.items():
        dc = [i * c[i] for i in range(1, len(c))]
        out = _op_add(out, {k: dc})
        out = _op_add(out, {k + 1: list(c)})
    return out


def _poly_in_theta(p, shift: Fraction, scale: Fraction) -> dict:
    """p(theta * scale + shift) as an operator in z and D."""
    out: dict = {}
    # Horner in theta
    for c in reversed(p):
        out = _op_mul_theta_affine(out, scale, shift)
        out = _op_add(out, {0: [Fraction(c)]})
    return out


def _op_mul_theta_affine(op: dict, scale, shift) -> dict:
    if not op:
        return {}
    return _op_add({k: [scale * x for x in c] for k, c in _op_theta(op).items()},
                   {k: [shift * x for x in c] for k, c in op.items()})


def ode_from_recurrence(rec: Recurrence, series: ZSeries | None = None,
                        initial: Sequence | None = None) -> ODE:
    """Differential operator annihilating f(z) = sum_k b_k z^{stride k}.

    With theta = z d/dz acting as stride*k on z^{stride k}, the recurrence
    gives L f = S(z), L = sum_j z^{s(d-j)} p_j(theta/s - j), where the
    polynomial S collects the initial terms the shifted sums miss.  S is then
    killed by enough derivatives.  Common powers of z and integer content are
    divided out.  ``initial`` are b_0..b_{d-1} (taken from ``series`` when
    omitted); ``series`` also sets ``verified_order``.
    """
    s = rec.stride
    d = rec.order
    if initial is None:
        if series is None:
            raise ContractError("need initial terms or a series")
        initial = [series.coeffs[s * k] for k in range(d)]
    op: dict = {}
    rhs: list = []
    for j, p in enumerate(rec.polys):
        shift = Fraction(-j)
        part = _poly_in_theta(list(p), shift, Fraction(1, s))
        mono = [Fraction(0)] * (s * (d - j)) + [Fraction(1)]
        op = _op_add(op, _op_mul_poly(part, mono))
        for k in range(j):
            val = _peval(p, k - j) * Fraction(initial[k])
            if val:
                deg = s * (d - j) + s * k
                term = [Fraction(0)] * deg + [val]
                rhs = poly_add(rhs, term)
    rhs = list(poly_trim(rhs))
    if rhs:
        for _ in range(len(rhs)):
            op = _op_d(op)
    coeffs = _clean_operator(op)
    ode = ODE(coeffs)
    if series is not None:
        ode = ODE(coeffs, verify_ode(ode, series))
    return ode


def _clean_operator(op: dict) -> tuple:
    top = max((k for k, c in op.items() if any(c)), default=0)
    polys = [list(poly_trim(op.get(k, []))) for k in range(top + 1)]
    low = min((next(i for i, x in enumerate(p) if x) for p in polys if p), default=0)
    polys = [p[low:] for p in polys]
    width = max(len(p) for p in polys)
    flat = [x for p in polys for x in p + [0] * (width - len(p))]
    lead_idx = [top * width + i for i in range(width - 1, -1, -1)]
    ints = _normalize_int(flat, order_key=lead_idx)
    out = []
    for k in range(top + 1):
        out.append(tuple(poly_trim(ints[k * width:(k + 1) * width])) or (0,))
    return tuple(out)


def apply_ode(ode: ODE, series: ZSeries) -> list:
    """Residual coefficients that are fully determined by the truncation."""
    T = series.order
    f = list(series.coeffs)
    valid = T
    acc: list = []
    for k, c in enumerate(ode.coeffs):
        if not any(c):
            continue
        deriv = f
        for _ in range(k):
            deriv = [i * deriv[i] for i in range(1, len(deriv))]
        low = next(i for i, x in enumerate(c) if x)
        valid = min(valid, T - k + low)
        acc = poly_add(acc, poly_mul(list(c), deriv))
    return (acc + [Fraction(0)] * max(0, valid - len(acc)))[:max(valid, 0)]


def verify_ode(ode: ODE, series: ZSeries) -> int:
    """The series order if every determined residual coefficient vanishes, else the first bad index."""
    res = apply_ode(ode, series)
    for i, x in enumerate(res):
        if x:
            return i
    return series.order


# denominators


@dataclass(frozen=True)
class DenomCertificate:
    denominators: tuple  # D_n = lcm of denominators of a_0..a_n
    base: float
    log_slope_trend: float
    passed: bool


def denominator_growth(seq: Sequence, trend_threshold: float = 0.5) -> DenomCertificate:
    """Common-denominator growth D_n <= C^n check.

    The base is exp of the least-squares slope of log D_n against n over the
    tail half.  The test fails when log D_n / n keeps growing like a multiple
    of log n (factorial-type denominators).
    """
    if len(seq) < 8:
        raise ContractError("need at least 8 terms")
    dens = []
    d = 1
    for a in seq:
        d = math.lcm(d, Fraction(a).denominator)
        dens.append(d)
    n0 = len(dens) // 2
    ns = list(range(max(n0, 1), len(dens)))
    logs = [math.log(dens[n]) for n in ns]
    slope = _lsq_slope(ns, logs)
    ratio = [math.log(dens[n]) / n for n in ns]
    trend = _lsq_slope([math.log(n) for n in ns], ratio)
    return DenomCertificate(tuple(dens), math.exp(max(slope, 0.0)), trend, trend <= trend_threshold)


def _lsq_slope(xs, ys) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
