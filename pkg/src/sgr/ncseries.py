"""Truncated series in the noncommuting letters x_1, xbar_1, ..., x_r, xbar_r.

Words over X are tuples of nonzero ints (``k`` is x_k, ``-k`` is xbar_k) with no
cancellation; coefficients are z-polynomials stored as trimmed tuples of
Fractions (index = z-degree).  A series keeps only words of length <= L and
z-degrees <= T.

The trace of a matrix P over Q[F_r] is recovered from

    A_P(z) = (phi_z o psi)(P_z^* (*) Delta_N),    P_z = z * iota(P),

where Delta is the characteristic series of words that freely reduce to e.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from sgr import words
from sgr.errors import ContractError, DomainError, ResourceError
from sgr.groupring import FREE, RingElem, RingMatrix
from sgr.zseries import ZSeries, poly_add, poly_mul, poly_trim

DEFAULT_TERM_CAP = 10**8

ONE = (Fraction(1),)


def term_cap() -> int:
    env = os.environ.get("SGR_TERM_CAP")
    return int(env) if env else DEFAULT_TERM_CAP


@dataclass
class NCSeries:
    rank: int
    word_bound: int
    z_bound: int
    terms: dict

    def __post_init__(self):
        clean = {}
        for w, p in self.terms.items():
            w = tuple(w)
            if len(w) > self.word_bound:
                continue
            p = poly_trim(tuple(Fraction(c) for c in p)[: self.z_bound + 1])
            if p:
                clean[w] = p
        self.terms = clean

    @classmethod
    def _raw(cls, rank, word_bound, z_bound, terms):
        obj = cls.__new__(cls)
        obj.rank, obj.word_bound, obj.z_bound, obj.terms = rank, word_bound, z_bound, terms
        return obj

    @classmethod
    def zero(cls, rank, word_bound, z_bound) -> NCSeries:
        return cls._raw(rank, word_bound, z_bound, {})

    @classmethod
    def one(cls, rank, word_bound, z_bound) -> NCSeries:
        return cls._raw(rank, word_bound, z_bound, {(): ONE})

    @property
    def bounds(self):
        return (self.rank, self.word_bound, self.z_bound)

    def coefficient(self, w) -> tuple:
        return self.terms.get(tuple(w), ())

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self.bounds == other.bounds and self.terms == other.terms

    def __add__(self, other: NCSeries) -> NCSeries:
        _same_bounds(self, other)
        terms = dict(self.terms)
        for w, p in other.terms.items():
            s = poly_trim(poly_add(terms.get(w, ()), p))
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
        return NCSeries._raw(*self.bounds, terms)

    def __neg__(self):
        return NCSeries._raw(*self.bounds, {w: tuple(-c for c in p) for w, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: NCSeries) -> NCSeries:
        return nc_mul(self, other)

    def shift_z(self, k: int = 1) -> NCSeries:
        """Multiply by z**k."""
        terms = {}
        for w, p in self.terms.items():
            q = poly_trim(((Fraction(0),) * k + p)[: self.z_bound + 1])
            if q:
                terms[w] = q
        return NCSeries._raw(*self.bounds, terms)

    def with_bounds(self, word_bound: int, z_bound: int) -> NCSeries:
        return NCSeries(self.rank, word_bound, z_bound, self.terms)


def _same_bounds(f: NCSeries, g: NCSeries):
    if f.bounds != g.bounds:
        raise ContractError(f"series bounds differ: {f.bounds} vs {g.bounds}")


def check_letters(w, rank: int):
    for a in w:
        if a == 0 or abs(a) > rank:
            raise DomainError(f"letter {a} invalid for rank {rank}")


def iota(a: RingElem, word_bound: int | None = None, z_bound: int = 0) -> NCSeries:
    """Encode reduced words letter for letter; coefficients are z-constants."""
    if a.flavor != FREE:
        raise DomainError("iota is defined on the free group ring only")
    L = a.max_word_length() if word_bound is None else word_bound
    return NCSeries(a.rank, L, z_bound, {w: (c,) for w, c in a.terms.items()})


def pi(w, rank: int | None = None) -> words.FreeWord:
    if rank is not None:
        check_letters(w, rank)
    return words.reduce(w)


def nc_mul(f: NCSeries, g: NCSeries) -> NCSeries:
    _same_bounds(f, g)
    L, T = f.word_bound, f.z_bound
    terms: dict = {}
    for u, p in f.terms.items():
        room = L - len(u)
        for v, q in g.terms.items():
            if len(v) > room:
                continue
            r = poly_mul(p, q, T + 1)
            w = u + v
            if w in terms:
                terms[w] = poly_add(terms[w], r)
            else:
                terms[w] = r
    return NCSeries._raw(f.rank, L, T, _trimmed(terms))


def _trimmed(terms: dict) -> dict:
    out = {}
    for w, p in terms.items():
        p = poly_trim(p)
        if p:
            out[w] = p
    return out


def hadamard(f: NCSeries, g: NCSeries) -> NCSeries:
    """Wordwise product of coefficients; bounds are the componentwise minima."""
    if f.rank != g.rank:
        raise DomainError(f"rank mismatch {f.rank} vs {g.rank}")
    L = min(f.word_bound, g.word_bound)
    T = min(f.z_bound, g.z_bound)
    small, big = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    terms = {}
    for w, p in small.terms.items():
        if len(w) > L:
            continue
        q = big.terms.get(w)
        if q:
            r = poly_trim(poly_mul(p, q, T + 1))
            if r:
                terms[w] = r
    return NCSeries._raw(f.rank, L, T, terms)


def all_words(rank: int, length: int) -> Iterator[tuple]:
    letters = [k for i in range(1, rank + 1) for k in (i, -i)]
    if length == 0:
        yield ()
        return
    for w in all_words(rank, length - 1):
        for a in letters:
            yield w + (a,)


def ones(rank: int, word_bound: int, z_bound: int = 0) -> NCSeries:
    """Characteristic series of X^* (the unit of the Hadamard product)."""
    terms = {w: ONE for n in range(word_bound + 1) for w in all_words(rank, n)}
    return NCSeries._raw(rank, word_bound, z_bound, terms)


def kernel_words(rank: int, word_bound: int) -> Iterator[tuple]:
    """Words of length <= word_bound whose free reduction is e.

    Depth-first enumeration that carries the reduced prefix and abandons a
    prefix once its reduction is longer than the letters still available.
    """
    letters = [k for i in range(1, rank + 1) for k in (i, -i)]
    word: list[int] = []
    stack: list[int] = []

    def rec():
        if not stack:
            yield tuple(word)
        if len(word) == word_bound:
            return
        for a in letters:
            cancelled = bool(stack) and stack[-1] == -a
            if not cancelled and len(stack) + 1 > word_bound - len(word) - 1:
                continue
            word.append(a)
            if cancelled:
                stack.pop()
            else:
                stack.append(a)
            yield from rec()
            if cancelled:
                stack.append(-a)
            else:
                stack.pop()
            word.pop()

    yield from rec()


def delta(rank: int, word_bound: int, z_bound: int = 0) -> NCSeries:
    if word_bound < 0:
        raise ContractError("word bound must be >= 0")
    return NCSeries._raw(rank, word_bound, z_bound, {w: ONE for w in kernel_words(rank, word_bound)})


def hadamard_kernel(f: NCSeries) -> NCSeries:
    """``hadamard(f, delta(...))`` without materializing Delta."""
    terms = {w: p for w, p in f.terms.items() if not words.reduce(w)}
    return NCSeries._raw(f.rank, f.word_bound, f.z_bound, terms)


# matrices of series

NCMatrixSeries = list  # N x N nested lists of NCSeries with uniform bounds


def nc_matrix_check(m: NCMatrixSeries):
    n = len(m)
    if n == 0 or any(len(r) != n for r in m):
        raise ContractError("matrix series must be square")
    b = m[0][0].bounds
    if any(e.bounds != b for r in m for e in r):
        raise ContractError("matrix series entries must share bounds")
    return n, b


def nc_identity(n: int, rank: int, word_bound: int, z_bound: int) -> NCMatrixSeries:
    return [[NCSeries.one(rank, word_bound, z_bound) if i == j else NCSeries.zero(rank, word_bound, z_bound)
             for j in range(n)] for i in range(n)]


def nc_matmul(a: NCMatrixSeries, b: NCMatrixSeries) -> NCMatrixSeries:
    n, bounds = nc_matrix_check(a)
    nc_matrix_check(b)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = NCSeries.zero(*bounds)
            for k in range(n):
                if a[i][k].terms and b[k][j].terms:
                    acc = acc + nc_mul(a[i][k], b[k][j])
            row.append(acc)
        out.append(row)
    return out


def nc_matadd(a: NCMatrixSeries, b: NCMatrixSeries, sign: int = 1) -> NCMatrixSeries:
    return [[x + y if sign > 0 else x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def p_z(p: RingMatrix, word_bound: int, z_bound: int) -> NCMatrixSeries:
    """z * iota(P) as a matrix series."""
    if p.flavor != FREE:
        raise DomainError("P_z is defined for the free flavor only")
    return [[iota(p[i, j], word_bound, z_bound).shift_z(1) for j in range(p.n)] for i in range(p.n)]


def star_series(pz: NCMatrixSeries) -> NCMatrixSeries:
    """sum_{n>=0} Pz^n, truncated to the bounds of Pz."""
    n, (rank, L, T) = nc_matrix_check(pz)
    for row in pz:
        for e in row:
            if any(p[0] for p in e.terms.values()):
                raise ContractError("Pz must have zero z-constant term")
    result = nc_identity(n, rank, L, T)
    power = nc_identity(n, rank, L, T)
    for _ in range(T):
        power = nc_matmul(power, pz)
        if all(not e.terms for r in power for e in r):
            break
        result = nc_matadd(result, power)
    return result


# commutative images


def _comm_index(a: int) -> int:
    return 2 * (abs(a) - 1) + (0 if a > 0 else 1)


def psi(f: NCSeries) -> dict:
    """Let the letters commute: multidegree over the 2r letters -> z-polynomial."""
    out: dict = {}
    for w, p in f.terms.items():
        deg = [0] * (2 * f.rank)
        for a in w:
            deg[_comm_index(a)] += 1
        key = tuple(deg)
        out[key] = poly_add(out.get(key, ()), p)
    return {k: poly_trim(v) for k, v in out.items() if poly_trim(v)}


def phi_z(g: dict, z_bound: int) -> ZSeries:
    """Send every commutative monomial to 1 and sum the z-polynomials."""
    acc: list = [Fraction(0)] * (z_bound + 1)
    for p in g.values():
        for k, c in enumerate(p[: z_bound + 1]):
            acc[k] += c
    return ZSeries(acc)


def phi(f: NCSeries) -> Fraction:
    """Q-linear map sending every word to 1 (z-constant part)."""
    return sum((p[0] for p in f.terms.values() if p), Fraction(0))


def key_trace(f: RingElem) -> Fraction:
    """phi(iota(f) (*) Delta), which equals the trace of f."""
    L = f.max_word_length()
    return phi(hadamard(iota(f, L), delta(f.rank, L)))


def estimate_terms(p: RingMatrix, order: int) -> int:
    """Upper bound on the number of stored words at the top power.

    Two valid bounds are combined: all words over X up to the word bound, and
    the number of monomials in the expansion of the P-power.
    """
    L = order * p.max_word_length()
    alphabet = (2 * p.rank) ** L if p.rank else 1
    row = max(sum(len(p[i, k].terms) for k in range(p.n)) for i in range(p.n))
    expansion = p.n * row**order
    return min(p.n * p.n * alphabet, expansion)


def pipeline_series(p: RingMatrix, order: int, cap: int | None = None,
                    method: str = "sparse") -> list:
    """N x N array of ZSeries, entry (i, j) = sum_{n<=order} a^{ij}_{P,n} z^n.

    ``method="sparse"`` multiplies one power of P_z at a time, applies the
    Delta filter per power and drops words whose reduction can no longer
    return to e within the remaining z-budget.  ``method="full"`` forms
    P_z^*, Delta_N and the Hadamard product as whole truncated objects.
    """
    if order < 0:
        raise ContractError("order must be >= 0")
    if p.flavor != FREE:
        raise DomainError("the pipeline needs a matrix over the free group ring")
    cap = term_cap() if cap is None else cap
    est = estimate_terms(p, order)
    if est > cap:
        raise ResourceError(f"pipeline would store up to {est} words (cap {cap}); "
                            "use the direct moment engine or raise SGR_TERM_CAP")
    ell = max(p.max_word_length(), 1)
    L = order * p.max_word_length()
    n = p.n
    if method == "full":
        star = star_series(p_z(p, L, order))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                filtered = hadamard(star[i][j], delta(p.rank, L, order))
                row.append(phi_z(psi(filtered), order))
            out.append(row)
        return out
    if method != "sparse":
        raise ValueError(f"unknown method {method!r}")

    acc = [[[Fraction(0)] * (order + 1) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        acc[i][i][0] = Fraction(1)
    pz = p_z(p, L, order)
    power = nc_identity(n, p.rank, L, order)
    for k in range(1, order + 1):
        power = nc_matmul(power, pz)
        budget = (order - k) * ell
        for i in range(n):
            for j in range(n):
                e = power[i][j]
                hit = phi_z(psi(hadamard_kernel(e)), order)
                for d in range(order + 1):
                    acc[i][j][d] += hit[d]
                e.terms = {w: c for w, c in e.terms.items() if len(words.reduce(w)) <= budget}
    return [[ZSeries(acc[i][j]) for j in range(n)] for i in range(n)]
