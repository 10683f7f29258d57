"""Moment sequences a_{P,n} = Tr(P^n) and their generating series.

Three exact engines:

* :func:`moment_sequence` multiplies out every power of P and keeps it.
* :func:`moment_sequence_abelian_fast` works on integer Laurent polynomials
  and discards exponents that cannot return to 0 in the remaining steps.
* :func:`moment_sequence_free_fast` never forms P^n.  It expands P into a
  letter automaton and sums closed walks on the Cayley tree by their
  first-return decomposition, order by order in z.  Cost is polynomial in n,
  which is what makes orders in the hundreds reachable for F_r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sgr import groupring as gr
from sgr import words
from sgr.errors import DomainError, ResourceError
from sgr.groupring import ABELIAN, FREE, RingMatrix
from sgr.zseries import ZSeries

DEFAULT_NMAX = {FREE: 24, ABELIAN: 40}
DEFAULT_SUPPORT_CAP = 3_000_000


@dataclass(frozen=True)
class MomentData:
    n_max: int
    seq: tuple
    matrix_seq: tuple | None = None  # matrix_seq[i][j][n] = a^{ij}_{P,n}
    provenance: str = "direct"

    @classmethod
    def from_sequence(cls, seq, provenance: str = "direct") -> MomentData:
        seq = tuple(Fraction(a) for a in seq)
        return cls(len(seq) - 1, seq, None, provenance)

    @classmethod
    def from_matrix_seq(cls, matrix_seq, provenance: str) -> MomentData:
        n = len(matrix_seq)
        ms = tuple(tuple(tuple(Fraction(a) for a in matrix_seq[i][j]) for j in range(n))
                   for i in range(n))
        length = len(ms[0][0])
        seq = tuple(sum((ms[i][i][k] for i in range(n)), Fraction(0)) for k in range(length))
        return cls(length - 1, seq, ms, provenance)

    @property
    def dim(self) -> int | None:
        return None if self.matrix_seq is None else len(self.matrix_seq)


def moment_sequence(p: RingMatrix, n_max: int, cap: int = DEFAULT_SUPPORT_CAP) -> MomentData:
    """Direct engine: P^n = P^{n-1} P, traces of every entry."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    n = p.n
    power = RingMatrix.identity(p.flavor, p.rank, n)
    ms = [[[] for _ in range(n)] for _ in range(n)]
    for k in range(n_max + 1):
        if k:
            power = gr.mat_mul(power, p)
            size = power.term_count()
            if size > cap:
                raise ResourceError(f"support of P^{k} has {size} terms (cap {cap}) at n={k}")
        for i in range(n):
            for j in range(n):
                ms[i][j].append(gr.trace(power[i, j]))
    return MomentData.from_matrix_seq(ms, "direct")


def _integer_scaling(p: RingMatrix):
    den = 1
    for row in p.entries:
        for e in row:
            for c in e.terms.values():
                den = math.lcm(den, c.denominator)
    return den


def moment_sequence_abelian_fast(p: RingMatrix, n_max: int,
                                 cap: int = DEFAULT_SUPPORT_CAP) -> MomentData:
    """Laurent-polynomial engine for Z^r with integer arithmetic and pruning.

    With P = Q/D for an integer matrix Q, a^{ij}_n = Tr((Q^n)_{ij}) / D^n.  An
    exponent of Q^k is kept only if it can still return to 0 within
    ``n_max - k`` further factors.
    """
    if p.flavor != ABELIAN:
        raise DomainError("abelian engine needs an abelian matrix")
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    n, r = p.n, p.rank
    den = _integer_scaling(p)
    q = [[{w: int(c * den) for w, c in p[i, j].terms.items()} for j in range(n)] for i in range(n)]
    reach = [0] * r
    for row in q:
        for e in row:
            for w in e:
                for t in range(r):
                    reach[t] = max(reach[t], abs(w[t]))
    zero = (0,) * r
    power = [[({zero: 1} if i == j else {}) for j in range(n)] for i in range(n)]
    ms = [[[] for _ in range(n)] for _ in range(n)]
    for k in range(n_max + 1):
        if k:
            left = n_max - k
            bound = [left * s for s in reach]
            new = []
            size = 0
            for i in range(n):
                row = []
                for j in range(n):
                    acc: dict = {}
                    for m in range(n):
                        a, b = power[i][m], q[m][j]
                        if not a or not b:
                            continue
                        for u, cu in a.items():
                            for v, cv in b.items():
                                w = tuple(x + y for x, y in zip(u, v))
                                if any(abs(w[t]) > bound[t] for t in range(r)):
                                    continue
                                acc[w] = acc.get(w, 0) + cu * cv
                    acc = {w: c for w, c in acc.items() if c}
                    size += len(acc)
                    row.append(acc)
                new.append(row)
            if size > cap:
                raise ResourceError(f"pruned support of P^{k} has {size} terms (cap {cap}) at n={k}")
            power = new
        scale = Fraction(1, den**k)
        for i in range(n):
            for j in range(n):
                ms[i][j].append(power[i][j].get(zero, 0) * scale)
    return MomentData.from_matrix_seq(ms, "direct")


# first-return engine


def _as_int(c: Fraction):
    return c.numerator if c.denominator == 1 else c


class _LetterAutomaton:
    """P expanded into single-letter transitions.

    States 0..N-1 are the rows/columns of P; every proper nonempty prefix of a
    word in row i gets its own state from a per-row trie.  Prefix edges carry
    weight 1 and no z; the last letter of a word carries coefficient * z.
    Identity terms become z-weighted e-edges between original states.
    """

    def __init__(self, p: RingMatrix, scale: int = 1):
        # coefficients are multiplied by ``scale``; integral when scale clears denominators
        n = p.n
        trie: dict = {}
        edges = []  # (letter, src, dst, zdeg, coeff)
        count = n
        for i in range(n):
            for j in range(n):
                for u, c in p[i, j].sorted_terms():
                    if not u:
                        edges.append((0, i, j, 1, _as_int(c * scale)))
                        continue
                    node = i
                    for a in u[:-1]:
                        key = (node, a)
                        if key not in trie:
                            trie[key] = count
                            edges.append((a, node, count, 0, 1))
                            count += 1
                        node = trie[key]
                    edges.append((u[-1], node, j, 1, _as_int(c * scale)))
        self.n = n
        self.size = count
        self.depth = max(p.max_word_length(), 1)
        letters = sorted({e[0] for e in edges if e[0]}, key=words.letter_key)
        self.letters = letters
        self.A0 = {}
        self.A1 = {}
        self.E1 = self._zeros()
        for a in letters:
            self.A0[a] = self._zeros()
            self.A1[a] = self._zeros()
        for a, s, t, zdeg, c in edges:
            if a == 0:
                self.E1[s, t] += c
            elif zdeg == 0:
                self.A0[a][s, t] += c
            else:
                self.A1[a][s, t] += c

    def _zeros(self):
        m = np.empty((self.size, self.size), dtype=object)
        m.fill(0)
        return m


def moment_sequence_free_fast(p: RingMatrix, n_max: int) -> MomentData:
    """First-return engine for F_r.

    With A_x(z) the letter-x transition matrix of the automaton and
    A_e(z) the identity-term edges, the excursion series F_y (step y, stay in
    the subtree, step y^{-1}) and the return series G satisfy

        F_y = A_y H_y A_{y^{-1}},   H_y = (I - A_e - sum_{x != y^{-1}} F_x)^{-1},
        G   = (I - A_e - sum_x F_x)^{-1},

    and G restricted to the original states is A_P(z).  Coefficients are
    solved order by order; the same-order coupling runs through prefix edges
    only and is nilpotent, so a short inner iteration closes it exactly.
    """
    if p.flavor != FREE:
        raise DomainError("first-return engine needs a free matrix")
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    # run on D*P with integer coefficients; a_n = (trace of G_n) / D^n
    den = _integer_scaling(p)
    aut = _LetterAutomaton(p, den)
    size = aut.size
    ident = aut._zeros()
    for s in range(size):
        ident[s, s] = 1
    zero = aut._zeros()
    # letters whose excursion can be nonzero
    active = [y for y in aut.letters if -y in aut.A0]
    F = {y: [zero] for y in active}
    H = {y: [ident] for y in active}
    G = [ident]
    S = [zero]  # S_k = E_k + sum_y F_y[k]

    def excursion(y, hn, hm1, hm2):
        a0, a1 = aut.A0[y], aut.A1[y]
        b0, b1 = aut.A0[-y], aut.A1[-y]
        out = a0.dot(hn).dot(b0)
        if hm1 is not None:
            out = out + a0.dot(hm1).dot(b1) + a1.dot(hm1).dot(b0)
        if hm2 is not None:
            out = out + a1.dot(hm2).dot(b1)
        return out

    for n in range(1, n_max + 1):
        e_n = aut.E1 if n == 1 else zero
        known = {}
        for y in active:
            acc = zero
            for k in range(1, n):
                mk = S[k] - F[-y][k] if -y in F else S[k]
                acc = acc + mk.dot(H[y][n - k])
            known[y] = acc
        fn = {y: zero for y in active}
        for _ in range(aut.depth + 2):
            s_n = e_n + sum((fn[y] for y in active), zero)
            hn = {y: known[y] + (s_n - fn[-y] if -y in fn else s_n) for y in active}
            new = {
                y: excursion(y, hn[y], H[y][n - 1], H[y][n - 2] if n >= 2 else None)
                for y in active
            }
            if all(np.array_equal(new[y], fn[y]) for y in active):
                break
            fn = new
        else:
            raise RuntimeError("excursion recursion did not close")  # pragma: no cover
        s_n = e_n + sum((fn[y] for y in active), zero)
        for y in active:
            F[y].append(fn[y])
            H[y].append(hn[y])
        S.append(s_n)
        g = zero
        for k in range(1, n + 1):
            g = g + S[k].dot(G[n - k])
        G.append(g)
    n = aut.n
    ms = [[[Fraction(G[k][i, j], den**k) for k in range(n_max + 1)] for j in range(n)]
          for i in range(n)]
    return MomentData.from_matrix_seq(ms, "first-return")


def compute_moments(p: RingMatrix, n_max: int, method: str = "auto") -> MomentData:
    """Dispatch: ``auto`` picks the fast engine for the matrix flavor."""
    if method == "direct":
        return moment_sequence(p, n_max)
    if method in ("auto", "fast"):
        if p.flavor == FREE:
            return moment_sequence_free_fast(p, n_max)
        return moment_sequence_abelian_fast(p, n_max)
    raise ValueError(f"unknown moment method {method!r}")


def series_truncation(m: MomentData) -> ZSeries:
    return ZSeries(m.seq)


def matrix_series_truncation(m: MomentData) -> list:
    if m.matrix_seq is None:
        raise DomainError("moment data carries no matrix refinement")
    return [[ZSeries(e) for e in row] for row in m.matrix_seq]


def hadamard_univariate(f: ZSeries, g: ZSeries) -> ZSeries:
    n = min(f.order, g.order)
    return ZSeries(a * b for a, b in zip(f.coeffs[:n], g.coeffs[:n]))


def detect_stride(seq) -> int:
    """2 if every odd-index term vanishes (and some even one does not), else 1."""
    if len(seq) > 1 and all(not seq[k] for k in range(1, len(seq), 2)) and any(seq[::2]):
        return 2
    return 1
