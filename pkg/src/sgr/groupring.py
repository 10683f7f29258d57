"""Exact arithmetic in Q[F_r] and Q[Z^r] and in square matrices over them."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sgr import words
from sgr.errors import DomainError

FREE = "free"
ABELIAN = "abelian"
FLAVORS = (FREE, ABELIAN)


class RingElem:
    """Finite rational combination of group elements.

    ``terms`` maps canonical words (reduced tuples for the free flavor,
    exponent vectors for the abelian one) to nonzero Fractions.
    """

    __slots__ = ("flavor", "rank", "terms")

    def __init__(self, flavor: str, rank: int, terms: Mapping | None = None):
        if flavor not in FLAVORS:
            raise DomainError(f"unknown flavor {flavor!r}")
        if rank < 0:
            raise DomainError("rank must be nonnegative")
        self.flavor = flavor
        self.rank = rank
        clean = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[self._canon(w)] = clean.get(self._canon(w), 0) + c
        self.terms = {w: c for w, c in clean.items() if c}

    # construction helpers

    def _canon(self, w):
        w = tuple(w)
        if self.flavor == FREE:
            return words.reduce(w, self.rank)
        if len(w) != self.rank:
            raise DomainError(f"exponent vector {w} has wrong length for rank {self.rank}")
        return w

    @classmethod
    def _raw(cls, flavor, rank, terms):
        # trusted constructor: terms already canonical with nonzero coefficients
        obj = cls.__new__(cls)
        obj.flavor = flavor
        obj.rank = rank
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, flavor: str, rank: int) -> RingElem:
        return cls(flavor, rank)

    @classmethod
    def one(cls, flavor: str, rank: int, coeff=1) -> RingElem:
        return cls(flavor, rank, {identity_word(flavor, rank): coeff})

    @classmethod
    def gen(cls, flavor: str, rank: int, k: int, power: int = 1) -> RingElem:
        """u_k**power (``k`` in 1..rank)."""
        if not 1 <= k <= rank:
            raise DomainError(f"generator {k} outside 1..{rank}")
        if flavor == FREE:
            w = (k if power > 0 else -k,) * abs(power)
        else:
            w = tuple(power if i == k - 1 else 0 for i in range(rank))
        return cls(flavor, rank, {w: 1})

    # queries

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, RingElem):
            return NotImplemented
        return (self.flavor, self.rank, self.terms) == (other.flavor, other.rank, other.terms)

    def __hash__(self):
        return hash((self.flavor, self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        from sgr.problem import format_elem

        return f"RingElem({self.flavor}, {self.rank}, {format_elem(self)!r})"

    def sorted_terms(self):
        key = words.word_key if self.flavor == FREE else words.abel_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def max_word_length(self) -> int:
        if not self.terms:
            return 0
        if self.flavor == FREE:
            return max(len(w) for w in self.terms)
        return max(sum(abs(x) for x in w) for w in self.terms)

    def _check(self, other: RingElem):
        if (self.flavor, self.rank) != (other.flavor, other.rank):
            raise DomainError(
                f"mixing {self.flavor}/{self.rank} with {other.flavor}/{other.rank}"
            )

    # arithmetic

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return RingElem._raw(self.flavor, self.rank, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return add(_coerce(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, RingElem):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = RingElem.one(self.flavor, self.rank)
        for _ in range(n):
            result = mul(result, self)
        return result

    def scale(self, c) -> RingElem:
        c = Fraction(c)
        if not c:
            return RingElem.zero(self.flavor, self.rank)
        return RingElem._raw(self.flavor, self.rank, {w: c * v for w, v in self.terms.items()})


def _coerce(x, like: RingElem) -> RingElem:
    if isinstance(x, RingElem):
        return x
    return RingElem.one(like.flavor, like.rank, x)


def identity_word(flavor: str, rank: int):
    return words.IDENTITY if flavor == FREE else words.abel_identity(rank)


def add(a: RingElem, b: RingElem) -> RingElem:
    a._check(b)
    terms = dict(a.terms)
    for w, c in b.terms.items():
        s = terms.get(w, 0) + c
        if s:
            terms[w] = s
        else:
            terms.pop(w, None)
    return RingElem._raw(a.flavor, a.rank, terms)


def mul(a: RingElem, b: RingElem) -> RingElem:
    a._check(b)
    op = words.concat if a.flavor == FREE else words.abel_add
    terms: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            w = op(u, v)
            terms[w] = terms.get(w, 0) + cu * cv
    return RingElem._raw(a.flavor, a.rank, {w: c for w, c in terms.items() if c})


def trace(a: RingElem) -> Fraction:
    return Fraction(a.terms.get(identity_word(a.flavor, a.rank), 0))


def star(a: RingElem) -> RingElem:
    inv = words.invert if a.flavor == FREE else words.abel_neg
    return RingElem._raw(a.flavor, a.rank, {inv(w): c for w, c in a.terms.items()})


def abelianize(a: RingElem) -> RingElem:
    if a.flavor != FREE:
        raise DomainError("element is already abelian")
    return RingElem(
        ABELIAN, a.rank, _merge((words.abelianize(w, a.rank), c) for w, c in a.terms.items())
    )


def _merge(pairs: Iterable) -> dict:
    out: dict = {}
    for w, c in pairs:
        out[w] = out.get(w, 0) + c
    return out


class RingMatrix:
    """Square matrix over Q[G]; entries share flavor and rank."""

    __slots__ = ("flavor", "rank", "n", "entries")

    def __init__(self, entries: Sequence[Sequence[RingElem]], flavor: str | None = None,
                 rank: int | None = None):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise DomainError("matrix must be square with N >= 1")
        flavor = flavor or rows[0][0].flavor
        rank = rows[0][0].rank if rank is None else rank
        for r in rows:
            for e in r:
                if (e.flavor, e.rank) != (flavor, rank):
                    raise DomainError("matrix entries must share flavor and rank")
        self.flavor = flavor
        self.rank = rank
        self.n = n
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def scalar(cls, elem: RingElem) -> RingMatrix:
        return cls([[elem]])

    @classmethod
    def identity(cls, flavor: str, rank: int, n: int) -> RingMatrix:
        one = RingElem.one(flavor, rank)
        zero = RingElem.zero(flavor, rank)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], flavor, rank)

    @classmethod
    def zeros(cls, flavor: str, rank: int, n: int) -> RingMatrix:
        zero = RingElem.zero(flavor, rank)
        return cls([[zero] * n for _ in range(n)], flavor, rank)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (self.flavor, self.rank, self.entries) == (other.flavor, other.rank, other.entries)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RingMatrix({[list(r) for r in self.entries]!r})"

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __add__(self, other):
        _check_same(self, other)
        return RingMatrix(
            [[add(self[i, j], other[i, j]) for j in range(self.n)] for i in range(self.n)],
            self.flavor, self.rank,
        )

    def max_word_length(self) -> int:
        return max(e.max_word_length() for r in self.entries for e in r)

    def term_count(self) -> int:
        return sum(len(e.terms) for r in self.entries for e in r)

    def map(self, f) -> RingMatrix:
        return RingMatrix([[f(e) for e in r] for r in self.entries])


def _check_same(a: RingMatrix, b: RingMatrix):
    if (a.flavor, a.rank, a.n) != (b.flavor, b.rank, b.n):
        raise DomainError(
            f"matrix mismatch: {a.flavor}/{a.rank}/N={a.n} vs {b.flavor}/{b.rank}/N={b.n}"
        )


def trace_matrix(p: RingMatrix) -> Fraction:
    return sum((trace(p[j, j]) for j in range(p.n)), Fraction(0))


def mat_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    _check_same(a, b)
    n = a.n
    zero = RingElem.zero(a.flavor, a.rank)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                if a[i, k] and b[k, j]:
                    acc = add(acc, mul(a[i, k], b[k, j]))
            row.append(acc)
        rows.append(row)
    return RingMatrix(rows, a.flavor, a.rank)


def mat_pow(a: RingMatrix, n: int) -> RingMatrix:
    if n < 0:
        raise DomainError("negative matrix power")
    result = RingMatrix.identity(a.flavor, a.rank, a.n)
    for _ in range(n):
        result = mat_mul(result, a)
    return result


def star_matrix(p: RingMatrix) -> RingMatrix:
    return RingMatrix([[star(p[j, i]) for j in range(p.n)] for i in range(p.n)], p.flavor, p.rank)


def abelianize_matrix(p: RingMatrix) -> RingMatrix:
    if p.flavor != FREE:
        raise DomainError("matrix is already abelian")
    return RingMatrix([[abelianize(e) for e in r] for r in p.entries], ABELIAN, p.rank)


def is_self_adjoint(p: RingMatrix) -> bool:
    return star_matrix(p) == p


def coefficient_norm_bound(p: RingMatrix) -> Fraction:
    """Sum of the coefficient 1-norms of all entries, an upper bound for the operator norm."""
    return sum((abs(c) for r in p.entries for e in r for c in e.terms.values()), Fraction(0))
