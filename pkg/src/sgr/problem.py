"""Line-oriented problem format.

::

    # comment
    group free 2
    dim 2
    entry 1 1 : g1 + g1^-1
    entry 1 2 : 3/2*g1*g2^-1 - 1

Omitted entries are zero; ``1`` denotes the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from sgr import words
from sgr.errors import SgrError
from sgr.groupring import ABELIAN, FLAVORS, FREE, RingElem, RingMatrix


class ParseError(SgrError, ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


@dataclass
class TaskParams:
    n_max: int | None = None
    dy: int = 2
    dz: int = 2
    d: int = 1
    m: int = 1
    stride: int | None = None
    tolerance: float = 1e-6
    term_cap: int | None = None


@dataclass
class ProblemSpec:
    flavor: str
    rank: int
    dim: int
    entries: dict = field(default_factory=dict)  # (i, j) 0-based -> RingElem, nonzero only
    params: TaskParams = field(default_factory=TaskParams, compare=False)

    def matrix(self) -> RingMatrix:
        zero = RingElem.zero(self.flavor, self.rank)
        return RingMatrix(
            [[self.entries.get((i, j), zero) for j in range(self.dim)] for i in range(self.dim)],
            self.flavor, self.rank,
        )

    @classmethod
    def from_matrix(cls, p: RingMatrix) -> ProblemSpec:
        entries = {(i, j): p[i, j] for i in range(p.n) for j in range(p.n) if p[i, j]}
        return cls(p.flavor, p.rank, p.n, entries)


# printing


def format_rational(c: Fraction) -> str:
    return str(Fraction(c))


def _format_free_word(w) -> str:
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k, run = abs(w[i]), (j - i) * (1 if w[i] > 0 else -1)
        parts.append(f"g{k}" if run == 1 else f"g{k}^{run}")
        i = j
    return "*".join(parts)


def _format_abel_word(e) -> str:
    parts = [f"g{k + 1}" if x == 1 else f"g{k + 1}^{x}" for k, x in enumerate(e) if x]
    return "*".join(parts)


def format_word(w, flavor: str) -> str:
    s = _format_free_word(w) if flavor == FREE else _format_abel_word(w)
    return s or "1"


def format_elem(a: RingElem) -> str:
    if not a.terms:
        return "0"
    out = []
    for idx, (w, c) in enumerate(a.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        ws = format_word(w, a.flavor)
        if ws == "1":
            body = format_rational(mag)
        elif mag == 1:
            body = ws
        else:
            body = f"{format_rational(mag)}*{ws}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_problem(spec: ProblemSpec) -> str:
    lines = [f"group {spec.flavor} {spec.rank}", f"dim {spec.dim}"]
    for (i, j) in sorted(spec.entries):
        e = spec.entries[(i, j)]
        if e:
            lines.append(f"entry {i + 1} {j + 1} : {format_elem(e)}")
    return "\n".join(lines) + "\n"


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|g(\d+)|([-+*/^]))")


class _Expr:
    """Recursive-descent parser for one entry expression."""

    def __init__(self, text: str, line: int, col0: int, flavor: str, rank: int):
        self.text = text
        self.line = line
        self.col0 = col0
        self.flavor = flavor
        self.rank = rank
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                self.fail(f"unexpected character {text[pos:].lstrip()[0]!r}",
                          pos + len(text[pos:]) - len(text[pos:].lstrip()))
            start = m.start(m.lastindex) - (1 if m.lastindex == 2 else 0)  # point at the 'g'
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1)), start))
            elif m.group(2) is not None:
                self.tokens.append(("gen", int(m.group(2)), start))
            else:
                self.tokens.append((m.group(3), None, start))
            pos = m.end()
        self.i = 0

    def fail(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(msg, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self, kind=None):
        if self.i >= len(self.tokens):
            self.fail("unexpected end of expression")
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind!r}")
        self.i += 1
        return tok

    def parse(self) -> RingElem:
        total = RingElem.zero(self.flavor, self.rank)
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        total = total + self.term().scale(sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            total = total + self.term().scale(sign)
        if self.peek() is not None:
            self.fail("expected '+' or '-'")
        return total

    def term(self) -> RingElem:
        kind = self.peek()
        if kind == "int":
            # a bare integer is either a rational coefficient or the identity atom '1'
            num = self.take()[1]
            coeff = Fraction(num)
            if self.peek() == "/":
                self.take()
                den = self.take("int")
                if den[1] == 0:
                    self.fail("zero denominator", den[2])
                coeff = Fraction(num, den[1])
            if self.peek() == "*":
                self.take()
                return self.word().scale(coeff)
            return RingElem.one(self.flavor, self.rank, coeff)
        if kind == "gen":
            return self.word()
        self.fail("expected a coefficient or a word")

    def word(self) -> RingElem:
        letters = []
        letters += self.atom()
        while self.peek() == "*":
            self.take()
            letters += self.atom()
        if self.flavor == FREE:
            return RingElem(FREE, self.rank, {words.reduce(letters): 1})
        return RingElem(ABELIAN, self.rank, {words.abelianize(letters, self.rank): 1})

    def atom(self) -> list[int]:
        kind, val, pos = self.take()
        if kind == "int":
            if val != 1:
                self.fail("only '1' may appear as an identity atom", pos)
            return []
        if kind != "gen":
            self.fail("expected an atom g<k> or 1", pos)
        if not 1 <= val <= self.rank:
            self.fail(f"generator g{val} outside rank {self.rank}", pos)
        power = 1
        if self.peek() == "^":
            self.take()
            sgn = 1
            if self.peek() in ("+", "-"):
                sgn = -1 if self.take()[0] == "-" else 1
            power = sgn * self.take("int")[1]
        return [val if power > 0 else -val] * abs(power)


def parse_problem(text: str) -> ProblemSpec:
    flavor = rank = dim = None
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head = line.split(None, 1)[0]
        col = line.index(head) + 1
        if head == "group":
            parts = line.split()
            if len(parts) != 3 or parts[1] not in FLAVORS or not parts[2].isdigit():
                raise ParseError("expected 'group (free|abelian) <r>'", lineno, col)
            if flavor is not None:
                raise ParseError("duplicate 'group' line", lineno, col)
            flavor, rank = parts[1], int(parts[2])
            if rank < 1:
                raise ParseError("rank must be >= 1", lineno, col)
        elif head == "dim":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected 'dim <N>' with N >= 1", lineno, col)
            if dim is not None:
                raise ParseError("duplicate 'dim' line", lineno, col)
            dim = int(parts[1])
        elif head == "entry":
            if flavor is None or dim is None:
                raise ParseError("'group' and 'dim' must precede entries", lineno, col)
            if ":" not in line:
                raise ParseError("expected 'entry <i> <j> : <expr>'", lineno, col)
            left, expr = line.split(":", 1)
            parts = left.split()
            if len(parts) != 3 or not parts[1].isdigit() or not parts[2].isdigit():
                raise ParseError("expected 'entry <i> <j> : <expr>'", lineno, col)
            i, j = int(parts[1]), int(parts[2])
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ParseError(f"entry ({i},{j}) outside dimension {dim}", lineno, col)
            if (i - 1, j - 1) in entries:
                raise ParseError(f"duplicate entry ({i},{j})", lineno, col)
            elem = _Expr(expr, lineno, len(left) + 1, flavor, rank).parse()
            entries[(i - 1, j - 1)] = elem
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if flavor is None or dim is None:
        raise ParseError("missing 'group' or 'dim' line")
    return ProblemSpec(flavor, rank, dim, {k: v for k, v in entries.items() if v})
