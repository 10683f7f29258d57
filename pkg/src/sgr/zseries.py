"""Truncated univariate power series in z with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ZSeries:
    """``coeffs[n]`` is the coefficient of z**n; the series is known mod z**order."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def truncate(self, order: int) -> ZSeries:
        return ZSeries(self.coeffs[:order])

    def __add__(self, other: ZSeries) -> ZSeries:
        n = min(self.order, other.order)
        return ZSeries(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n]))

    def __mul__(self, other):
        if isinstance(other, ZSeries):
            return ZSeries(poly_mul(self.coeffs, other.coeffs, min(self.order, other.order)))
        return ZSeries(c * other for c in self.coeffs)

    __rmul__ = __mul__

    def substitute_scale(self, c) -> ZSeries:
        """f(c*z)."""
        c = Fraction(c)
        return ZSeries(a * c**n for n, a in enumerate(self.coeffs))

    def evaluate(self, z):
        """Truncated sum at ``z``; exact when ``z`` is rational."""
        if isinstance(z, (int, Fraction)):
            return poly_eval(self.coeffs, Fraction(z))
        return poly_eval([complex(a) for a in self.coeffs], complex(z))

    def __str__(self):
        return format_poly(self.coeffs, "z") + f" + O(z^{self.order})"


def geometric(ratio, order: int) -> ZSeries:
    ratio = Fraction(ratio)
    return ZSeries(ratio**n for n in range(order))


def poly_mul(a: Sequence, b: Sequence, order: int | None = None) -> list:
    """Product of coefficient lists, optionally truncated to ``order`` terms."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1 if order is None else min(order, len(a) + len(b) - 1)
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y:
                out[i + j] += x * y
    return out


def poly_add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def poly_trim(a: Sequence) -> tuple:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def poly_eval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def format_poly(coeffs: Sequence, var: str = "z", descending: bool = False) -> str:
    """Human-readable polynomial, e.g. ``1 + 2*z^2``; exact rationals kept."""
    terms = [(k, Fraction(c)) for k, c in enumerate(coeffs) if c]
    if descending:
        terms.reverse()
    if not terms:
        return "0"
    out = []
    for idx, (k, c) in enumerate(terms):
        mag = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
