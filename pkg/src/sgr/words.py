"""Elements of the free group F_r and the free abelian group Z^r.

A free word is a tuple of nonzero ints: ``k`` stands for the generator u_k
and ``-k`` for its inverse.  An abelian word is a tuple of ``r`` exponents.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple, Union

from sgr.errors import DomainError

FreeWord = Tuple[int, ...]
AbelWord = Tuple[int, ...]

Letter = Union[int, Tuple[int, int]]

IDENTITY: FreeWord = ()


def _letter(item: Letter) -> int:
    if isinstance(item, tuple):
        index, sign = item
        if sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {sign!r}")
        return index * sign
    return item


def reduce(raw: Iterable[Letter], rank: int | None = None) -> FreeWord:
    """Freely reduce a letter sequence with a single left-to-right stack scan.

    Letters may be signed ints or ``(index, sign)`` pairs.  When ``rank`` is
    given every index must lie in ``1..rank``.

    >>> reduce([(1, 1), (1, -1), (2, 1)])
    (2,)
    >>> reduce([1, 2, -2, -1])
    ()
    """
    stack: list[int] = []
    for item in raw:
        a = _letter(item)
        if a == 0 or (rank is not None and abs(a) > rank):
            raise DomainError(f"generator index {abs(a)} outside 1..{rank}")
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1)) and 0 not in w


def concat(a: FreeWord, b: FreeWord) -> FreeWord:
    """Product of two reduced words; only the seam can cancel."""
    k = 0
    la, lb = len(a), len(b)
    while k < la and k < lb and a[la - 1 - k] == -b[k]:
        k += 1
    if k == 0:
        return a + b
    return a[: la - k] + b[k:]


def invert(a: FreeWord) -> FreeWord:
    return tuple(-x for x in reversed(a))


def abelianize(a: Sequence[int], rank: int) -> AbelWord:
    exps = [0] * rank
    for x in a:
        if x > 0:
            exps[x - 1] += 1
        else:
            exps[-x - 1] -= 1
    return tuple(exps)


def to_pairs(a: FreeWord) -> list[tuple[int, int]]:
    return [(abs(x), 1 if x > 0 else -1) for x in a]


def letter_key(x: int) -> int:
    # x_1 < x_1^{-1} < x_2 < x_2^{-1} < ...
    return 2 * abs(x) - (1 if x > 0 else 0)


def word_key(w: FreeWord) -> tuple:
    """Length-lexicographic sort key."""
    return (len(w), tuple(letter_key(x) for x in w))


def abel_key(e: AbelWord) -> tuple:
    """Order monomials like the words g1^e1 g2^e2 ... they print as."""
    w = []
    for k, x in enumerate(e, 1):
        w.extend([k if x > 0 else -k] * abs(x))
    return word_key(tuple(w))


def abel_identity(rank: int) -> AbelWord:
    return (0,) * rank


def abel_add(a: AbelWord, b: AbelWord) -> AbelWord:
    return tuple(x + y for x, y in zip(a, b))


def abel_neg(a: AbelWord) -> AbelWord:
    return tuple(-x for x in a)
