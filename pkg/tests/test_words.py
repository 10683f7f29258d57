from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sgr import words
from sgr.errors import DomainError
from strategies import raw_words, reduced_words


def brute_reduce(w):
    # repeatedly delete the leftmost cancelling pair
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def test_reduce_examples():
    assert words.reduce([(1, 1), (1, -1), (2, 1)]) == (2,)
    assert words.reduce([]) == ()
    assert words.reduce([(1, 1), (2, 1), (2, -1), (1, -1)]) == ()


def test_reduce_rejects_bad_letters():
    with pytest.raises(DomainError):
        words.reduce([3], rank=2)
    with pytest.raises(DomainError):
        words.reduce([0])


def test_concat_examples():
    assert words.concat((1,), (-1,)) == ()
    assert words.concat((1, 2), (-2, 1)) == (1, 1)
    assert words.concat((1, 2), (-2, 1)) == words.reduce((1, 2, -2, 1))
    assert words.concat((), (2, -1)) == (2, -1)


def test_invert_examples():
    assert words.invert((1, 2)) == (-2, -1)
    assert words.invert(()) == ()
    assert words.invert((-1,)) == (1,)


def test_abelianize_examples():
    assert words.abelianize((1, 2, 1), 2) == (2, 1)
    assert words.abelianize(words.reduce((1, -1)), 2) == (0, 0)
    assert words.abelianize((-1, 2), 2) == (-1, 1)


def test_canonical_order():
    assert sorted([(2,), (-1,), (1,), (-2,), ()], key=words.word_key) == [(), (1,), (-1,), (2,), (-2,)]
    assert words.word_key((2,)) < words.word_key((1, 1))
    assert sorted([(0, 1), (1, 0), (-1, 0), (0, 0)], key=words.abel_key) == [
        (0, 0), (1, 0), (-1, 0), (0, 1)]


def test_reduce_matches_brute_force_exhaustively():
    for n in range(7):
        for raw in product([1, -1, 2, -2], repeat=n):
            assert words.reduce(raw) == brute_reduce(raw)


@given(raw_words(3))
def test_reduce_idempotent(raw):
    w = words.reduce(raw)
    assert words.is_reduced(w)
    assert words.reduce(w) == w


@given(reduced_words(3), reduced_words(3), reduced_words(3))
def test_concat_associative(a, b, c):
    assert words.concat(words.concat(a, b), c) == words.concat(a, words.concat(b, c))


@given(reduced_words(3))
def test_concat_inverse(a):
    assert words.concat(a, words.invert(a)) == ()
    assert words.concat(words.invert(a), a) == ()


@given(reduced_words(3), reduced_words(3))
def test_abelianize_homomorphism(a, b):
    lhs = words.abelianize(words.concat(a, b), 3)
    rhs = words.abel_add(words.abelianize(a, 3), words.abelianize(b, 3))
    assert lhs == rhs


@given(st.lists(st.tuples(st.integers(1, 3), st.sampled_from([1, -1])), max_size=8))
def test_pairs_round_trip(pairs):
    w = words.reduce(pairs)
    assert words.reduce(words.to_pairs(w)) == w
