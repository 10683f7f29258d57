from itertools import product
from math import comb

import pytest
from hypothesis import given, settings

from sgr import groupring as gr
from sgr import moments, words
from sgr.errors import DomainError, ResourceError
from sgr.groupring import ABELIAN, FREE, RingElem, RingMatrix
from sgr.zseries import ZSeries, geometric
from fixtures import SUITE, WALK_F1, WALK_F2, WALK_Z2, matrix
from strategies import matrices


def closed_walks(rank, n):
    letters = [k for i in range(1, rank + 1) for k in (i, -i)]
    return sum(1 for w in product(letters, repeat=n) if not words.reduce(w))


def perm_conjugate(p):
    # swap the two rows and columns of an N=2 matrix
    e = p.entries
    return RingMatrix([[e[1][1], e[1][0]], [e[0][1], e[0][0]]], p.flavor, p.rank)


def test_walk_moments_against_enumeration():
    m = moments.moment_sequence(matrix(WALK_F2), 6)
    assert [m.seq[n] for n in (2, 4, 6)] == [4, 28, 232]
    assert list(m.seq) == [closed_walks(2, n) for n in range(7)]
    r1 = moments.moment_sequence(matrix(WALK_F1), 4)
    assert list(r1.seq) == [1, 0, 2, 0, 6]


def test_swap_matrix():
    z = RingElem.zero(FREE, 1)
    x = RingElem.gen(FREE, 1, 1)
    swap = RingMatrix([[z, x], [gr.star(x), z]])
    assert list(moments.moment_sequence(swap, 4).seq) == [2, 0, 2, 0, 2]


def test_abelian_examples():
    m = moments.moment_sequence_abelian_fast(matrix(WALK_Z2), 8)
    assert [m.seq[n] for n in (2, 4)] == [4, 36]
    assert [m.seq[2 * k] for k in range(5)] == [comb(2 * k, k) ** 2 for k in range(5)]
    mono = RingMatrix.scalar(RingElem(ABELIAN, 2, {(1, 0): 1}))
    assert list(moments.moment_sequence_abelian_fast(mono, 5).seq) == [1, 0, 0, 0, 0, 0]
    two = RingMatrix.scalar(RingElem.one(ABELIAN, 1, 2))
    assert list(moments.moment_sequence_abelian_fast(two, 6).seq) == [2**n for n in range(7)]


def test_series_truncation():
    m = moments.compute_moments(matrix(WALK_F1), 4)
    assert moments.series_truncation(m).coeffs == (1, 0, 2, 0, 6)
    unit = RingMatrix.identity(FREE, 1, 1)
    assert moments.series_truncation(moments.compute_moments(unit, 5)).coeffs == (1,) * 6
    m = moments.compute_moments(matrix(SUITE["block_f2"]), 6)
    mats = moments.matrix_series_truncation(m)
    diag = mats[0][0] + mats[1][1]
    assert diag == moments.series_truncation(m)


def test_matrix_series_needs_refinement():
    with pytest.raises(DomainError):
        moments.matrix_series_truncation(moments.MomentData.from_sequence([1, 2]))


def test_hadamard_univariate():
    cb = ZSeries([comb(2 * k, k) for k in range(10)])
    assert moments.hadamard_univariate(geometric(1, 10), cb) == cb
    six = moments.hadamard_univariate(geometric(2, 12), geometric(3, 12))
    assert six == geometric(6, 12)


def test_resource_cap_names_n():
    with pytest.raises(ResourceError, match="n=3"):
        moments.moment_sequence(matrix(WALK_F2), 10, cap=30)


def test_detect_stride():
    assert moments.detect_stride([1, 0, 2, 0, 6]) == 2
    assert moments.detect_stride([1, 1, 1]) == 1


@pytest.mark.parametrize("name", sorted(SUITE))
def test_engines_agree(name):
    p = matrix(SUITE[name])
    direct = moments.moment_sequence(p, 9)
    fast = moments.moment_sequence_free_fast(p, 9)
    assert fast.matrix_seq == direct.matrix_seq
    assert fast.provenance == "first-return"


@pytest.mark.parametrize("name", sorted(SUITE))
def test_self_adjoint_even_moments_nonnegative(name):
    p = matrix(SUITE[name])
    if not gr.is_self_adjoint(p):
        p = gr.mat_mul(gr.star_matrix(p), p)
    seq = moments.compute_moments(p, 30).seq
    assert all(seq[2 * k] >= 0 for k in range(16))


@pytest.mark.parametrize("name", ["block_f1", "block_f2", "hermitian_f2"])
def test_permutation_conjugation_invariance(name):
    p = matrix(SUITE[name])
    a = moments.compute_moments(p, 12).seq
    b = moments.compute_moments(perm_conjugate(p), 12).seq
    assert a == b


def tree_returns(degree, n_max):
    # closed walks on the regular tree, by dynamic programming on distance from the root
    dist = {0: 1}
    out = [1]
    for _ in range(n_max):
        nxt = {}
        for k, c in dist.items():
            if k == 0:
                nxt[1] = nxt.get(1, 0) + degree * c
            else:
                nxt[k - 1] = nxt.get(k - 1, 0) + c
                nxt[k + 1] = nxt.get(k + 1, 0) + (degree - 1) * c
        dist = nxt
        out.append(dist.get(0, 0))
    return out


def test_fast_engine_reaches_high_order():
    seq = moments.compute_moments(matrix(WALK_F2), 120).seq
    assert list(seq) == tree_returns(4, 120)


@settings(max_examples=40)
@given(matrices(max_terms=3, max_len=2))
def test_abelian_consistency(p):
    ab = gr.abelianize_matrix(p)
    assert moments.moment_sequence(ab, 6).seq == moments.moment_sequence_abelian_fast(ab, 6).seq


@settings(max_examples=40)
@given(matrices(max_terms=3, max_len=2))
def test_first_return_engine_random(p):
    assert moments.moment_sequence_free_fast(p, 6).matrix_seq == moments.moment_sequence(p, 6).matrix_seq
