from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sgr import groupring as gr
from sgr import moments, ncseries, words
from sgr.errors import ContractError, ResourceError
from sgr.groupring import FREE, RingElem
from sgr.ncseries import NCSeries
from fixtures import SUITE, UNIT, WALK_F1, WALK_F2, matrix
from strategies import elems, matrices, nonzero_rationals

Z1 = (Fraction(0), Fraction(1))  # the polynomial z


def series(rank, L, T, terms):
    return NCSeries(rank, L, T, terms)


def nc_series(rank=2, L=3, T=2):
    word = st.lists(st.sampled_from([1, -1, 2, -2][: 2 * rank]), max_size=L).map(tuple)
    poly = st.lists(nonzero_rationals, min_size=1, max_size=T + 1).map(tuple)
    return st.dictionaries(word, poly, max_size=5).map(lambda t: NCSeries(rank, L, T, t))


def test_iota_examples():
    a = 2 * RingElem.gen(FREE, 2, 1) + RingElem.gen(FREE, 2, 2, -1)
    f = ncseries.iota(a)
    assert f.terms == {(1,): (2,), (-2,): (1,)}
    assert ncseries.iota(RingElem.one(FREE, 2)).terms == {(): (1,)}
    g = ncseries.iota(RingElem(FREE, 2, {(1, -2): 1}))
    assert list(g.terms) == [(1, -2)]


def test_pi_examples():
    assert ncseries.pi((1, -1)) == ()
    assert ncseries.pi((1, 2)) == (1, 2)
    assert ncseries.pi((-2, 2, 1)) == (1,)


def test_nc_mul_examples():
    a = series(1, 2, 2, {(1,): (1,)})
    b = series(1, 2, 2, {(-1,): (1,)})
    assert (a * b).terms == {(1, -1): (1,)}
    one = NCSeries.one(1, 2, 2)
    assert one * a == a
    za = series(1, 2, 2, {(1,): Z1})
    assert (za * za).terms == {(1, 1): (0, 0, 1)}


def test_hadamard_examples():
    f = series(2, 2, 3, {(1,): (1, 2), (2, -1): (0, 3), (): (5,)})
    assert ncseries.hadamard(f, ncseries.ones(2, 2, 3)) == f
    g = series(2, 1, 0, {(1,): (1,), (2,): (1,)})
    h = series(2, 1, 0, {(1,): (1,)})
    assert ncseries.hadamard(g, h).terms == {(1,): (1,)}
    zx = series(1, 1, 1, {(1,): Z1})
    assert ncseries.hadamard(zx, series(1, 1, 1, {(1,): (1,)})).terms == {(1,): Z1}


def test_delta_examples():
    d = ncseries.delta(2, 4)
    assert d.coefficient((1, -1)) == (1,)
    assert d.coefficient((1, 2)) == ()
    brute = sum(1 for w in product([1, -1, 2, -2], repeat=4) if not words.reduce(w))
    assert brute == 28
    assert sum(1 for w in d.terms if len(w) == 4) == 28


def test_delta_restriction():
    for r in (1, 2):
        big = ncseries.delta(r, 6)
        for L in range(6):
            assert big.with_bounds(L, 0) == ncseries.delta(r, L)


def test_kernel_words_match_brute_force():
    letters = [1, -1, 2, -2]
    for n in range(7):
        brute = {w for w in product(letters, repeat=n) if not words.reduce(w)}
        assert {w for w in ncseries.kernel_words(2, n) if len(w) == n} == brute


def test_star_series_examples():
    zero = [[NCSeries.zero(1, 3, 3)]]
    assert ncseries.star_series(zero) == ncseries.nc_identity(1, 1, 3, 3)
    pz = [[series(1, 3, 3, {(1,): Z1})]]
    s = ncseries.star_series(pz)[0][0]
    assert s.terms == {(1,) * n: (0,) * n + (1,) for n in range(4)}
    walk = matrix(WALK_F1)
    filtered = ncseries.hadamard(ncseries.star_series(ncseries.p_z(walk, 2, 2))[0][0],
                                 ncseries.delta(1, 2, 2))
    assert ncseries.phi_z(ncseries.psi(filtered), 2)[2] == 2


def test_star_series_requires_no_constant():
    with pytest.raises(ContractError):
        ncseries.star_series([[NCSeries.one(1, 2, 2)]])


def test_psi_examples():
    g = ncseries.psi(series(2, 2, 0, {(1, 2): (1,), (2, 1): (1,)}))
    assert g == {(1, 0, 1, 0): (2,)}
    assert ncseries.psi(NCSeries.one(2, 2, 0)) == {(0, 0, 0, 0): (1,)}
    assert ncseries.psi(series(1, 2, 1, {(1, -1): Z1})) == {(1, 1): Z1}


def test_phi_z_examples():
    assert ncseries.phi_z({(3, 1): (0, 0, 1)}, 3).coeffs[:3] == (0, 0, 1)
    g = ncseries.psi(series(1, 1, 1, {(1,): Z1, (-1,): Z1}))
    assert ncseries.phi_z(g, 1).coeffs == (0, 2)
    assert not any(ncseries.phi_z({}, 2).coeffs)


def test_pipeline_examples():
    assert ncseries.pipeline_series(matrix(UNIT), 6)[0][0].coeffs == (1,) * 7
    r1 = ncseries.pipeline_series(matrix(WALK_F1), 8)[0][0].coeffs
    assert r1 == tuple(comb(n, n // 2) if n % 2 == 0 else 0 for n in range(9))
    r2 = ncseries.pipeline_series(matrix(WALK_F2), 6)[0][0].coeffs
    assert r2 == (1, 0, 4, 0, 28, 0, 232)


def test_key_trace_examples():
    x1, x2 = RingElem.gen(FREE, 2, 1), RingElem.gen(FREE, 2, 2)
    assert ncseries.key_trace(3 * RingElem.one(FREE, 2) + 2 * x1) == 3
    walk = x1 + RingElem.gen(FREE, 2, 1, -1)
    assert ncseries.key_trace(walk * walk) == 2
    comm = x1 * x2 * RingElem.gen(FREE, 2, 1, -1) * RingElem.gen(FREE, 2, 2, -1)
    assert ncseries.key_trace(comm) == 0


@pytest.mark.parametrize("name", sorted(SUITE))
def test_pipeline_equals_direct(name):
    p = matrix(SUITE[name])
    direct = moments.moment_sequence(p, 10)
    piped = ncseries.pipeline_series(p, 10)
    for i in range(p.n):
        for j in range(p.n):
            assert piped[i][j].coeffs == tuple(direct.matrix_seq[i][j])


@pytest.mark.parametrize("name", ["walk_f1", "lopsided_f1", "block_f1", "twisted_f2"])
def test_full_and_sparse_pipelines_agree(name):
    p = matrix(SUITE[name])
    full = ncseries.pipeline_series(p, 5, method="full")
    sparse = ncseries.pipeline_series(p, 5)
    assert [[s.coeffs for s in r] for r in full] == [[s.coeffs for s in r] for r in sparse]


def test_pipeline_memory_guard(monkeypatch):
    p = matrix(WALK_F2)
    with pytest.raises(ResourceError):
        ncseries.pipeline_series(p, 10, cap=1000)
    monkeypatch.setenv("SGR_TERM_CAP", "10")
    assert ncseries.term_cap() == 10
    with pytest.raises(ResourceError):
        ncseries.pipeline_series(p, 4)


# properties


@given(nc_series(), nc_series())
def test_hadamard_commutative(f, g):
    assert ncseries.hadamard(f, g) == ncseries.hadamard(g, f)


@settings(max_examples=200)
@given(nc_series(), nc_series(), nc_series())
def test_hadamard_unit_and_associativity(f, g, h):
    one = ncseries.ones(2, 3, 2)
    assert ncseries.hadamard(f, one) == f
    assert ncseries.hadamard(ncseries.hadamard(f, g), h) == ncseries.hadamard(f, ncseries.hadamard(g, h))
    assert ncseries.hadamard(f, g) == ncseries.hadamard(g, f)


@given(nc_series(L=4, T=2))
def test_hadamard_is_support_intersection(f):
    filtered = ncseries.hadamard(f, ncseries.delta(2, 4, 2))
    assert set(filtered.terms) == {w for w in f.terms if not words.reduce(w)}
    assert filtered == ncseries.hadamard_kernel(f)


@settings(max_examples=50)
@given(matrices(max_terms=2, max_len=2))
def test_star_series_inverts(p):
    L, T = 4, 3
    pz = ncseries.p_z(p, L, T)
    s = ncseries.star_series(pz)
    lhs = ncseries.nc_matadd(s, ncseries.nc_matmul(pz, s), sign=-1)
    assert lhs == ncseries.nc_identity(p.n, p.rank, L, T)


@given(elems(FREE, max_terms=5, max_len=4))
def test_key_trace_is_trace(f):
    assert ncseries.key_trace(f) == gr.trace(f)


@settings(max_examples=40)
@given(matrices(max_terms=2, max_len=2))
def test_pipeline_oracle_random(p):
    direct = moments.moment_sequence(p, 4)
    piped = ncseries.pipeline_series(p, 4)
    assert all(piped[i][j].coeffs == tuple(direct.matrix_seq[i][j])
               for i in range(p.n) for j in range(p.n))
