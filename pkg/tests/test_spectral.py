import cmath
import math
from fractions import Fraction
from math import comb

import pytest

from sgr import groupring as gr
from sgr import moments, spectral
from sgr.errors import ContractError, MismatchError
from sgr.moments import MomentData
from fixtures import SUITE, UNIT, WALK_F1, WALK_F2, matrix
from test_guess import CB, GEOM, KESTEN

TWO_SQRT3 = 2 * math.sqrt(3)


@pytest.fixture(scope="module")
def norms():
    opts = spectral.NormOptions(n_max=80)
    return {name: spectral.norm(matrix(text), opts) for name, text in SUITE.items()}


def test_isolate_roots_contains_roots():
    roots = spectral.isolate_roots((-12, 0, 1))
    assert sorted(round(r.approx.real, 12) for r in roots) == [round(-TWO_SQRT3, 12), round(TWO_SQRT3, 12)]
    for r in roots:
        lo, hi = r.rect[0], r.rect[1]
        assert lo * lo <= 12 <= hi * hi or hi * hi <= 12 <= lo * lo
    cplx = spectral.isolate_roots((1, 0, 1))
    assert all(not r.is_real for r in cplx)
    assert any(r.contains(1j) for r in cplx) and any(r.contains(-1j) for r in cplx)


def test_algebraic_number_helpers():
    (r,) = [x for x in spectral.isolate_roots((-12, 0, 1)) if x.approx.real > 0]
    inv = r.reciprocal()
    assert abs(inv.approx - 1 / TWO_SQRT3) < 1e-14
    assert inv.poly in ((1, 0, -12), (-1, 0, 12))
    s = r.sqrt_positive()
    assert abs(s.approx.real - 12 ** 0.25) < 1e-14
    assert spectral.isolate_roots((-3, 2))[0].exact() == Fraction(3, 2)


def test_singular_candidates_examples():
    half = sorted(c.approx.real for c in spectral.singular_candidates(CB))
    assert half == [-0.5, 0.5]
    (one,) = spectral.singular_candidates(GEOM)
    assert one.exact() == 1
    mods = [abs(c) for c in spectral.singular_candidates(KESTEN)]
    assert any(abs(1 / m - TWO_SQRT3) < 1e-12 for m in mods)


def test_radius_examples():
    m = moments.compute_moments(matrix(WALK_F1), 80)
    rho, cert = spectral.radius_of_convergence(m, CB)
    assert abs(rho - 0.5) < 1e-9 and cert.exact() == Fraction(1, 2)
    rho, cert = spectral.radius_of_convergence(moments.compute_moments(matrix(UNIT), 40), GEOM)
    assert abs(rho - 1) < 1e-12 and cert.exact() == 1
    m = moments.compute_moments(matrix(WALK_F2), 80)
    rho, cert = spectral.radius_of_convergence(m, KESTEN)
    assert abs(rho - 0.288675134595) < 1e-8
    assert abs(abs(cert) - 1 / TWO_SQRT3) < 1e-14


def test_radius_mismatch_is_reported():
    m = moments.compute_moments(matrix(WALK_F2), 80)
    with pytest.raises(MismatchError) as info:
        spectral.radius_of_convergence(m, CB)
    assert info.value.empirical == pytest.approx(1 / TWO_SQRT3, rel=1e-6)


def test_norm_examples():
    opts = spectral.NormOptions(n_max=80)
    r1 = spectral.norm(matrix(WALK_F1), opts)
    assert r1.norm == 2 and r1.exact == 2 and r1.agreement
    r2 = spectral.norm(matrix(WALK_F2), opts)
    assert abs(r2.norm - TWO_SQRT3) < 1e-12 and r2.agreement
    unit = spectral.norm(matrix(UNIT), opts)
    assert unit.exact == 1 and unit.route == "direct"


def test_norm_below_coefficient_bound(norms):
    for name, rep in norms.items():
        bound = float(gr.coefficient_norm_bound(matrix(SUITE[name])))
        assert rep.norm <= bound * (1 + 1e-6), name


def test_certificate_agrees_with_empirics(norms):
    certified = [name for name, rep in norms.items() if rep.certificate is not None]
    assert {"walk_f1", "walk_f2", "twisted_f2"} <= set(certified)
    for name in certified:
        rep = norms[name]
        assert rep.agreement, name
        assert abs(rep.empirical - rep.certified) <= 1e-6 * rep.certified


def test_non_self_adjoint_uses_star_route(norms):
    for name, rep in norms.items():
        sa = gr.is_self_adjoint(matrix(SUITE[name]))
        assert rep.route == ("direct" if sa else "star")


def test_lopsided_norm_matches_fourier_symbol(norms):
    # on Z the operator is multiplication by 2e^{it} + e^{-2it} + 1/2; its sup is 7/2
    assert norms["lopsided_f1"].norm == pytest.approx(3.5, rel=1e-6)


@pytest.mark.parametrize("text", [WALK_F1, WALK_F2, UNIT])
def test_self_adjoint_routes_agree(text):
    direct = spectral.norm(matrix(text), spectral.NormOptions(n_max=80))
    star = spectral.norm(matrix(text), spectral.NormOptions(n_max=80, route="star"))
    assert star.route == "star"
    assert abs(direct.norm - star.norm) <= 1e-6 * direct.norm


def test_green_examples():
    assert spectral.green_eval(GEOM, 1, 3) == pytest.approx(0.5, abs=1e-12)
    assert spectral.green_eval(CB, 1, 3) == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    # the branch analytic at infinity: 1 / (w sqrt(1 - 4/w^2))
    for w in (2.5, -3, 3j, 1 + 4j, -0.5 + 2.1j):
        got = spectral.green_eval(CB, 1, w, radius=0.5)
        assert abs(got - 1 / (w * cmath.sqrt(1 - 4 / (w * w)))) < 1e-10


def test_branch_radius():
    assert spectral.branch_radius(CB, 1).exact() == Fraction(1, 2)
    assert abs(abs(spectral.branch_radius(KESTEN, 1)) - 1 / TWO_SQRT3) < 1e-14


def test_green_matches_series_within_tail_bound():
    m = moments.compute_moments(matrix(WALK_F2), 200)
    for w in (4, 5, -4.5, 4j, 3 + 3j):
        g = spectral.green_eval(KESTEN, 1, w, radius=1 / TWO_SQRT3)
        approx = spectral.series_green(m, w)
        bound = spectral.green_tail_bound(m, w, TWO_SQRT3)
        assert abs(g - approx) <= bound + 1e-12
        assert bound < 1e-6


def test_green_far_from_spectrum_general_fixture(norms):
    rep = norms["twisted_f2"]
    assert rep.equation is not None
    # R_{P*P} certified: compare against the series at |w| = 2 ||P*P||
    w = 2 * rep.norm**2
    m = rep.moments
    g = spectral.green_eval(rep.equation, m.seq[0], w, radius=rep.radius)
    approx = spectral.series_green(m, w)
    assert abs(g - approx) <= spectral.green_tail_bound(m, w, rep.norm**2) + 1e-12


def test_asymptotic_fit_examples():
    cb = spectral.asymptotic_fit([comb(2 * k, k) for k in range(40)], stride=1)
    assert -0.55 <= cb.alpha <= -0.45 and cb.growth_base == pytest.approx(4, rel=1e-6)
    sq = spectral.asymptotic_fit([comb(2 * k, k) ** 2 for k in range(40)], stride=1)
    assert abs(sq.alpha) <= 0.1
    flat = spectral.asymptotic_fit([1] * 30, stride=1)
    assert flat.growth_base == pytest.approx(1) and flat.alpha == pytest.approx(-1, abs=1e-9)


def test_asymptotic_fit_from_moments():
    m = moments.compute_moments(matrix(WALK_F1), 40)
    fit = spectral.asymptotic_fit(m)
    assert fit.stride == 2 and -0.55 <= fit.alpha <= -0.45


def test_empirical_growth_needs_terms():
    with pytest.raises(ContractError):
        spectral.empirical_growth(MomentData.from_sequence([1, 2, 4]))
