#!/usr/bin/env python3
"""Compare R_P for P over F_r with R_{P^ab} over Z^r.

For each input the script reports the growth radius of both moment series,
whether an algebraic equation is found within the given bounds, and the
smallest P-recurrence found for the abelian side.  Walk operators show the
expected gap: the free side is algebraic with a square-root singularity,
the abelian side is only holonomic.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from sgr import groupring as gr
from sgr import guess, moments, spectral
from sgr.errors import SgrError
from sgr.problem import parse_problem
from sgr.zseries import ZSeries

EXAMPLES = {
    "walk_f2": "group free 2\ndim 1\nentry 1 1 : g1 + g1^-1 + g2 + g2^-1\n",
    # {g1*g2, g1} is again a free basis, so the free side repeats walk_f2
    "basis_change": "group free 2\ndim 1\nentry 1 1 : g1*g2 + g2^-1*g1^-1 + g1 + g1^-1\n",
    "lopsided_f1": "group free 1\ndim 1\nentry 1 1 : 2*g1 + g1^-2 + 1/2\n",
}


@dataclass
class Config:
    n_max: int = 60
    dy: int = 4
    dz: int = 4
    d: int = 2
    m: int = 3


def describe(p: gr.RingMatrix, cfg: Config) -> dict:
    if not gr.is_self_adjoint(p):
        p = gr.mat_mul(gr.star_matrix(p), p)
    m = moments.compute_moments(p, cfg.n_max)
    series = ZSeries(m.seq)
    out = {"radius": None, "alg": None, "rec": None}
    try:
        out["radius"], _ = spectral.radius_of_convergence(m)
    except SgrError as exc:
        out["radius"] = f"n/a ({exc})"
    out["alg"] = spectral.find_equation(series, cfg.dy, cfg.dz)
    try:
        out["rec"] = guess.guess_recurrence(m.seq, cfg.d, cfg.m, stride=None)
    except SgrError:
        pass
    return out


def main(cfg: Config, names):
    for name in names:
        p = parse_problem(EXAMPLES[name]).matrix()
        ab = gr.abelianize_matrix(p)
        print(f"== {name}")
        for label, q in (("free", p), ("abelian", ab)):
            r = describe(q, cfg)
            rad = r["radius"] if isinstance(r["radius"], str) else f"{r['radius']:.10f}"
            print(f"  {label:8} radius={rad}")
            print(f"  {'':8} algebraic (dy,dz <= {cfg.dy},{cfg.dz}): {r['alg'] or 'none'}")
            print(f"  {'':8} recurrence: {r['rec'] or 'none'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("names", nargs="*", help=f"subset of {', '.join(EXAMPLES)}")
    ap.add_argument("--nmax", type=int, default=Config.n_max)
    args = ap.parse_args()
    unknown = set(args.names) - set(EXAMPLES)
    if unknown:
        ap.error(f"unknown example(s): {', '.join(sorted(unknown))}")
    main(Config(n_max=args.nmax), args.names or list(EXAMPLES))
