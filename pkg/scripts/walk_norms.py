#!/usr/bin/env python3
"""Norms of simple random walk operators on free groups.

For P = sum_k (u_k + u_k^-1) on F_r the moment series is algebraic and the
norm is 2*sqrt(2r - 1).  This reconstructs the equation from moments, takes
the dominant singularity and compares with that closed form.
"""

from __future__ import annotations

import argparse
import math
import time
from dataclasses import dataclass

from sgr import spectral
from sgr.problem import parse_problem


@dataclass
class Config:
    ranks: tuple = (1, 2, 3, 4)
    n_max: int = 80
    dy: int = 2
    dz: int = 2


def walk(rank: int):
    terms = " + ".join(f"g{k} + g{k}^-1" for k in range(1, rank + 1))
    return parse_problem(f"group free {rank}\ndim 1\nentry 1 1 : {terms}\n").matrix()


def main(cfg: Config):
    print(f"{'r':>2} {'norm':>14} {'2sqrt(2r-1)':>14} {'rel.err':>9} {'empirical':>14}  equation")
    for r in cfg.ranks:
        t0 = time.perf_counter()
        rep = spectral.norm(walk(r), spectral.NormOptions(n_max=cfg.n_max, dy_max=cfg.dy, dz_max=cfg.dz))
        ref = 2 * math.sqrt(2 * r - 1)
        err = abs(rep.norm - ref) / ref
        dt = time.perf_counter() - t0
        print(f"{r:>2} {rep.norm:14.10f} {ref:14.10f} {err:9.1e} {rep.empirical:14.10f}  "
              f"{rep.equation}  ({dt:.1f}s)")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--ranks", type=int, nargs="+", default=list(Config.ranks))
    ap.add_argument("--nmax", type=int, default=Config.n_max)
    args = ap.parse_args()
    main(Config(tuple(args.ranks), args.nmax))
