#!/usr/bin/env python3
"""Cross-check the Hadamard/Delta pipeline against the moment engines.

For each problem file (or the built-in set) and each order T, compares
pipeline_series(P, T) entrywise with direct powers and with the first-return
engine, and reports timings.  Exits nonzero on any mismatch.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from sgr import moments, ncseries
from sgr.errors import ResourceError
from sgr.problem import parse_problem

BUILTIN = {
    "walk_f2": "group free 2\ndim 1\nentry 1 1 : g1 + g1^-1 + g2 + g2^-1\n",
    "twisted_f2": "group free 2\ndim 1\nentry 1 1 : g1*g2 + g2^-1 - 1/3*g1^-1\n",
    "block_f1": ("group free 1\ndim 2\nentry 1 1 : g1\nentry 1 2 : 1\n"
                 "entry 2 1 : g1^-1\nentry 2 2 : -g1^-1 + 2/3\n"),
}


@dataclass
class Config:
    orders: list = field(default_factory=lambda: [4, 6, 8, 10])
    cap: int | None = None


def timed(f, *a):
    t0 = time.perf_counter()
    out = f(*a)
    return out, time.perf_counter() - t0


def check(name: str, text: str, cfg: Config) -> bool:
    p = parse_problem(text).matrix()
    ok = True
    for T in cfg.orders:
        direct, t_dir = timed(moments.moment_sequence, p, T)
        fast, t_fast = timed(moments.moment_sequence_free_fast, p, T)
        try:
            piped, t_pipe = timed(ncseries.pipeline_series, p, T, cfg.cap)
        except ResourceError as exc:
            print(f"{name:12} T={T:<3} pipeline skipped: {exc}")
            continue
        same = all(piped[i][j].coeffs == tuple(direct.matrix_seq[i][j])
                   for i in range(p.n) for j in range(p.n))
        same = same and fast.matrix_seq == direct.matrix_seq
        ok &= same
        print(f"{name:12} T={T:<3} {'OK ' if same else 'BAD'} pipeline {t_pipe:7.3f}s  "
              f"direct {t_dir:7.3f}s  first-return {t_fast:7.3f}s")
    return ok


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("files", nargs="*", type=Path)
    ap.add_argument("--orders", type=int, nargs="+", default=Config().orders)
    ap.add_argument("--cap", type=int, default=None)
    args = ap.parse_args(argv)
    cfg = Config(args.orders, args.cap)
    cases = {f.stem: f.read_text() for f in args.files} or BUILTIN
    ok = all([check(name, text, cfg) for name, text in cases.items()])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
