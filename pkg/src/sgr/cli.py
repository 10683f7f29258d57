"""Command line interface.

    sgr <command> PROBLEM_FILE [options]

Exit codes: 0 success, 1 usage, 2 parse error, 3 no certificate at the given
bounds, 4 verification or agreement failure, 5 resource cap.
"""

from __future__ import annotations

import argparse
import logging
import sys

from sgr import groupring as gr
from sgr import guess, moments, ncseries, spectral
from sgr.errors import (
    ContractError,
    DomainError,
    MismatchError,
    PathError,
    ResourceError,
    UnsupportedInputError,
)
from sgr.problem import ParseError, ProblemSpec, format_problem, parse_problem
from sgr.zseries import ZSeries

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NOCERT, EXIT_VERIFY, EXIT_RESOURCE = range(6)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class Failure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt_float(x: float, digits: int) -> str:
    return f"{x:.{digits}f}"


def _fmt_complex(x: complex, digits: int) -> str:
    sign = "-" if x.imag < 0 else "+"
    return f"{x.real:.{digits}f}{sign}{abs(x.imag):.{digits}f}i"


def _nmax(args, spec: ProblemSpec, minimum: int = 0) -> int:
    if args.nmax is not None:
        if args.nmax < minimum:
            raise ContractError(f"--nmax {args.nmax} too small; need at least {minimum}")
        return args.nmax
    return max(moments.DEFAULT_NMAX[spec.flavor], minimum)


def _moments(args, spec, n_max):
    return moments.compute_moments(spec.matrix(), n_max, args.method)


def _print_sequence(out, seq, fmt):
    if fmt == "csv":
        out.append("n,value")
        out.extend(f"{n},{a}" for n, a in enumerate(seq))
    else:
        out.extend(f"a[{n}]={a}" for n, a in enumerate(seq))


def cmd_moments(args, spec, out):
    m = _moments(args, spec, _nmax(args, spec))
    _print_sequence(out, m.seq, args.format)
    if args.matrix and m.matrix_seq is not None and args.format == "text":
        for i, row in enumerate(m.matrix_seq):
            for j, s in enumerate(row):
                out.extend(f"a[{i + 1},{j + 1}][{n}]={a}" for n, a in enumerate(s))


def cmd_series(args, spec, out):
    m = _moments(args, spec, _nmax(args, spec))
    if args.format == "csv":
        _print_sequence(out, m.seq, "csv")
        return
    out.append(f"R(z) = {moments.series_truncation(m)}")
    if spec.dim > 1:
        for i, row in enumerate(moments.matrix_series_truncation(m)):
            for j, s in enumerate(row):
                out.append(f"A[{i + 1},{j + 1}](z) = {s}")


def cmd_pipeline_check(args, spec, out):
    n_max = args.nmax if args.nmax is not None else 8
    p = spec.matrix()
    if p.flavor != gr.FREE:
        raise DomainError("pipeline-check needs a free-group problem")
    piped = ncseries.pipeline_series(p, n_max, cap=ncseries.term_cap())
    direct = moments.moment_sequence(p, n_max)
    for n in range(n_max + 1):
        for i in range(p.n):
            for j in range(p.n):
                if piped[i][j][n] != direct.matrix_seq[i][j][n]:
                    raise Failure(
                        f"PIPELINE != DIRECT at n={n}, entry ({i + 1},{j + 1}): "
                        f"{piped[i][j][n]} vs {direct.matrix_seq[i][j][n]}", EXIT_VERIFY)
    out.append(f"PIPELINE == DIRECT up to n={n_max}: OK")


def cmd_guess_alg(args, spec, out):
    need = guess.required_order(args.dy, args.dz, args.guard)
    n_max = _nmax(args, spec, need - 1)
    m = _moments(args, spec, n_max)
    series = ZSeries(m.seq)
    eq = guess.guess_algebraic(series, args.dy, args.dz, args.guard)
    if eq is None:
        raise Failure(f"no algebraic equation with deg_y <= {args.dy}, deg_z <= {args.dz} "
                      f"at order {series.order}", EXIT_NOCERT)
    order = guess.verify_algebraic(eq, series)
    if order != series.order:
        raise Failure(f"certificate verifies only to order {order}", EXIT_VERIFY)
    out.append(str(eq))
    out.append(f"degrees: dy={eq.dy} dz={eq.dz}")
    out.append(f"verified_order={order}")


def cmd_guess_rec(args, spec, out):
    stride = None if args.stride == "auto" else int(args.stride)
    need = (args.d + 1) * (args.m + 1) + args.guard
    n_max = _nmax(args, spec)
    m = _moments(args, spec, n_max)
    s, b = guess.stride_terms(m.seq, stride)
    if len(b) < need and args.nmax is None:
        m = _moments(args, spec, s * (need - 1))
    rec = guess.guess_recurrence(m.seq, args.d, args.m, stride, args.guard)
    if rec is None:
        raise Failure(f"no recurrence with order <= {args.d}, degree <= {args.m}", EXIT_NOCERT)
    _, b = guess.stride_terms(m.seq, rec.stride)
    ok = guess.verify_recurrence(rec, m.seq)
    if ok != len(b) - rec.order:
        raise Failure(f"recurrence fails at n={ok}", EXIT_VERIFY)
    out.append(str(rec))
    out.append(f"stride={rec.stride}")
    out.append(f"verified_range=0..{ok - 1} ({len(b)} terms)")
    if args.ode:
        ode = guess.ode_from_recurrence(rec, ZSeries(m.seq))
        if ode.verified_order != len(m.seq):
            raise Failure(f"differential equation fails at order {ode.verified_order}", EXIT_VERIFY)
        out.append(f"ode: {ode}")
        out.append(f"ode_verified_order={ode.verified_order}")


def cmd_gfun_check(args, spec, out):
    m = _moments(args, spec, _nmax(args, spec))
    cert = guess.denominator_growth(m.seq)
    out.append(f"D[{len(cert.denominators) - 1}]={cert.denominators[-1]}")
    out.append(f"base={_fmt_float(cert.base, args.digits)}")
    out.append(f"trend={_fmt_float(cert.log_slope_trend, args.digits)}")
    out.append("PASS" if cert.passed else "FAIL")
    if not cert.passed:
        raise Failure("\n".join(out), EXIT_VERIFY)


def cmd_norm(args, spec, out):
    opts = spectral.NormOptions(
        n_max=args.nmax if args.nmax is not None else spectral.NormOptions.n_max,
        dy_max=args.dy, dz_max=args.dz, guard=args.guard, tolerance=args.tol, method=args.method,
    )
    rep = spectral.norm(spec.matrix(), opts)
    d = args.digits
    out.append(f"norm={_fmt_float(rep.norm, d)}")
    out.append(f"route={'P' if rep.route == 'direct' else 'P*P'}")
    out.append(f"empirical={_fmt_float(rep.empirical, d)}")
    if rep.equation is not None:
        out.append(f"equation={rep.equation}")
    if rep.certificate is not None:
        out.append(f"certificate={rep.certificate.describe()}")
        out.append(f"certified={_fmt_float(rep.certified, d)}")
        out.append(f"agreement={'true' if rep.agreement else 'false'} (tol={args.tol:g})")
    else:
        out.append("certificate=none")
    if rep.exact is not None:
        out.append(f"exact={rep.exact}")
    if rep.agreement is False:
        raise Failure("\n".join(out), EXIT_VERIFY)


def cmd_green(args, spec, out):
    w = complex(float(args.at[0]), float(args.at[1]))
    n_max = args.nmax if args.nmax is not None else 80
    m = _moments(args, spec, n_max)
    eq = spectral.find_equation(ZSeries(m.seq), args.dy, args.dz, args.guard)
    if eq is None:
        raise Failure("no algebraic equation found for the Green function", EXIT_NOCERT)
    rho, cert = spectral.radius_of_convergence(m, eq, args.tol)
    g = spectral.green_eval(eq, m.seq[0], w, radius=abs(cert))
    out.append(f"G({_fmt_complex(w, args.digits)})={_fmt_complex(g, args.digits)}")
    out.append(f"equation={eq}")
    if args.check and gr.is_self_adjoint(spec.matrix()):
        approx = spectral.series_green(m, w)
        bound = spectral.green_tail_bound(m, w, 1 / abs(cert))
        out.append(f"series={_fmt_complex(approx, args.digits)} tail_bound={bound:.3e}")
        if abs(approx - g) > bound + 1e-12:
            raise Failure("\n".join(out), EXIT_VERIFY)


def cmd_asymptotics(args, spec, out):
    m = _moments(args, spec, _nmax(args, spec))
    fit = spectral.asymptotic_fit(m)
    d = args.digits
    out.append(f"stride={fit.stride}")
    out.append(f"growth_base={_fmt_float(fit.growth_base, d)}")
    out.append(f"alpha={_fmt_float(fit.alpha, d)}")
    out.append(f"window={fit.window[0]}..{fit.window[1]}")
    out.append(f"residual_rms={fit.residual_rms:.3e}")
    if fit.log_factor_suspected:
        out.append("note: residuals above threshold; a logarithmic factor may be present")


def cmd_abelianize(args, spec, out):
    ab = gr.abelianize_matrix(spec.matrix())
    out.append(format_problem(ProblemSpec.from_matrix(ab)).rstrip("\n"))


COMMANDS = {
    "moments": cmd_moments,
    "series": cmd_series,
    "pipeline-check": cmd_pipeline_check,
    "guess-alg": cmd_guess_alg,
    "guess-rec": cmd_guess_rec,
    "gfun-check": cmd_gfun_check,
    "norm": cmd_norm,
    "green": cmd_green,
    "asymptotics": cmd_asymptotics,
    "abelianize": cmd_abelianize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sgr", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("problem", help="problem file, or - for stdin")
        p.add_argument("--nmax", type=int, default=None)
        p.add_argument("--method", choices=("auto", "fast", "direct"), default="auto")
        p.add_argument("--format", choices=("text", "csv"), default="text")
        p.add_argument("--digits", type=int, default=10)
        p.add_argument("--guard", type=int, default=guess.DEFAULT_GUARD)
        return p

    p = add("moments", "moment sequence a_n = Tr(P^n)")
    p.add_argument("--matrix", action="store_true", help="also print a^{ij}_n")
    add("series", "truncated R_P(z) and A_P(z)")
    add("pipeline-check", "compare the noncommutative pipeline with direct moments")
    p = add("guess-alg", "reconstruct Q(y, z) with Q(R_P(z), z) = 0")
    p.add_argument("--dy", type=int, default=2)
    p.add_argument("--dz", type=int, default=2)
    p = add("guess-rec", "reconstruct a polynomial recurrence for a_{stride k}")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--stride", default="auto")
    p.add_argument("--ode", action="store_true", help="also emit the differential equation")
    add("gfun-check", "common-denominator growth")
    for name, help_ in (("norm", "operator norm from the dominant singularity"),
                        ("green", "Green's function (1/w) R_P(1/w)")):
        p = add(name, help_)
        p.add_argument("--dy", type=int, default=4)
        p.add_argument("--dz", type=int, default=4)
        p.add_argument("--tol", type=float, default=1e-6)
        if name == "green":
            p.add_argument("--at", nargs=2, metavar=("RE", "IM"), required=True)
            p.add_argument("--check", action="store_true",
                           help="compare with the truncated series and its tail bound")
    add("asymptotics", "fit b_k ~ c lambda^k k^(-alpha-1)")
    add("abelianize", "print the abelianized problem")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=stderr)
    out: list[str] = []
    try:
        try:
            text = _read(args.problem)
        except OSError as exc:
            raise Failure(str(exc), EXIT_USAGE)
        spec = parse_problem(text)
        COMMANDS[args.command](args, spec, out)
    except Failure as exc:
        print(str(exc), file=stderr)
        return exc.code
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=stderr)
        return EXIT_RESOURCE
    except (MismatchError, PathError) as exc:
        print(f"verification failed: {exc}", file=stderr)
        return EXIT_VERIFY
    except (DomainError, ContractError, UnsupportedInputError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    print("\n".join(out), file=stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
