"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 input parse error, 3 resource cap or precision
failure, 4 regression mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .algnum import DependencePrecisionError, IsolationError
from .config import ConfigError, RunConfig, load_config
from .linalg import MatrixFormatError, n_rank, parse_matrix, smith_normal_form

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_USAGE, f"{self.prog}: error: {message}")


def fmt_real(x) -> str:
    return "" if x is None else f"{x:.12g}"


class CsvOut:
    def __init__(self, stream, header):
        self.w = csv.writer(stream, lineterminator="\n")
        self.w.writerow(header)

    def row(self, *values):
        self.w.writerow([fmt_real(v) if isinstance(v, float) else
                         ("" if v is None else str(v)) for v in values])


def _emit(cfg: RunConfig, out, header, rows, meta=None):
    """Write rows as CSV (header first) or as one JSON document."""
    if cfg.format == "json":
        doc = dict(meta or {})
        doc["columns"] = header
        doc["rows"] = [[fmt_real(v) if isinstance(v, float) else v for v in r] for r in rows]
        json.dump(doc, out, indent=2, default=str)
        out.write("\n")
        return
    w = CsvOut(out, header)
    for r in rows:
        w.row(*r)
    if meta:
        for k, v in meta.items():
            print(f"# {k}: {fmt_real(v) if isinstance(v, float) else v}", file=sys.stderr)


def _read_matrix(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read matrix file: {exc}") from None
    try:
        return parse_matrix(text)
    except (MatrixFormatError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"matrix parse error: {exc}") from None


def _curve(spec: str | None, args=None):
    from .ecfield import EllipticCurve

    try:
        if spec:
            return EllipticCurve.parse(spec)
        if args is not None and args.p is not None and args.a is not None and args.b is not None:
            return EllipticCurve(args.p, args.k or 1, args.a, args.b)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"curve parse error: {exc}") from None
    raise CliError(EXIT_USAGE, "give a curve as p^k:a,b or with --p/--k/--a/--b")


def _fit_meta(series):
    meta = {}
    pts = [p for p in series if p.gcd > 0]
    if len(pts) >= 2:
        s, rms = series.slope()
        meta.update(slope=s, rms=rms)
    return meta


def _fit_line_for_plot(series):
    pts = [p for p in series if p.gcd > 0]
    if len(pts) < 2:
        return None
    top = pts[len(pts) // 2:]
    s, _ = series.slope()
    mx = sum(p.n for p in top) / len(top)
    my = sum(p.log_gcd for p in top) / len(top)
    return s, my - s * mx, top[0].n, top[-1].n


# -- commands -----------------------------------------------------------------

def cmd_classify(args, cfg, out):
    from .spectral import classify_all, corollary_check, spectral_profile

    A = _read_matrix(args.matrix)
    prof = spectral_profile(A, bound=cfg.bound, precision=cfg.precision,
                            degree_cap=cfg.degree_cap, workers=cfg.threads)
    rows = classify_all(A, profile=prof)
    cc = corollary_check(A, profile=prof)
    doc = {
        "matrix": A.tolist(),
        "profile": prof.to_json(),
        "verdicts": [v.to_json() for v in rows],
        "corollary": None if cc is None else {"e": cc.e, "f": cc.f, "consistent": cc.consistent},
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def cmd_nrank(args, cfg, out):
    A = _read_matrix(args.matrix)
    snf = smith_normal_form(A)
    rows = [(N, n_rank(A, N)) for N in args.N]
    _emit(cfg, out, ["N", "n_rank"], rows, {"smith_diagonal": " ".join(map(str, snf.diag))})


def cmd_ord(args, cfg, out):
    from .order import ord_r

    A = _read_matrix(args.matrix)
    rows = []
    for N in args.N:
        try:
            res = ord_r(A, N, args.r, max_states=cfg.n_budget)
        except MemoryError as exc:
            raise CliError(EXIT_CAP, f"ord: {exc}") from None
        rows.append((N, args.r, str(res)))
    _emit(cfg, out, ["N", "r", "ord"], rows)


def cmd_growth(args, cfg, out):
    from .order import gcd_growth_series

    A = _read_matrix(args.matrix)
    series = gcd_growth_series(A, args.r, cfg.n_max)
    rows = [(p.n, p.gcd, p.log_gcd) for p in series]
    meta = _fit_meta(series)
    _emit(cfg, out, ["n", "gcd", "log_gcd"], rows, meta)
    if args.figure:
        from .report import plot_log_gcd

        plot_log_gcd(args.figure, [p.n for p in series], [p.log_gcd for p in series],
                     f"gcd of {args.r + 1}-minors of A^n - I", fit=_fit_line_for_plot(series))


def cmd_kinv(args, cfg, out):
    from math import factorial

    from .order import invariants_of_power

    A = _read_matrix(args.matrix)
    d = A.dim
    df = factorial(d)
    rows, found = [], None
    for n in range(1, cfg.n_max + 1):
        alphas = invariants_of_power(A, n)
        hit = all(pow(abs(a), df // k, args.N) == 0 for k, a in enumerate(alphas, start=1))
        rows.append((n, *alphas, int(hit)))
        if hit:
            found = n
            break
    header = ["n"] + [f"alpha_{k}" for k in range(1, d + 1)] + ["divisible"]
    _emit(cfg, out, header, rows, {"k": found if found is not None else "not found"})


def cmd_lemma(args, cfg, out):
    from .order import lemma_gcd_check

    try:
        series = lemma_gcd_check(args.lam, args.eta, args.k, cfg.n_max)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"lemma-check: {exc}") from None
    rows, worst = [], None
    for p in series:
        ratio = p.log_gcd / math.log(p.n) if p.n > 1 and p.log_gcd is not None else None
        if ratio is not None:
            worst = ratio if worst is None else max(worst, ratio)
        rows.append((p.n, p.gcd, p.log_gcd, ratio))
    _emit(cfg, out, ["n", "gcd", "log_gcd", "log_gcd_over_log_n"], rows,
          {"max_ratio": worst})
    if args.figure:
        from .report import plot_log_gcd

        plot_log_gcd(args.figure, [p.n for p in series], [p.log_gcd for p in series],
                     f"gcd(lambda^n - 1, det C_n,{args.k}) for lambda={args.lam}, eta={args.eta}")


def cmd_witness(args, cfg, out):
    from .spectral import spectral_profile
    from .order import exceptional_witness_series

    A = _read_matrix(args.matrix)
    prof = spectral_profile(A, bound=cfg.bound, precision=cfg.precision,
                            degree_cap=cfg.degree_cap, workers=cfg.threads)
    try:
        ws = exceptional_witness_series(A, args.r, cfg.n_max, profile=prof)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, f"witness: {exc}") from None
    rows = [(p.n, ws.m, p.gcd, p.log_gcd) for p in ws.series]
    meta = {"m": ws.m, "reference_slope": ws.reference_slope}
    meta.update(_fit_meta(ws.series))
    _emit(cfg, out, ["n", "m", "gcd", "log_gcd"], rows, meta)
    if args.figure:
        from .report import plot_log_gcd

        plot_log_gcd(args.figure, [p.n for p in ws.series], [p.log_gcd for p in ws.series],
                     f"witness subsequence n = 0 mod {ws.m}", reference=ws.reference_slope,
                     fit=_fit_line_for_plot(ws.series))


def cmd_ec_structure(args, cfg, out):
    from .ecfield import group_structure, trace

    E = _curve(args.curve, args)
    t = trace(E)
    ns = [args.n] if args.n else range(1, cfg.n_max + 1)
    rows = []
    for n in ns:
        gs = group_structure(E, n, seed=cfg.seed)
        rows.append((n, gs.card, gs.m, gs.l, gs.mode))
    _emit(cfg, out, ["n", "card", "m", "l", "mode"], rows,
          {"curve": E.format(), "trace": t})


def cmd_ec_growth(args, cfg, out):
    from .ecfield import exponent_growth_experiment, is_ordinary

    E = _curve(args.curve, args)
    pts = exponent_growth_experiment(E, cfg.n_max, seed=cfg.seed)
    rows = [(p.n, p.card, p.m, p.l, p.mode, p.ratio, p.floor) for p in pts]
    _emit(cfg, out, ["n", "card", "m", "l", "mode", "ratio", "floor"], rows,
          {"curve": E.format(), "ordinary": is_ordinary(E)})
    if args.figure:
        from .report import plot_ratio

        plot_ratio(args.figure, [p.n for p in pts], [p.ratio for p in pts],
                   [p.floor for p in pts], f"exponent growth, {E.format()}")


def _trace_pair(args):
    from .ecfield import trace

    if args.t1 is not None or args.t2 is not None:
        if args.t1 is None or args.t2 is None or args.q is None:
            raise CliError(EXIT_USAGE, "--t1, --t2 and --q go together")
        return args.t1, args.t2, args.q
    if len(args.curves) != 2:
        raise CliError(EXIT_USAGE, "give two curves or --t1/--t2/--q")
    E1, E2 = (_curve(c) for c in args.curves)
    if (E1.p, E1.k) != (E2.p, E2.k):
        raise CliError(EXIT_USAGE, "curves are over different fields")
    return trace(E1), trace(E2), E1.q


def cmd_ec_gcd(args, cfg, out):
    from .ecfield import TraceSequence, card_extension, gcd_orders_experiment

    try:
        t1, t2, q = _trace_pair(args)
        s1, s2 = TraceSequence(t1, q), TraceSequence(t2, q)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    series = gcd_orders_experiment(t1, t2, q, cfg.n_max)
    rows = [(p.n, card_extension(s1, p.n), card_extension(s2, p.n), p.gcd, p.log_gcd)
            for p in series]
    meta = {"t1": t1, "t2": t2, "q": q}
    meta.update(_fit_meta(series))
    _emit(cfg, out, ["n", "card1", "card2", "gcd", "log_gcd"], rows, meta)
    if args.figure:
        from .report import plot_log_gcd

        plot_log_gcd(args.figure, [p.n for p in series], [p.log_gcd for p in series],
                     f"gcd of point counts, t={t1} vs t={t2} over F_{q}",
                     fit=_fit_line_for_plot(series))


def cmd_ec_isogeny(args, cfg, out):
    from .ecfield import closure_exponent

    try:
        t1, t2, q = _trace_pair(args)
        a = closure_exponent(t1, t2, q)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    _emit(cfg, out, ["t1", "t2", "q", "isogenous", "closure_a"],
          [(t1, t2, q, int(t1 == t2), a if a is not None else "none")])


def cmd_regression(args, cfg, out):
    from .regression import run_regression

    failed = 0
    for name, ok, detail in run_regression():
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=out)
        failed += not ok
    print(f"{failed} failure(s)", file=out)
    if failed:
        raise CliError(EXIT_MISMATCH, f"{failed} regression case(s) failed")


# -- parser -------------------------------------------------------------------

def _add_common(p, figure=False):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--precision", type=int)
    p.add_argument("--bound", type=int, help="dependence exponent search bound")
    p.add_argument("--nmax", type=int, dest="n_max")
    p.add_argument("--budget", type=int, dest="n_budget", help="state budget for ord")
    p.add_argument("--degree-cap", type=int, dest="degree_cap")
    p.add_argument("--seed", type=int)
    if figure:
        p.add_argument("--figure", metavar="PATH", help="also write a PNG figure")


def _add_curve_flags(p):
    p.add_argument("curve", nargs="?", help="curve as p^k:a,b")
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nrank", description="N-rank, r-order and elliptic-curve growth tools")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classify", help="spectral profile and verdict table (JSON)")
    p.add_argument("matrix")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nrank", help="N-rank for one or more N")
    p.add_argument("matrix")
    p.add_argument("--N", type=int, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_nrank)

    p = sub.add_parser("ord", help="r-order modulo N")
    p.add_argument("matrix")
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.add_argument("--r", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_ord)

    p = sub.add_parser("growth", help="gcd of (r+1)-minors of A^n - I")
    p.add_argument("matrix")
    p.add_argument("--r", type=int, required=True)
    _add_common(p, figure=True)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("kinv", help="least n with N | alpha_{n,k}^(d!/k)")
    p.add_argument("matrix")
    p.add_argument("--N", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_kinv)

    p = sub.add_parser("lemma-check", help="gcd(lambda^n - 1, det C_{n,k}(eta))")
    p.add_argument("--lam", type=int, required=True)
    p.add_argument("--eta", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    _add_common(p, figure=True)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("witness", help="growth along n = 0 mod m for an exceptional class")
    p.add_argument("matrix")
    p.add_argument("--r", type=int, required=True)
    _add_common(p, figure=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("ec-structure", help="group structure (m, l) over F_{q^n}")
    _add_curve_flags(p)
    p.add_argument("--n", type=int, help="single extension degree (default 1..nmax)")
    _add_common(p)
    p.set_defaults(func=cmd_ec_structure)

    p = sub.add_parser("ec-growth", help="log l / (n log q) for n = 1..nmax")
    _add_curve_flags(p)
    _add_common(p, figure=True)
    p.set_defaults(func=cmd_ec_growth)

    for name, func, helptext in (("ec-gcd", cmd_ec_gcd, "gcd of point counts of two curves"),
                                 ("ec-isogeny", cmd_ec_isogeny, "isogeny over F_q and its closure")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("curves", nargs="*", help="two curves as p^k:a,b")
        p.add_argument("--t1", type=int)
        p.add_argument("--t2", type=int)
        p.add_argument("--q", type=int)
        _add_common(p, figure=(name == "ec-gcd"))
        p.set_defaults(func=func)

    p = sub.add_parser("paper-regression", help="rerun the bundled worked examples")
    _add_common(p)
    p.set_defaults(func=cmd_regression)
    return ap


_CONFIG_KEYS = ("format", "precision", "bound", "n_max", "n_budget", "degree_cap", "seed")


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    from .ecfield import BudgetExceeded
    from .spectral import SingularMatrixError
    from .poly import DegreeCapError

    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise CliError(EXIT_USAGE, "nrank: a command is required (see --help)")
        try:
            cfg = load_config(args.config, **{k: getattr(args, k, None) for k in _CONFIG_KEYS})
        except OSError as exc:
            raise CliError(EXIT_PARSE, f"cannot read config: {exc}") from None
        except ConfigError as exc:
            raise CliError(EXIT_PARSE, f"config error: {exc}") from None
        args.func(args, cfg, out)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except DegreeCapError as exc:
        print(f"factorization stage: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DependencePrecisionError, IsolationError) as exc:
        print(f"eigenvalue stage: {exc}", file=sys.stderr)
        return EXIT_CAP
    except BudgetExceeded as exc:
        print(f"point counting stage: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SingularMatrixError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
