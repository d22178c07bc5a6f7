"""Command-line front end.

Every subcommand writes one table, either CSV (header row, RFC-4180 quoting)
or JSON (an array of objects).  Floats are written with ``repr``, the
shortest string that round-trips, so identical invocations give
byte-identical files.  Complex values are split into ``*_re``/``*_im``
columns.

Exit status: 0 on success, 1 on a usage error, 2 on a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, criticals, locus, oracle
from .airyfn import SQRT3
from .detcore import TOL_DET, det
from .errors import NumericalError, UsageError

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2

SNAPSHOT_EPS = (3.0, 10.0, 13.0, 100.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- formatting ---------------------------------------------------------------


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # JSON has no inf/nan literals
        return v if math.isfinite(v) else repr(v)
    return v


def render(columns, rows, fmt: str) -> str:
    if fmt == "json":
        objs = [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows]
        return json.dumps(objs, indent=1, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(columns, rows, args):
    fmt = args.format or ("json" if args.out and str(args.out).endswith(".json") else "csv")
    text = render(columns, rows, fmt)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


# -- argument helpers ----------------------------------------------------------


def _positive(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {s!r}")
    return v


def _nonneg(s: str) -> float:
    v = float(s)
    if v < 0 or math.isnan(v):
        raise argparse.ArgumentTypeError(f"must be non-negative: {s!r}")
    return v


def _count(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s!r}")
    return v


def _eps_range(s: str):
    """``start:end[:h0]``; an empty start means the per-branch default."""
    parts = s.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("expected start:end or start:end:h0")
    start = None if parts[0] == "" else _positive(parts[0])
    end = _positive(parts[1])
    h0 = _positive(parts[2]) if len(parts) == 3 else None
    if start is not None and end <= start:
        raise argparse.ArgumentTypeError("end must exceed start")
    return start, end, h0


def _a_range(s: str):
    parts = s.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected a_min:a_max:step")
    lo, hi, step = float(parts[0]), float(parts[1]), _positive(parts[2])
    if not lo < -SQRT3 < SQRT3 < hi:
        raise argparse.ArgumentTypeError("the a-range must contain [-sqrt(3), sqrt(3)]")
    return lo, hi, step


def _eps_list(s: str):
    return tuple(_positive(p) for p in s.split(",") if p.strip())


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys are allowed."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


# -- parser ----------------------------------------------------------------------


def _common(p):
    g = p.add_argument_group("output and tolerances")
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), help="default: json if --out ends in .json, else csv")
    g.add_argument("--config", help="flat key = value file; flags override it, it overrides defaults")
    g.add_argument("--tol-det", type=_positive, default=TOL_DET,
                   help="accept a point when |D| <= tol * scale (default %(default)g)")
    g.add_argument("--tol-ray", type=_positive, default=1e-10,
                   help="max angular offset (rad) of a ray zero from arg z = pi/3 (default %(default)g)")
    g.add_argument("--seed-scale", type=_positive, default=1.0,
                   help="multiplier on asymptotic Newton seeds for ray zeros (default %(default)g)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="ptairy", description="Spectral locus of -y''/eps + i x y on [-1, 1], y(+-1) = 0.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "trace", help="follow one eigenvalue branch in eps",
        description="Trace branch k (numbered by increasing eigenvalue at small eps). "
        "Columns: branch, eps, lambda_re, lambda_im, event. Point rows have an empty event; "
        "event rows carry knot_crossing, turning, collision or complexified. eps is dimensionless.",
    )
    p.add_argument("--branch", type=_count, required=True)
    p.add_argument("--eps", type=_eps_range, default=(None, 14.0, None), metavar="START:END[:H0]",
                   help="eps range and initial step; empty START picks a safe small value")
    _common(p)

    p = sub.add_parser(
        "criticals", help="knot-crossing values delta_k and collision values eps_k",
        description="Columns: k, alpha, beta, delta, eps. alpha_k and beta_k are the moduli of the "
        "k-th nonzero zeros of U_- = -sqrt(3) Ai + Bi and U_+ = sqrt(3) Ai + Bi on arg z = pi/3; "
        "eps_k = (alpha_k sqrt(3)/2)^3, delta_k = (beta_k sqrt(3)/2)^3. "
        + criticals.INDEXING_NOTE + ". With --asymptotic, eps_asym and delta_asym columns are added.",
    )
    p.add_argument("--kmax", type=_count, default=5)
    p.add_argument("--asymptotic", action="store_true")
    _common(p)

    p = sub.add_parser(
        "bounds", help="small-eps reality threshold, or turning-point bounds",
        description="Given norms of the potential on [-1, 1], report eps_max below which the spectrum "
        "is real and simple. Columns: eps_max, binding_norm, c_inf, c_1, c_2, tail_error_1, "
        "tail_error_2. With --turning K the table instead lists k, z_re, z_im, bound where z_k is "
        "the k-th first-quadrant zero of Bi and bound = cot(arg z_k).",
    )
    p.add_argument("--norm-inf", type=_nonneg)
    p.add_argument("--norm-1", type=_nonneg)
    p.add_argument("--norm-2", type=_nonneg)
    p.add_argument("--turning", type=_count, metavar="K")
    _common(p)

    p = sub.add_parser(
        "oracle", help="eigenvalues from a dense discretization",
        description="Columns: eps, index, lambda_re, lambda_im, trusted; with --cross-check also "
        "root_re, root_im, delta (Newton refinement on the determinant and its distance). "
        "Eigenvalues are sorted by real part, then imaginary part.",
    )
    p.add_argument("--eps", type=_eps_list, default=(1.0, 5.0, 12.0), metavar="E1,E2,...")
    p.add_argument("--n", type=int, default=64, help="interior grid points (8..512)")
    p.add_argument("--scheme", choices=[s.value for s in oracle.Scheme], default="chebyshev")
    p.add_argument("--count", type=_count, default=5)
    p.add_argument("--cross-check", action="store_true")
    _common(p)

    p = sub.add_parser(
        "figures", help="data files for the standard plots",
        description="dynamics: eps, index, lambda_re, lambda_im, source at each snapshot eps. "
        "real-locus: branch, eps, lambda (real segments only). "
        "gamma-arcs: k, a, xi_re, xi_im, eps, lambda, mark (critical at a = -sqrt(3), knot at a = sqrt(3)).",
    )
    p.add_argument("which", choices=("dynamics", "real-locus", "gamma-arcs"))
    p.add_argument("--kmax", type=_count, help="branches (default 6) or arcs (default 3)")
    p.add_argument("--eps-max", type=_positive, default=130.0, help="real-locus eps range end")
    p.add_argument("--snapshots", type=_eps_list, default=SNAPSHOT_EPS, metavar="E1,E2,...")
    p.add_argument("--count", type=_count, default=8, help="eigenvalues per snapshot")
    _common(p)

    p = sub.add_parser(
        "gamma", help="zero arcs xi_k(a) of V_a = a Ai + Bi",
        description="Columns: k, a, xi_re, xi_im, eps, lambda, mark. (eps, lambda) = "
        "(|Im xi|^3, Re xi / |Im xi|) is the matching real locus point.",
    )
    p.add_argument("--kmax", type=_count, default=3)
    p.add_argument("--a", type=_a_range, default=(-SQRT3 - 1, SQRT3 + 1, 0.05), metavar="MIN:MAX:STEP")
    _common(p)
    return top


def _subparser(top, command):
    for action in top._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def parse(argv) -> argparse.Namespace:
    top = build_parser()
    args = top.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        sp = _subparser(top, args.command)
        actions = {a.dest: a for a in sp._actions if a.dest not in ("help", "config")}
        for key in cfg:
            if key not in actions:
                raise UsageError(f"unknown config key {key!r} for {args.command}")
        defaults = {}
        for key, raw in cfg.items():
            a = actions[key]
            if isinstance(a, argparse._StoreTrueAction):
                defaults[key] = raw.lower() in ("1", "true", "yes", "on")
                continue
            try:
                value = a.type(raw) if a.type else raw
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"config key {key}: {exc}") from exc
            if a.choices is not None and value not in a.choices:
                raise UsageError(f"config key {key}: {value!r} not in {sorted(a.choices)}")
            defaults[key] = value
        sp.set_defaults(**defaults)
        args = top.parse_args(argv)
    return args


# -- commands ---------------------------------------------------------------------


def _check_points(points, eps_of, lam_of, tol):
    for p in points:
        v = det(eps_of(p), lam_of(p))
        if abs(v.d) > tol * v.scale:
            raise NumericalError(f"|D| = {abs(v.d):.3e} exceeds tol-det at eps={eps_of(p)!r}")


def cmd_trace(args):
    start, end, h0 = args.eps
    ctrl = locus.StepControl() if h0 is None else locus.StepControl(h0=h0)
    b = locus.trace_branch(args.branch, start, end, ctrl)
    _check_points(b.points, lambda p: p[0], lambda p: p[1], args.tol_det)
    rows = [(b.k, e, lam.real, lam.imag, "") for e, lam in b.points]
    rows += [(b.k, ev.eps, ev.lam.real, ev.lam.imag, ev.kind) for ev in b.events]
    # points first at equal eps; sort is stable
    rows.sort(key=lambda r: (r[1], r[4] != ""))
    _emit(("branch", "eps", "lambda_re", "lambda_im", "event"), rows, args)


def cmd_criticals(args):
    t = criticals.build_table(args.kmax, ray_tol=args.tol_ray, seed_scale=args.seed_scale)
    cols = ["k", "alpha", "beta", "delta", "eps"]
    rows = [[r.k, r.alpha, r.beta, r.delta, r.eps] for r in t.rows]
    if args.asymptotic:
        cols += ["eps_asym", "delta_asym"]
        for row, (_, e, d) in zip(rows, criticals.asymptotic_table(args.kmax)):
            row += [e, d]
    _emit(cols, rows, args)


def cmd_bounds(args):
    if args.turning:
        rows = [(t.k, t.z_k.real, t.z_k.imag, t.bound) for t in bounds.turning_bounds(args.turning)]
        _emit(("k", "z_re", "z_im", "bound"), rows, args)
        return
    norms = bounds.NormTriple(args.norm_inf, args.norm_1, args.norm_2)
    c = bounds.compute_constants()
    eps_max, which = bounds.similarity_threshold(norms, c)
    _emit(
        ("eps_max", "binding_norm", "c_inf", "c_1", "c_2", "tail_error_1", "tail_error_2"),
        [(eps_max, which, c.c_inf, c.c_1, c.c_2, c.tail_error_1, c.tail_error_2)],
        args,
    )


def cmd_oracle(args):
    cfg = oracle.DiscretizationConfig(args.n, args.scheme)
    cols = ["eps", "index", "lambda_re", "lambda_im", "trusted"]
    if args.cross_check:
        cols += ["root_re", "root_im", "delta"]
    rows = []
    for eps in args.eps:
        spec = oracle.oracle_spectrum(eps, cfg, args.count)
        report = oracle.cross_check(eps, args.count, cfg) if args.cross_check else None
        for i, lam in enumerate(spec.eigenvalues):
            row = [eps, i + 1, lam.real, lam.imag, i < spec.trust_count]
            if report is not None:
                r = report.roots[i]
                row += [r.real, r.imag, report.deltas[i]]
            rows.append(row)
    _emit(cols, rows, args)


def _gamma_rows(k_max, a_range):
    lo, hi, step = a_range
    rows = []
    for k in range(1, k_max + 1):
        arc = locus.trace_gamma(k, lo, hi, step)
        for i, (a, xi) in enumerate(arc.samples):
            eps, lam = locus.gamma_to_locus(xi)
            mark = "critical" if i == arc.critical_index else "knot" if i == arc.knot_index else ""
            rows.append((k, a, xi.real, xi.imag, eps, lam, mark))
    return ("k", "a", "xi_re", "xi_im", "eps", "lambda", "mark"), rows


def cmd_gamma(args):
    cols, rows = _gamma_rows(args.kmax, args.a)
    _emit(cols, rows, args)


def dynamics_snapshots(eps_values=SNAPSHOT_EPS, count: int = 8, n: int = 128):
    """Lowest ``count`` eigenvalues at each eps, refined on the determinant where possible."""
    cfg = oracle.DiscretizationConfig(n)
    rows = []
    for eps in eps_values:
        spec = oracle.oracle_spectrum(eps, cfg, count)
        for i, lam in enumerate(spec.eigenvalues):
            source = "oracle"
            try:
                r = locus._correct(eps, complex(lam), 1e-13, 40)
                if abs(r - lam) < 1e-6 * max(1.0, abs(lam)):
                    lam, source = r, "det"
            except (NumericalError, UsageError):
                pass
            rows.append((eps, i + 1, lam.real, lam.imag, source))
    return ("eps", "index", "lambda_re", "lambda_im", "source"), rows


def real_locus_rows(k_max: int = 6, eps_max: float = 130.0):
    loc = locus.export_real_locus(k_max, eps_max)
    return ("branch", "eps", "lambda"), loc.rows


def emit_figure_data(which: str, args) -> None:
    if which == "dynamics":
        cols, rows = dynamics_snapshots(args.snapshots, args.count)
    elif which == "real-locus":
        cols, rows = real_locus_rows(args.kmax or 6, args.eps_max)
    else:
        cols, rows = _gamma_rows(args.kmax or 3, (-SQRT3 - 1, SQRT3 + 1, 0.05))
    _emit(cols, rows, args)


def cmd_figures(args):
    emit_figure_data(args.which, args)


COMMANDS = {
    "trace": cmd_trace,
    "criticals": cmd_criticals,
    "bounds": cmd_bounds,
    "oracle": cmd_oracle,
    "figures": cmd_figures,
    "gamma": cmd_gamma,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    return EXIT_OK
