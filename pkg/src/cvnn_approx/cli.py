"""Command line front end: ``cvnn-approx synth|rates|check-activation|kernels|ridge-rates``.

Exit codes: 0 success, 1 a checked bound failed, 2 bad arguments,
3 activation not admissible, 4 conditioning trouble during synthesis.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import _kernels
from .activations import check_admissibility, parse_activation
from .core import ComplexCubeGrid
from .errors import ConditioningError, DimensionError, DomainError, NotAdmissibleError, ParameterError
from .ridge import random_directions, ridge_project
from .synthesis import SynthesisDiagnostics, select_M, synthesize
from .targets import TARGETS, get_target
from .trig import dirichlet, fejer, l1_norm, vallee_poussin

EXIT_OK = 0
EXIT_BOUND = 1
EXIT_ARGS = 2
EXIT_NOT_ADMISSIBLE = 3
EXIT_CONDITIONING = 4

RATE_HEADER = "m,M,neurons,sup_error,h,seconds"
FIT_FLOOR = 1e-14


def fmt(x):
    """Shortest round-trip text for a float; ``nan`` for missing values."""
    if x is None:
        return "nan"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _budgets(text):
    try:
        out = sorted(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"budgets must be comma-separated integers, got {text!r}")
    if not out or out[0] < 0:
        raise argparse.ArgumentTypeError("need at least one non-negative budget")
    return out


def _grid(args):
    if args.grid is None:
        return None
    return ComplexCubeGrid(args.n, args.grid)


def _run_synthesis(args, budget):
    """(network, diagnostics, exit code) for one budget."""
    spec = parse_activation(args.activation)
    f = get_target(args.target)
    precision = "extended" if getattr(args, "extended", False) else "double"
    try:
        net, diag = synthesize(spec, f, args.n, args.k, budget, quad_points=args.quad, grid=_grid(args), precision=precision)
    except ConditioningError as exc:
        diag = SynthesisDiagnostics(args.n, args.k, int(budget), select_M(budget, args.n), spec.ident, conditioning=True)
        diag.basis_residual = exc.best_residual
        diag.h = exc.h
        return exc.network, diag, EXIT_CONDITIONING
    return net, diag, EXIT_CONDITIONING if diag.conditioning else EXIT_OK


def cmd_synth(args):
    net, diag, code = _run_synthesis(args, args.budget)
    out = Path(args.out)
    if net is not None:
        out.write_text(net.to_json() + "\n")
    record = diag.to_dict()
    record["target"] = args.target
    record["seed"] = args.seed
    if args.no_timing:
        record["seconds"] = None
    out.with_suffix(".diagnostics.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    print(f"activation={diag.activation} M={diag.M} neurons={diag.neurons} h={fmt(diag.h)}")
    if diag.degenerate_budget:
        print("degenerate_budget=true")
    if diag.conditioning:
        print("conditioning=true", file=sys.stderr)
    print(f"error={fmt(diag.sup_error)}")
    return code


def fitted_slope(rows):
    """Least-squares slope of log error against log budget, or None with fewer than 3 rows."""
    pts = [(r[0], r[3]) for r in rows if r[1] >= 1 and math.isfinite(r[3]) and r[3] > FIT_FLOOR]
    if len(pts) < 3:
        return None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def cmd_rates(args):
    rows = []
    for budget in args.budgets:
        net, diag, code = _run_synthesis(args, budget)
        if code == EXIT_CONDITIONING and diag.sup_error is None:
            # raised before a network existed
            rows.append((budget, diag.M, 0, math.nan, math.nan, math.nan))
            continue
        seconds = math.nan if args.no_timing else diag.seconds
        rows.append((budget, diag.M, diag.neurons, diag.sup_error, math.nan if diag.h is None else diag.h, seconds))
    lines = [RATE_HEADER]
    for r in rows:
        lines.append(",".join([str(r[0]), str(r[1]), str(r[2])] + [fmt(v) for v in r[3:]]))
    slope = fitted_slope(rows)
    target = -args.k / (2 * args.n)
    if slope is not None:
        lines.append(f"#fitted_slope={fmt(slope)} #target_slope={fmt(target)}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return EXIT_OK


def cmd_check_activation(args):
    spec = parse_activation(args.activation)
    report = check_admissibility(spec, args.order)
    print(f"activation={spec.ident} base_point={report.base_point!r} method={report.method}")
    print("m\\l " + " ".join(f"{ell:>11d}" for ell in range(args.order + 1)))
    for m in range(args.order + 1):
        print(f"{m:<3d} " + " ".join(f"{report.table[(m, ell)]:11.4e}" for ell in range(args.order + 1)))
    print(f"min_modulus={report.min_modulus:.6e}")
    print(f"verdict={report.verdict}")
    return EXIT_OK if report.admissible else EXIT_NOT_ADMISSIBLE


def _print_kernel(name, kernel):
    print(f"[{name}]")
    dense = kernel.dense().real
    d = kernel.degree
    if kernel.s == 1:
        for k in range(-d, d + 1):
            print(f"{k:4d} {fmt(dense[k + d])}")
    else:
        flat = dense.reshape(2 * d + 1, -1) if kernel.s == 2 else None
        if flat is None:
            print(f"({len(kernel.coeffs)} nonzero coefficients)")
        else:
            for row in flat:
                print(" ".join(f"{v:6.3f}" for v in row))


def cmd_kernels(args):
    kernels = [("D", dirichlet(args.m, args.s)), ("F", fejer(args.m, args.s)), ("V", vallee_poussin(args.m, args.s))]
    norms = {}
    for name, kern in kernels:
        _print_kernel(f"{name}_{args.m} s={args.s}", kern)
        norms[name] = l1_norm(kern)
    for name, value in norms.items():
        print(f"l1_{name}={value:.10f}")
    bound = 3.0**args.s
    ok = norms["V"] <= bound + 1e-6
    print(f"bound={fmt(bound)} within_bound={'true' if ok else 'false'}")
    return EXIT_OK if ok else EXIT_BOUND


def _expsum(x):
    return np.exp(np.asarray(x).sum(axis=1))


def cmd_ridge_rates(args):
    basis = random_directions(args.s, max(args.counts), 1.0, args.seed)
    lines = ["directions,residual,span_complete"]
    for count in args.counts:
        proj = ridge_project(_expsum, args.s, args.cheb, basis.prefix(count), method=args.method)
        lines.append(f"{count},{fmt(proj.residual)},{str(proj.span_complete).lower()}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="cvnn-approx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def synth_options(p):
        p.add_argument("--activation", default="exp-re")
        p.add_argument("--target", required=True, choices=sorted(TARGETS))
        p.add_argument("--n", type=_positive, default=1)
        p.add_argument("--k", type=_positive, default=1)
        p.add_argument("--quad", type=_positive, default=None, help="quadrature points per axis")
        p.add_argument("--grid", type=_positive, default=None, help="evaluation grid points per axis")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--extended", action="store_true", help="accumulate weights in long double")
        p.add_argument("--no-timing", action="store_true", help="write nan instead of wall time")

    p = sub.add_parser("synth", help="synthesize one network")
    synth_options(p)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("rates", help="sweep budgets and fit the error decay")
    synth_options(p)
    p.add_argument("--budgets", type=_budgets, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("check-activation", help="tabulate mixed Wirtinger derivatives at the base point")
    p.add_argument("--activation", required=True)
    p.add_argument("--order", type=_positive, required=True)
    p.set_defaults(func=cmd_check_activation)

    p = sub.add_parser("kernels", help="print trigonometric kernels and their L1 norms")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--s", type=_positive, default=1)
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("ridge-rates", help="ridge residual of exp(sum x) against direction count")
    p.add_argument("--s", type=_positive, default=2)
    p.add_argument("--cheb", type=_positive, default=8)
    p.add_argument("--counts", type=_budgets, default=[1, 2, 4, 8])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=["sampled", "coefficients"], default="sampled")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ridge_rates)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _kernels.apply_thread_cap()
        return args.func(args)
    except NotAdmissibleError as exc:
        print(f"not admissible: {exc}", file=sys.stderr)
        return EXIT_NOT_ADMISSIBLE
    except (ParameterError, DimensionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ConditioningError as exc:
        print(f"conditioning: {exc}", file=sys.stderr)
        return EXIT_CONDITIONING


if __name__ == "__main__":
    sys.exit(main())
