"""Command-line front end: ``rieszlab <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 numerical or model
failure, 3 verification failure. Every command accepts ``--config FILE``
with a JSON object of option defaults; flags given explicitly win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .acceptance import format_report, run_suite
from .contours import CirclePath, SeparationPath
from .errors import RieszLabError
from .groups import fit_polynomial_bound, sample_integrated_group
from .models import bundled_models, decomposition_experiment, model_projectors
from .numerics import as_matrix
from .projectors import (
    default_separation_path,
    riesz_projector,
    separation_operator,
    separation_projector,
    split_spectrum,
)
from .serialization import (
    csv_text,
    format_complex,
    load_matrix,
    matrix_to_json,
    model_from_json,
    parse_complex,
    projectors_to_json,
)
from .spectra import (
    custom_spectrum,
    diophantine_constant,
    gap_profile,
    oscillator_spectrum,
    sphere_spectrum,
    summability,
    torus_spectrum,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- helpers

def _positive(name, value):
    if value is None or not value > 0:
        raise UsageError(f"--{name} must be positive, got {value}")


def _at_least_one(name, value):
    if value is None or value < 1:
        raise UsageError(f"--{name} must be at least 1, got {value}")


def _load_model(spec):
    """A bundled model name or a model JSON file."""
    models = bundled_models()
    if spec in models:
        return models[spec]
    if not os.path.exists(spec):
        raise UsageError(f"no bundled model or file named {spec!r} "
                         f"(bundled: {', '.join(sorted(models))})")
    with open(spec) as fh:
        return model_from_json(json.load(fh))


def _operator(args):
    """``(matrix, model or None)`` from ``--matrix`` or ``--model``."""
    if args.matrix and args.model:
        raise UsageError("give either --matrix or --model, not both")
    if args.matrix:
        if not os.path.exists(args.matrix):
            raise UsageError(f"matrix file {args.matrix!r} does not exist")
        return as_matrix(load_matrix(args.matrix), square=True), None
    if args.model:
        model = _load_model(args.model)
        return model.A, model
    raise UsageError("one of --matrix or --model is required")


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(text, out):
    # keep stdout clean for the data when no output file is given
    print(text, file=sys.stdout if out else sys.stderr)


def _json_text(obj):
    return json.dumps(obj, indent=1) + "\n"


def _parse_alpha(text):
    """``sqrtN``, ``cbrtN``, ``golden`` or a decimal literal."""
    t = text.strip().lower()
    if t == "golden":
        return (1.0 + math.sqrt(5.0)) / 2.0
    for prefix, root in (("sqrt", 2.0), ("cbrt", 3.0)):
        if t.startswith(prefix):
            try:
                return float(t[len(prefix):]) ** (1.0 / root)
            except ValueError:
                break
    try:
        return float(t)
    except ValueError:
        raise UsageError(f"cannot read alpha {text!r}; use sqrtN, cbrtN, golden or a number")


# ---------------------------------------------------------------- commands

def cmd_project(args):
    _at_least_one("nodes", args.nodes)
    _positive("tol", args.tol)
    a, model = _operator(args)
    if args.center is not None:
        _positive("radius", args.radius)
        path = CirclePath(parse_complex(args.center), args.radius, args.nodes)
        projs = [riesz_projector(a, path, tol=args.tol, workers=args.threads)]
        lambdas = None
    else:
        if model is None:
            raise UsageError("--center and --radius are required with --matrix")
        projs = model_projectors(model, nodes=args.nodes, workers=args.threads)
        lambdas = list(model.lambdas)
    payload = projectors_to_json(projs, lambdas)
    payload["params"] = {"nodes": args.nodes, "seed": args.seed, "version": __version__}
    _emit(_json_text(payload), args.out)
    for entry in payload["manifest"]:
        _summary(f"k={entry['k']} lambda={entry['lambda']:.6g} trace={entry['trace'][0]:.6f} "
                 f"idempotence_defect={entry['idempotence_defect']:.3e}", args.out)
    return EXIT_OK


def cmd_decompose(args):
    model = _load_model(args.model)
    n = model.n_declared if args.n is None else args.n
    if args.l < 0 or n < 0:
        raise UsageError("--l and --n must be nonnegative")
    projs = model_projectors(model, nodes=args.nodes, workers=args.threads)
    curve = decomposition_experiment(model, args.l, n, n_max=args.nmax, seed=args.seed,
                                     projectors=projs)
    meta = {"command": "decompose", "model": args.model, "l": args.l, "n": n,
            "nmax": int(curve.N[-1]), "seed": args.seed}
    _emit(csv_text(["N", "error", "tail", "ratio"], curve.rows(), meta), args.out)
    _summary(f"error(Nmax)={curve.error[-1]:.6e} Nmax={int(curve.N[-1])} ||x||={curve.x_norm:.6e}",
             args.out)
    return EXIT_OK


def cmd_separate(args):
    a, _ = _operator(args)
    if args.m < 0:
        raise UsageError("--m must be nonnegative")
    _at_least_one("segment-nodes", args.segment_nodes)
    _at_least_one("arc-nodes", args.arc_nodes)
    path = default_separation_path(a, args.segment_nodes, args.arc_nodes)
    path = SeparationPath(args.cut_radius or path.cut_radius,
                          args.outer_radius or path.outer_radius,
                          args.segment_nodes, args.arc_nodes)
    kw = {"close_tail": not args.no_tail, "workers": args.threads}
    if args.projector:
        result = separation_projector(a, args.m, path, **kw)
    else:
        result = separation_operator(a, args.m, path, **kw)
    proj = result if args.projector else result @ np.linalg.matrix_power(a, args.m + 1)
    upper, lower = split_spectrum(a, proj)
    payload = {
        "operator": "projector" if args.projector else f"P A^-{args.m + 1}",
        "m": args.m,
        "cut_radius": path.cut_radius,
        "outer_radius": path.outer_radius,
        "close_tail": not args.no_tail,
        "rank": len(upper),
        "upper_spectrum": [format_complex(z) for z in np.sort_complex(upper)],
        "lower_spectrum": [format_complex(z) for z in np.sort_complex(lower)],
        "matrix": matrix_to_json(result),
    }
    _emit(_json_text(payload), args.out)
    _summary(f"rank={len(upper)} upper={len(upper)} lower={len(lower)}", args.out)
    return EXIT_OK


def _spectrum_model(args):
    if args.spectrum == "torus":
        _positive("a", args.a)
        _positive("b", args.b)
        _positive("lam-max", args.lam_max)
        return torus_spectrum(args.a, args.b, args.lam_max, args.shift)
    if args.spectrum == "custom":
        if not args.values:
            raise UsageError("--values is required for a custom spectrum")
        values = [float(v) for v in args.values.split(",")]
        return custom_spectrum(values, shift=args.shift or 0.0)
    _at_least_one("count", args.count)
    if args.spectrum == "sphere":
        return sphere_spectrum(args.dim, args.count - 1, args.shift)
    return oscillator_spectrum(args.dim, args.count - 1, args.shift)


def cmd_gaps(args):
    if args.spectrum in ("sphere", "oscillator") and args.dim is None:
        raise UsageError("--dim is required for sphere and oscillator spectra")
    model = _spectrum_model(args)
    K = len(model) if args.count is None else min(args.count, len(model))
    report = summability(model, args.l, args.n, K)
    deltas = gap_profile(model).deltas
    rows = ((k, float(model.eigenvalues[k]), int(model.multiplicities[k]), float(deltas[k]),
             float(report.terms[k]), float(report.partial_sums[k])) for k in range(K))
    meta = {"command": "gaps", "spectrum": args.spectrum, "l": args.l, "n": args.n,
            "count": K, "shift": model.shift, "seed": args.seed}
    meta.update({k: v for k, v in model.params.items() if k not in meta})
    header = ["k", "lambda", "multiplicity", "delta", "term", "partial_sum"]
    _emit(csv_text(header, rows, meta), args.out)
    _summary(f"verdict={report.verdict} tail_exponent={report.fitted_tail_exponent:.4f}", args.out)
    return EXIT_OK


def cmd_diophantine(args):
    alpha = _parse_alpha(args.alpha)
    if args.degree < 2:
        raise UsageError("--degree must be at least 2")
    if args.qmax < 10:
        raise UsageError("--qmax must be at least 10")
    est = diophantine_constant(alpha, args.degree, args.qmax)
    _emit(_json_text(est.to_dict()), args.out)
    _summary(f"c_est={est.c_est:.6f} p={est.p} q={est.q}", args.out)
    return EXIT_OK


def cmd_group(args):
    a, _ = _operator(args)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    _positive("tmax", args.tmax)
    if args.samples < 3:
        raise UsageError("--samples must be at least 3")
    times = np.linspace(-args.tmax, args.tmax, args.samples)
    sample = sample_integrated_group(a, args.n, times)
    header = ["t", "norm"]
    d = a.shape[0]
    if args.full:
        header += [f"{part}{i}_{j}" for i in range(d) for j in range(d) for part in ("re", "im")]
    rows = []
    for t, nrm, s in zip(sample.times, sample.norms, sample.values):
        row = [float(t), float(nrm)]
        if args.full:
            row += [float(x) for z in s.ravel() for x in (z.real, z.imag)]
        rows.append(row)
    meta = {"command": "group", "n": args.n, "tmax": args.tmax, "samples": args.samples,
            "seed": args.seed}
    _emit(csv_text(header, rows, meta), args.out)
    if args.fit:
        fit = fit_polynomial_bound(sample)
        _summary(f"m={fit.m:.6f} degree={fit.degree} M={fit.M:.6e} residual={fit.residual:.3e}",
                 args.out)
    return EXIT_OK


def cmd_verify(args):
    if args.tolerance is not None:
        _positive("tolerance", args.tolerance)
    results = run_suite(seed=args.seed, tol_override=args.tolerance, filter_text=args.filter)
    if not results:
        raise UsageError(f"no criterion matches filter {args.filter!r}")
    _emit(format_report(results), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------- parser

def _common(p):
    p.add_argument("--config", help="JSON file of option defaults")
    p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads for contour nodes (default: all cores)")
    p.add_argument("--out", help="output file (default: stdout)")


def _operator_args(p):
    p.add_argument("--matrix", help="matrix JSON file")
    p.add_argument("--model", help="bundled model name or model JSON file")


def build_parser():
    parser = _Parser(prog="rieszlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rieszlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = subs["project"] = sub.add_parser("project", help="Riesz projectors on circles")
    _operator_args(p)
    p.add_argument("--center", help="circle centre, a+bi")
    p.add_argument("--radius", type=float)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-8, help="idempotence tolerance")
    p.set_defaults(func=cmd_project)

    p = subs["decompose"] = sub.add_parser("decompose", help="spectral decomposition error curve")
    p.add_argument("--model", default="oscillator")
    p.add_argument("--l", type=int, default=1, help="smoothing order ell")
    p.add_argument("--n", type=int, help="integration order (default: from the model)")
    p.add_argument("--nmax", type=int, help="number of partial sums (default: all)")
    p.add_argument("--nodes", type=int, default=64)
    p.set_defaults(func=cmd_decompose)

    p = subs["separate"] = sub.add_parser("separate", help="half-plane separation operator")
    _operator_args(p)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--cut-radius", type=float)
    p.add_argument("--outer-radius", type=float)
    p.add_argument("--segment-nodes", type=int, default=128)
    p.add_argument("--arc-nodes", type=int, default=32)
    p.add_argument("--no-tail", action="store_true", help="skip the closed |t| > R tail")
    p.add_argument("--projector", action="store_true", help="output the projector itself")
    p.set_defaults(func=cmd_separate)

    p = subs["gaps"] = sub.add_parser("gaps", help="gap profile and summability of a spectrum")
    p.add_argument("--spectrum", choices=["sphere", "oscillator", "torus", "custom"],
                   default="oscillator")
    p.add_argument("--dim", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--lam-max", type=float)
    p.add_argument("--values", help="comma-separated eigenvalues for a custom spectrum")
    p.add_argument("--shift", type=float)
    p.set_defaults(func=cmd_gaps)

    p = subs["diophantine"] = sub.add_parser("diophantine", help="Diophantine constant estimate")
    p.add_argument("--alpha", default="sqrt2")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--qmax", type=int, default=10**5)
    p.set_defaults(func=cmd_diophantine)

    p = subs["group"] = sub.add_parser("group", help="sample an integrated group")
    _operator_args(p)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--tmax", type=float, default=50.0)
    p.add_argument("--samples", type=int, default=401)
    p.add_argument("--fit", action="store_true", help="fit ||S(t)|| <= M (1 + |t|^m)")
    p.add_argument("--full", action="store_true", help="include the flattened matrix")
    p.set_defaults(func=cmd_group)

    p = subs["verify"] = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--filter", help="criterion group, key or number")
    p.add_argument("--tolerance", type=float, help="override every numeric tolerance")
    p.set_defaults(func=cmd_verify)

    for p in subs.values():
        _common(p)
    return parser, subs


def _load_config(path):
    if not os.path.exists(path):
        raise UsageError(f"config file {path!r} does not exist")
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {path!r} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help, --version and usage errors
            return int(exc.code or 0)
        if args.config:
            cfg = _load_config(args.config)
            known = set(vars(args))
            unknown = sorted(set(cfg) - known)
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(unknown)}")
            subs[args.command].set_defaults(**cfg)
            args = parser.parse_args(argv)
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"rieszlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RieszLabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"rieszlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, ValueError) as exc:
        print(f"rieszlab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
