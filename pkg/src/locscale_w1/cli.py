"""Command-line interface: ``locscale-w1 <command> ...``.

Commands: exact, bounds, dp, sweep, figure, verify. Results go to stdout
(JSON by default for single evaluations, CSV for tables) or to ``--out``.
Exit codes: 0 success, 1 verification failure, 2 usage or validation
error (with a one-line message on stderr).
"""

import argparse
import json
import math
import os
import sys
import warnings

from . import __version__
from .dp import (
    DpMechanism,
    Mechanism,
    dp_bound_improved,
    dp_bound_legacy,
    dp_exact_gaussian,
    dp_laplace_gauss_approx,
    dp_report,
    noise_scale,
    noise_w1_cost,
)
from .errors import ConvergenceError, DomainError, FamilyMismatchError
from .estimator import McConfig
from .families import Family, FamilyTag, LocScale, SHAPED
from .figures import FIGURE_IDS, figure_table
from .sweep import DEFAULT_DIGITS, TARGETS, Problem, SweepSpec, format_cell, run_sweep, to_csv, write_atomic
from .wasserstein import bound_set, w1_exact

SEED_ENV = "LOCSCALE_W1_SEED"

DEFAULT_DELTA = 1e-2
DEFAULT_SENSITIVITY = 1.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- argument helpers ---------------------------------------------------------

def parse_dist(text: str):
    """``loc=2,scale=5`` -> (2.0, 5.0); both keys required."""
    vals = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("loc", "scale"):
            raise UsageError(f"bad distribution {text!r}; expected loc=<x>,scale=<y>")
        try:
            vals[key] = float(val)
        except ValueError:
            raise UsageError(f"bad number {val!r} in {text!r}") from None
    if set(vals) != {"loc", "scale"}:
        raise UsageError(f"distribution {text!r} needs both loc and scale")
    return vals["loc"], vals["scale"]


def resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _family(args) -> Family:
    try:
        tag = FamilyTag(args.family)
    except ValueError:
        raise UsageError(f"unknown family {args.family!r}") from None
    return Family(tag, args.shape if tag in SHAPED else None)


def _pair(args):
    if args.d1 is None or args.d2 is None:
        raise UsageError("--d1 and --d2 are required")
    fam = _family(args)
    return LocScale(fam, *args.d1), LocScale(fam, *args.d2)


def _mechanism(args, required=True):
    if args.mechanism is None:
        if required:
            raise UsageError("--mechanism is required")
        return None
    if args.epsilon is None:
        raise UsageError("--epsilon is required with --mechanism")
    if args.mechanism == "laplace":
        if args.delta is not None:
            raise UsageError("--delta applies to the gaussian mechanism only")
        return DpMechanism.laplace(args.epsilon, args.sensitivity)
    delta = DEFAULT_DELTA if args.delta is None else args.delta
    return DpMechanism.gaussian(args.epsilon, delta, args.sensitivity,
                                allow_large_epsilon=args.allow_large_epsilon)


def _num(v, digits=DEFAULT_DIGITS):
    """Round floats to the output precision for JSON."""
    if v is None or isinstance(v, (bool, str)):
        return v
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(format_cell(v, digits))


def _echo(args, x1=None, x2=None):
    out = {"command": args.command}
    if x1 is not None:
        out["family"] = x1.family.tag.value
        out["shape"] = x1.family.shape
        out["d1"] = {"loc": x1.alpha, "scale": x1.beta}
        out["d2"] = {"loc": x2.alpha, "scale": x2.beta}
    return out


def _emit(args, record: dict):
    digits = args.digits
    rec = {k: (_num(v, digits) if not isinstance(v, dict) else v) for k, v in record.items()}
    if args.format == "csv":
        flat = {k: v for k, v in record.items() if not isinstance(v, dict)}
        text = to_csv(list(flat), [list(flat.values())], digits)
    else:
        text = json.dumps(rec, sort_keys=False) + "\n"
    _write(args, text)


def _write(args, text):
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_exact(args):
    x1, x2 = _pair(args)
    ev = w1_exact(x1, x2)
    rec = _echo(args, x1, x2)
    rec.update(w1=ev.value, provenance=ev.provenance)
    _emit(args, rec)
    return 0


def cmd_bounds(args):
    x1, x2 = _pair(args)
    ev = w1_exact(x1, x2)
    b = bound_set(x1, x2)
    rec = _echo(args, x1, x2)
    rec.update(
        w1=ev.value,
        provenance=ev.provenance,
        lower_mean_diff=b.lower_mean_diff,
        lower_gauss_improved=b.lower_gauss_improved,
        upper_linear=b.upper_linear,
        upper_frechet=b.upper_frechet,
        upper_gauss_legacy=b.upper_gauss_legacy,
        gauss_limit=b.gauss_limit,
    )
    _emit(args, rec)
    return 0


def cmd_dp(args):
    m = _mechanism(args)
    have_pair = args.d1 is not None or args.d2 is not None
    rec = {"command": "dp"}
    rec.update(mechanism=m.kind.value, epsilon=m.epsilon, delta=m.delta, sensitivity=m.sensitivity,
               noise_scale=noise_scale(m), noise_cost=noise_w1_cost(m))
    if not have_pair:
        if args.base is None:
            raise UsageError("dp needs --base or both --d1 and --d2")
        if args.bound in ("exact", "approx"):
            raise UsageError(f"--bound {args.bound} needs --d1 and --d2")
        base = args.base
        fn = dp_bound_legacy if args.bound == "legacy" else dp_bound_improved
        rec.update(base=base, bound_kind=args.bound, bound=fn(base, m))
        _emit(args, rec)
        return 0
    if args.base is not None:
        raise UsageError("give either --base or --d1/--d2, not both")
    x1, x2 = _pair(args)
    r = dp_report(x1, x2, m)
    if args.bound == "legacy":
        bound = r.bound_legacy
    elif args.bound == "improved":
        bound = r.bound_improved
    elif args.bound == "exact":
        if m.kind is not Mechanism.GAUSSIAN:
            raise UsageError("--bound exact needs --mechanism gaussian")
        bound = dp_exact_gaussian(x1, x2, m)
    else:
        if m.kind is not Mechanism.LAPLACE:
            raise UsageError("--bound approx needs --mechanism laplace")
        bound = dp_laplace_gauss_approx(x1, x2, m)[0]
    echo = _echo(args, x1, x2)
    echo.pop("command")
    rec.update(echo)
    rec.update(base=r.base_distance, bound_kind=args.bound, bound=bound,
               bound_legacy=r.bound_legacy, bound_improved=r.bound_improved,
               exact_or_approx=r.exact_or_approx, label=r.label, approx_valid=r.approx_valid)
    _emit(args, rec)
    return 0


def _mc_config(args, seed):
    return McConfig(n_samples=args.samples, n_reps=args.reps, seed=seed)


def cmd_sweep(args):
    if args.vary is None or args.start is None or args.stop is None:
        raise UsageError("sweep needs --vary, --from and --to")
    x1, x2 = _pair(args)
    m = _mechanism(args, required=False)
    spec = SweepSpec(args.vary, args.start, args.stop, args.steps,
                     Problem(x1.family, (x1.alpha, x1.beta), (x2.alpha, x2.beta), m))
    mc = _mc_config(args, resolve_seed(args.seed)) if args.mc else None
    header, rows = run_sweep(spec, mc)
    _write(args, to_csv(header, rows, args.digits))
    return 0


def cmd_figure(args):
    mc = None if args.no_mc else _mc_config(args, resolve_seed(args.seed))
    header, rows = figure_table(args.id, mc)
    _write(args, to_csv(header, rows, args.digits))
    return 0


def cmd_verify(args):
    from .verify import report, run_all

    fams = None
    if args.family is not None:
        fams = [_family(args)]
    results = run_all(fams, seed=resolve_seed(args.seed), n_samples=args.samples, n_reps=args.reps,
                      n_pairs=args.pairs, grid=args.grid, tol_scale=args.tol_scale,
                      csv_paths=args.csv or ())
    rep = report(results)
    text = json.dumps(rep, indent=2) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if rep["passed"] else 1


# -- parser -------------------------------------------------------------------

def _add_dist_flags(p, family_required=True):
    p.add_argument("--family", required=family_required, type=str.lower,
                   help="gaussian, laplace, logistic, uniform, exponential, gamma, weibull, rayleigh, studentt")
    p.add_argument("--shape", type=float, default=None, help="k for gamma/weibull, nu for studentt")
    p.add_argument("--d1", type=parse_dist, help="first distribution, loc=<x>,scale=<y>")
    p.add_argument("--d2", type=parse_dist, help="second distribution, loc=<x>,scale=<y>")


def _add_dp_flags(p, bound=True):
    p.add_argument("--mechanism", choices=("laplace", "gaussian"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float, default=None, help=f"gaussian only (default {DEFAULT_DELTA:g})")
    p.add_argument("--sensitivity", type=float, default=DEFAULT_SENSITIVITY)
    p.add_argument("--allow-large-epsilon", action="store_true",
                   help="accept epsilon >= 1 for the gaussian mechanism with a warning")
    if bound:
        p.add_argument("--bound", choices=("legacy", "improved", "exact", "approx"), default="improved")
        p.add_argument("--base", type=float, default=None, help="base distance W(X1, X2)")


def _add_output_flags(p, fmt=True):
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="significant digits in output")
    if fmt:
        p.add_argument("--format", choices=("json", "csv"), default="json")


def _add_mc_flags(p):
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                   help=f"master seed (default ${SEED_ENV} or 0)")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--samples", type=int, default=10_000)


def build_parser():
    parser = _Parser(prog="locscale-w1", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", help="exact W1 between two members of a family")
    _add_dist_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="exact W1 and every applicable bound")
    _add_dist_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("dp", help="distances and bounds under a privacy mechanism")
    _add_dist_flags(p, family_required=False)
    _add_dp_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=cmd_dp)

    p = sub.add_parser("sweep", help="tabulate distances and bounds over a parameter grid")
    _add_dist_flags(p)
    _add_dp_flags(p, bound=False)
    p.add_argument("--vary", choices=TARGETS)
    p.add_argument("--from", dest="start", type=float)
    p.add_argument("--to", dest="stop", type=float)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--mc", action="store_true", help="add Monte-Carlo mean and interval columns")
    _add_mc_flags(p)
    _add_output_flags(p, fmt=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="data for a reference figure panel")
    p.add_argument("id", choices=FIGURE_IDS)
    p.add_argument("--no-mc", action="store_true", help="skip Monte-Carlo columns")
    _add_mc_flags(p)
    _add_output_flags(p, fmt=False)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("--family", type=str.lower, default=None)
    p.add_argument("--shape", type=float, default=None)
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--tol-scale", type=float, default=1.0,
                   help="multiply every tolerance (0 forces failures)")
    p.add_argument("--csv", action="append", help="re-check bound columns of an emitted CSV")
    _add_mc_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                return args.func(args)
            finally:
                for w in caught:
                    sys.stderr.write(f"warning: {w.message}\n")
    except (UsageError, DomainError, FamilyMismatchError, ConvergenceError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"locscale-w1: error: {msg}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"locscale-w1: error: {exc.strerror or exc}: {exc.filename or ''}\n".rstrip() + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
