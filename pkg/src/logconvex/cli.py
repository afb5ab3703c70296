"""``logconvex`` command line: mean, profile, scan, reproduce, verify.

Radii are given in ``r``; every CSV column named ``x`` holds ``x = r**2``.
Exit codes: 0 ok, 1 a reproduction/verification item failed, 2 usage,
3 numeric failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import verify_claims
from .errors import DomainError, LogConvexError
from .means import monomial_mean, quad_mean, read_coefficients, series_mean_p2
from .report import SCHEMA, VERIFY_SCHEMA, read_config, render_csv
from .reproduce import run_battery
from .scan import DEFAULT_R_GRID, Subject, profile_rows, run_scan, scan_csv, subject_profile

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

# applied after the config file; unlisted options stay None
DEFAULTS = {
    "p": 2.0, "tol": 1e-10, "band": None, "seed": 0, "lam": 1.0,
}


class UsageError(Exception):
    pass


def parse_range(text: str, cast=float):
    """``a,b,c`` or ``lo:hi:step`` (inclusive, values rounded to 12 digits)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(s) for s in parts)
        if not step > 0 or hi < lo:
            raise UsageError(f"bad range {text!r}")
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        vals = [round(lo + i * step, 12) for i in range(n)]
    else:
        vals = [float(s) for s in text.split(",") if s.strip()]
    if not vals:
        raise UsageError(f"empty value list {text!r}")
    if cast is int:
        if any(v != int(v) for v in vals):
            raise UsageError(f"expected integers, got {text!r}")
        return [int(v) for v in vals]
    return vals


def r_grid(args):
    if args.grid:
        rs = parse_range(args.grid)
    elif args.r is not None:
        rs = parse_range(args.r)
    else:
        rs = list(DEFAULT_R_GRID)
    if any(not 0 < r < 1 for r in rs):
        raise UsageError("radii must lie in (0, 1)")
    return rs


def _float(args, name):
    val = getattr(args, name)
    try:
        return float(val)
    except (TypeError, ValueError):
        raise UsageError(f"--{name} expects a number, got {val!r}") from None


def subject_of(args, single=True):
    if args.coeffs and args.monomial is not None:
        raise UsageError("give either --monomial or --coeffs, not both")
    if args.coeffs:
        path = Path(args.coeffs)
        try:
            coeffs = read_coefficients(path)
        except OSError as exc:
            raise OSError(f"cannot read {path}: {exc.strerror}") from None
        return [Subject.polynomial(path.stem, coeffs)]
    if args.monomial is None:
        raise UsageError("one of --monomial or --coeffs is required")
    ks = parse_range(str(args.monomial), int)
    if single and len(ks) != 1:
        raise UsageError("--monomial takes a single degree here")
    if any(k < 0 for k in ks):
        raise UsageError("monomial degrees must be nonnegative")
    return [Subject.monomial(k) for k in ks]


def emit(text: str, out):
    if out:
        try:
            with open(out, "w", newline="", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_mean(args):
    p, alpha = _float(args, "p"), _float(args, "alpha")
    tol = _float(args, "tol")
    (subject,) = subject_of(args)
    rows = []
    for r in r_grid(args):
        if subject.k is not None:
            val = monomial_mean(p, alpha, subject.k, r, tol)
        elif p == 2:
            val = series_mean_p2(subject.coeffs, alpha, r, tol)
        else:
            val = quad_mean(subject.coeffs, p, alpha, r, tol)
        rows.append((p, alpha, subject.label, r * r, val, ""))
    emit(render_csv(SCHEMA, rows), args.out)
    return EXIT_OK


def cmd_profile(args):
    p, alpha = _float(args, "p"), _float(args, "alpha")
    band = None if args.band is None else _float(args, "band")
    (subject,) = subject_of(args)
    xs = [r * r for r in r_grid(args)]
    prof = subject_profile(p, alpha, subject, xs, band)
    emit(render_csv(SCHEMA, profile_rows(p, alpha, subject, prof)), args.out)
    roots = ", ".join(f"{float(x):.6g}" for x in prof.sign_changes) or "none"
    print(f"verdict: {prof.classification}; sign changes at x = {roots}", file=sys.stderr)
    return EXIT_OK


def cmd_scan(args):
    ps = parse_range(str(args.p))
    if args.alpha is None:
        raise UsageError("--alpha is required")
    alphas = parse_range(str(args.alpha))
    band = None if args.band is None else _float(args, "band")
    subjects = subject_of(args, single=False)
    xs = [r * r for r in r_grid(args)]
    records = run_scan(ps, alphas, subjects, xs, band)
    emit(scan_csv(records), args.out)
    return EXIT_OK


def cmd_reproduce(args):
    only = [s for s in (args.only or "").split(",") if s] or None
    try:
        results = run_battery(only, seed=int(args.seed))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    for c in results:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.check_id}: {c.detail}")
    failed = sum(not c.passed for c in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_verify(args):
    lam, alpha = _float(args, "lam"), _float(args, "alpha")
    tol = _float(args, "tol")
    xs = [r * r for r in r_grid(args)] if (args.grid or args.r) else np.linspace(0.01, 0.99, 100)
    reports = verify_claims(lam, alpha, xs, tol)
    rows = [(r.claim_id, r.lam, r.alpha, r.status, r.worst_violation, r.witness_x, r.npoints, r.note)
            for r in reports]
    emit(render_csv(VERIFY_SCHEMA, rows), args.out)
    return EXIT_FAIL if any(r.passed is False for r in reports) else EXIT_OK


COMMANDS = {"mean": cmd_mean, "profile": cmd_profile, "scan": cmd_scan,
            "reproduce": cmd_reproduce, "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="logconvex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--out", help="write CSV here instead of stdout")
    common.add_argument("--tol", help="absolute/relative tolerance (default 1e-10)")

    subject = argparse.ArgumentParser(add_help=False)
    subject.add_argument("--p", help="exponent p (default 2)")
    subject.add_argument("--alpha", help="weight exponent")
    subject.add_argument("--monomial", metavar="K", help="degree k of z**k")
    subject.add_argument("--coeffs", metavar="PATH", help="coefficient file, 're im' per line")
    subject.add_argument("--r", help="radius, or comma list of radii")
    subject.add_argument("--grid", metavar="LO:HI:STEP", help="radius grid")
    subject.add_argument("--band", help="tolerance band for classification")

    sub.add_parser("mean", parents=[common, subject], help="weighted area mean on an r-grid")
    sub.add_parser("profile", parents=[common, subject], help="log-log second derivative and verdict")
    sub.add_parser("scan", parents=[common, subject],
                   help="classify every (p, alpha, k); lists a,b,c or ranges lo:hi:step")
    rep = sub.add_parser("reproduce", parents=[common], help="run the reproduction battery")
    rep.add_argument("--only", metavar="ID", help="comma-separated check ids")
    rep.add_argument("--seed", help="seed for the randomised checks (default 0)")
    ver = sub.add_parser("verify", parents=[common], help="check the proof claims for one (lambda, alpha)")
    ver.add_argument("--lambda", dest="lam", help="kernel exponent (default 1)")
    ver.add_argument("--alpha", help="weight exponent")
    ver.add_argument("--r", help="radius list")
    ver.add_argument("--grid", metavar="LO:HI:STEP", help="radius grid")
    return parser


def apply_config(args):
    """Fill unset options from --config, then from DEFAULTS."""
    if args.config:
        try:
            conf = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        conf = {("lam" if k == "lambda" else k): v for k, v in conf.items()}
        for key, value in conf.items():
            if not hasattr(args, key) or key in ("command", "config"):
                raise UsageError(f"{args.config}: unknown key {key!r} for '{args.command}'")
            if getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on bad flags
    try:
        apply_config(args)
        if getattr(args, "alpha", "") is None and args.command != "reproduce":
            raise UsageError("--alpha is required")
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"logconvex {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"logconvex {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (LogConvexError, ArithmeticError, ValueError) as exc:
        print(f"logconvex {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
