"""Command-line front end: ``hcaplab {hcap,hsiz,cover,verify,scan,constants}``.

Exit status: 0 success, 2 invalid input or unwritable output, 3 inconclusive
verification or exhausted budget, 4 failed verification.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .capacity import ConvergenceError, NoExactFormula, hcap_exact, hcap_integral, hcap_wos, has_exact
from .corpus import random_corpus
from .cover import coverage_check, cover_sums, greedy_cover
from .hsiz import BudgetExceeded, hsiz_mc, hsiz_quadtree
from .hull import Slit
from .io import HullFileError, dumps_csv, dumps_json, load_hull, load_hulls
from .loewner import ZipperError, hcap_zipper
from .verify import (
    BUDGETS,
    FAMILIES,
    SUMMARY_HEADER,
    constants_report,
    default_c_grid,
    extremal_scan,
    property_suite,
    verify_many,
)

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_FAILED = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _count(s: str) -> int:
    """Positive integer, accepting forms like ``1e6``."""
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (v >= 1 and v == int(v)):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return int(v)


def _positive(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s!r}")
    return v


def _fraction(s: str) -> float:
    if "/" in s:
        a, b = s.split("/", 1)
        return _positive(a) / _positive(b)
    return _positive(s)


def _common(p: argparse.ArgumentParser, fmt_default: str = "json") -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for stochastic methods (default 0)")
    p.add_argument("--workers", type=_count, default=None,
                   help="worker threads (default: $HCAPLAB_WORKERS, else CPU count)")
    p.add_argument("--output", "-o", default=None, help="write results here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help=f"output format (default from the --output suffix, else {fmt_default})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hcaplab", description="Half-plane capacity and tangent-disk area tools.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hcap", help="estimate hcap of a hull")
    p.add_argument("hull", help="hull JSON file")
    p.add_argument("--method", choices=("auto", "exact", "wos", "integral", "zipper"), default="auto")
    p.add_argument("--n", type=_count, default=100_000, help="number of walks (default 1e5)")
    p.add_argument("--tol", type=_positive, default=1e-3, help="zipper tolerance")
    p.add_argument("--eps", type=_positive, default=None, help="walk stopping distance")
    p.add_argument("--y-start", type=_positive, default=None, help="starting height of the limit estimator")
    _common(p)

    p = sub.add_parser("hsiz", help="area of the tangent-disk union")
    p.add_argument("hull")
    p.add_argument("--method", choices=("quadtree", "mc"), default="quadtree")
    p.add_argument("--tol", type=_positive, default=1e-3, help="quadtree ambiguous-area tolerance")
    p.add_argument("--n", type=_count, default=1_000_000, help="Monte Carlo samples")
    _common(p)

    p = sub.add_parser("cover", help="greedy cover and its bound sums")
    p.add_argument("hull")
    p.add_argument("--c", type=_fraction, default=1.0, help="cover parameter, e.g. 1 or 8/5")
    p.add_argument("--grid", type=_positive, default=None, help="candidate pitch (default sup_im/512)")
    p.add_argument("--eps-stop", type=float, default=None, help="stopping height (default 1e-6 sup_im)")
    p.add_argument("--check", type=_count, default=None, metavar="N", help="also sample N points for coverage")
    _common(p, "csv")

    p = sub.add_parser("verify", help="check the hcap/hsiz sandwich on hulls")
    p.add_argument("paths", nargs="*", help="hull files or directories of *.json")
    p.add_argument("--random", type=_count, default=None, metavar="N", help="add N seeded random hulls")
    p.add_argument("--budget", choices=sorted(BUDGETS), default="default")
    p.add_argument("--summary", default=None, help="also write the CSV summary to this path")
    p.add_argument("--properties", action="store_true", help="run the property suite instead")
    _common(p)

    p = sub.add_parser("scan", help="ratio scan over a hull family")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--budget", choices=sorted(BUDGETS), default="default")
    _common(p)

    p = sub.add_parser("constants", help="table of rho_c and rho_c^2/(pi + 8c)")
    p.add_argument("--c", type=_fraction, nargs="+", default=None, help="explicit c values")
    p.add_argument("--c-max", type=_positive, default=5.0)
    p.add_argument("--steps", type=_count, default=200)
    _common(p, "csv")
    return ap


def _fmt(args, default: str = "json") -> str:
    if args.format:
        return args.format
    if args.output and Path(args.output).suffix.lower() in (".csv", ".json"):
        return Path(args.output).suffix.lower()[1:]
    return default


def _emit(args, text: str) -> None:
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as e:
            raise UsageError(f"{args.output}: cannot write ({e.strerror})") from None
    else:
        sys.stdout.write(text)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise UsageError(f"{path}: cannot write ({e.strerror})") from None


def cmd_hcap(args) -> int:
    hull = load_hull(args.hull)
    m = args.method
    if m == "auto":
        if has_exact(hull):
            m = "exact"
        elif len(hull.primitives) == 1 and isinstance(hull.primitives[0], Slit):
            m = "zipper"
        else:
            m = "wos"
    if m == "exact":
        try:
            est = hcap_exact(hull)
        except NoExactFormula as e:
            raise UsageError(str(e)) from None
    elif m == "zipper":
        if len(hull.primitives) != 1 or not isinstance(hull.primitives[0], Slit):
            raise UsageError("zipper needs a hull made of a single polyline slit")
        est = hcap_zipper(hull.primitives[0], args.tol)
    elif m == "wos":
        est = hcap_wos(hull, args.n, y_start=args.y_start, eps=args.eps, seed=args.seed, workers=args.workers)
    else:
        est = hcap_integral(hull, args.n, eps=args.eps, seed=args.seed, workers=args.workers)
    d = est.to_dict()
    if _fmt(args) == "csv":
        _emit(args, dumps_csv(list(d), [list(d.values())]))
    else:
        _emit(args, dumps_json(d))
    return EXIT_OK


def cmd_hsiz(args) -> int:
    hull = load_hull(args.hull)
    res = hsiz_quadtree(hull, args.tol) if args.method == "quadtree" else hsiz_mc(hull, args.n, args.seed)
    d = res.to_dict()
    if _fmt(args) == "csv":
        _emit(args, dumps_csv(list(d), [list(d.values())]))
    else:
        _emit(args, dumps_json(d))
    return EXIT_OK


def cmd_cover(args) -> int:
    hull = load_hull(args.hull)
    if args.eps_stop is not None and args.eps_stop < 0:
        raise UsageError("--eps-stop must be non-negative")
    cv = greedy_cover(hull, args.c, args.grid, args.eps_stop)
    report = coverage_check(hull, cv, args.check, args.seed) if args.check else None
    if _fmt(args, "csv") == "csv":
        _emit(args, dumps_csv(("j", "x", "y", "c"), cv.rows()))
    else:
        doc = {
            "c": cv.c,
            "grid": cv.grid,
            "eps_stop": cv.eps_stop,
            "truncation_bound": cv.truncation_bound,
            "elements": [{"j": j, "x": x, "y": y, "c": c} for j, x, y, c in cv.rows()],
            "sums": cover_sums(cv).to_dict() if len(cv) else None,
        }
        if report is not None:
            doc["coverage"] = report.to_dict()
        _emit(args, dumps_json(doc))
    if report is not None and not report.passed:
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.properties:
        rep = property_suite(args.seed, args.budget, args.workers)
        _emit(args, dumps_json(rep.to_dict()))
        return EXIT_OK if rep.passed else EXIT_FAILED
    items = load_hulls(args.paths)
    if args.random:
        items += random_corpus(args.random, args.seed)
    if not items:
        raise UsageError("nothing to verify: give hull files, a directory, or --random N")
    reports = verify_many(items, args.budget, args.seed, args.workers)
    summary = dumps_csv(SUMMARY_HEADER, [r.summary_row() for r in reports])
    if _fmt(args) == "csv":
        _emit(args, summary)
    else:
        _emit(args, dumps_json([r.to_dict() for r in reports]))
    if args.summary:
        _write(args.summary, summary)
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return EXIT_FAILED
    if "inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_scan(args) -> int:
    res = extremal_scan(args.family, args.budget, args.seed, args.workers)
    if _fmt(args) == "csv":
        rows = [(res.family, r.hull_id, r.hcap.value, r.hcap.std_error, r.hsiz.value, r.hsiz.error_bound, r.ratio,
                 r.ratio_lo, r.ratio_hi, r.verdict) for r in res.reports]
        _emit(args, dumps_csv(("family", "member", "hcap", "sigma_hcap", "hsiz", "err_hsiz", "ratio", "ratio_lo",
                               "ratio_hi", "verdict"), rows))
    else:
        _emit(args, dumps_json(res.to_dict()))
    if not res.in_sandwich:
        return EXIT_FAILED
    return EXIT_OK if all(r.passed for r in res.reports) else EXIT_INCONCLUSIVE


def cmd_constants(args) -> int:
    grid = args.c if args.c else default_c_grid(args.steps, args.c_max)
    tab = constants_report(grid)
    if _fmt(args, "csv") == "csv":
        _emit(args, dumps_csv(("c", "rho", "bound"), tab.rows))
    else:
        _emit(args, dumps_json(tab.to_dict()))
    return EXIT_OK if tab.exceeds_1_66 else EXIT_FAILED


COMMANDS = {"hcap": cmd_hcap, "hsiz": cmd_hsiz, "cover": cmd_cover, "verify": cmd_verify, "scan": cmd_scan,
            "constants": cmd_constants}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (HullFileError, UsageError, ValueError) as e:
        print(f"hcaplab: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExceeded, ConvergenceError, ZipperError) as e:
        print(f"hcaplab: budget exhausted: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
