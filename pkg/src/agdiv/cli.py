"""Command-line front end.

Exit codes: 0 success, 1 invariant failure, 2 I/O or parse error,
3 parameter or domain error.
"""

import argparse
import math
import sys

import numpy as np

from . import csiszar, fisher, io, unified
from .audit import run_audit
from .distributions import check_pair
from .exceptions import DivergenceError
from .sufficiency import batch_dpi

EXIT_OK, EXIT_INVARIANT, EXIT_IO, EXIT_PARAM = 0, 1, 2, 3

ROW_COLUMNS = ["measure", "r", "s", "value", "branch", "reason"]
SWEEP_COLUMNS = ["r", "s", "measure_id", "value", "branch_used", "reason"]


class UsageError(Exception):
    pass


def parse_grid(text):
    """``start:stop:step`` (both ends inclusive), a comma list, or one number."""
    if text is None:
        return None
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise UsageError(f"bad grid {text!r}")
            n = int(math.floor((stop - start) / step + 1e-9))
            return [round(start + i * step, 12) for i in range(n + 1)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def _write(args, text):
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise io.InputError(f"cannot write {args.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _measures(args, default):
    names = (args.measures or default).split(",")
    return [unified.measure_key(n.strip()) for n in names if n.strip()]


def _load_pair(args):
    if not args.input:
        raise UsageError("--input is required")
    p, q = io.read_pair(args.input)
    try:
        return check_pair(p, q)
    except (DivergenceError, ValueError) as exc:
        raise io.InputError(f"{args.input}: {exc}") from exc


def _eval_rows(p, q, measures, r_grid, s_grid):
    rows, failed = [], False
    for r in r_grid:
        for s in s_grid:
            for key in measures:
                row = {"measure": key, "r": float(r), "s": float(s)}
                try:
                    row["branch"] = unified.branch_used(key, r, s)
                    row["value"] = unified.evaluate(key, p, q, r, s)
                    row["reason"] = ""
                except DivergenceError as exc:
                    failed = True
                    row.update(value=float("nan"), branch="", reason=f"{type(exc).__name__}: {exc}")
                rows.append(row)
    rows.sort(key=lambda d: (d["r"], d["s"], d["measure"]))
    return rows, failed


def cmd_compute(args):
    p, q = _load_pair(args)
    measures = _measures(args, "kl,j,js,ag")
    rows, failed = _eval_rows(p, q, measures, parse_grid(args.r) or [1.0], parse_grid(args.s) or [1.0])
    if args.format == "json":
        _write(args, io.to_json(rows))
    else:
        _write(args, io.rows_to_csv(rows, ROW_COLUMNS))
    return EXIT_PARAM if failed else EXIT_OK


def cmd_sweep(args):
    p, q = _load_pair(args)
    measures = _measures(args, "k_rs,t1,t2,it")
    rows, failed = _eval_rows(
        p, q, measures, parse_grid(args.r) or [0.5, 2.0, 3.0], parse_grid(args.s) or [-1.0, 0.5, 2.0]
    )
    rows = [
        {"r": d["r"], "s": d["s"], "measure_id": d["measure"], "value": d["value"],
         "branch_used": d["branch"], "reason": d["reason"]}
        for d in rows
    ]
    if args.format == "json":
        _write(args, io.to_json(rows))
    else:
        _write(args, io.rows_to_csv(rows, SWEEP_COLUMNS))
    return EXIT_PARAM if failed else EXIT_OK


def cmd_dpi(args):
    grid = None
    if args.measures or args.r or args.s:
        measures = _measures(args, "t1,t2,it")
        r_grid = parse_grid(args.r) or [0.5, 2.0, 3.0]
        s_grid = parse_grid(args.s) or [-1.0, 0.5, 2.0]
        grid = []
        for key in measures:
            for r in r_grid:
                for s in s_grid:
                    unified.check_rs(r, s)
                    grid.append((key, r, s))
    rep = batch_dpi(args.trials, args.support_in, args.support_out, grid, args.seed)
    out = rep.to_dict()
    del out["n_failed"]
    out.update(n_failed=rep.n_failed, seed=args.seed)
    _write(args, io.to_json(out))
    return EXIT_OK if rep.passed else EXIT_INVARIANT


def cmd_fisher(args):
    fam = fisher.family_from_name(args.family)
    if args.theta is None:
        raise UsageError("--theta is required")
    theta = parse_grid(args.theta)
    sched = parse_grid(args.t_schedule) if args.t_schedule else list(fisher.DEFAULT_SCHEDULE)
    if args.measures:
        r_grid = parse_grid(args.r) or [1.0]
        s_grid = parse_grid(args.s) or [1.0]
        reports = []
        for key in _measures(args, ""):
            for r in r_grid:
                for s in s_grid:
                    rep = fisher.prop52_check(fam, theta, key, r, s, sched)
                    reports.append({
                        "family": fam.name, "theta": theta, "measure": key, "r": r, "s": s,
                        "t_schedule": sched, "fisher": rep.fisher,
                        "limit_estimate": rep.limit_estimate,
                        "estimated_coefficient": rep.estimated_coefficient,
                        "candidates": rep.candidates, "best_match": rep.best_match,
                    })
        _write(args, io.to_json(reports))
        return EXIT_OK
    phi = csiszar.generator_from_name(args.phi or "kl")
    report = fisher.fisher_report(fam, theta, phi, sched)
    if args.format == "csv":
        rows = []
        k = len(report["fisher"])
        for i in range(k):
            for j in range(k):
                rows.append({
                    "i": i, "j": j, "fisher": report["fisher"][i][j],
                    "csiszar_estimate": report["csiszar_estimate"][i][j],
                    "predicted": report["predicted"][i][j],
                })
        _write(args, io.rows_to_csv(rows, ["i", "j", "fisher", "csiszar_estimate", "predicted"]))
    else:
        _write(args, io.to_json(report))
    return EXIT_OK


def cmd_audit(args):
    report = run_audit(args.trials, args.seed)
    _write(args, io.to_json(report))
    for c in report["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']} (worst {c['worst']:.3g})", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


def build_parser():
    parser = argparse.ArgumentParser(prog="agdiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, trials_default=None):
        sp.add_argument("--input", help="pair file: JSON {\"p\", \"q\"} or two CSV lines (default stdin)")
        sp.add_argument("--output", help="write results here (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format for tables")
        sp.add_argument("--seed", type=int, default=1, help="RNG seed for random cases")
        sp.add_argument("--measures", help="comma list from kl,j,js,ag,k_rs,t1,t2,it")
        sp.add_argument("--r", help="r value or grid (a:b:step or comma list)")
        sp.add_argument("--s", help="s value or grid (a:b:step or comma list)")
        sp.add_argument("--trials", type=int, default=trials_default, help="number of random cases")
        sp.add_argument("--family", default="bernoulli", help="bernoulli, binomial:n, softmax:m[:k] or uniform:n")
        sp.add_argument("--theta", help="parameter point, comma separated")
        sp.add_argument("--phi", help="generator: kl, reverse_kl, it_s:<s> or ag_phi[_star|_minus]:<r>")
        return sp

    common(sub.add_parser("compute", help="evaluate measures on one pair")).set_defaults(func=cmd_compute)
    common(sub.add_parser("sweep", help="evaluate (r, s) families over a grid")).set_defaults(func=cmd_sweep)
    dpi = common(sub.add_parser("dpi", help="random data-processing checks"), trials_default=500)
    dpi.add_argument("--support-in", type=int, default=4)
    dpi.add_argument("--support-out", type=int, default=4)
    dpi.set_defaults(func=cmd_dpi, format="json")
    fis = common(sub.add_parser("fisher", help="phi-divergence limit vs Fisher information"))
    fis.add_argument("--t-schedule", help="comma list of step sizes for the t -> 0 extrapolation")
    fis.set_defaults(func=cmd_fisher, format="json")
    aud = common(sub.add_parser("audit", help="run the full self-audit"), trials_default=200)
    aud.set_defaults(func=cmd_audit, format="json")
    return parser


GRID_FLAGS = ("--r", "--s", "--theta")


def _glue_negative_values(argv):
    # "--s -1:3:0.5" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in GRID_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        if args.trials is not None and args.trials < 1:
            raise UsageError("--trials must be >= 1")
        return args.func(args)
    except io.InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
