"""Command-line front end: ``approxcover {sumset,cover,asymptotic,sweep,verify}``.

Every command prints one report (JSON by default) whose ``results`` payload
is built directly from the library call. Settings resolve as
flags > ``APPROXCOVER_*`` environment variables > defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .asymptotic import (asymptotic_covering_number, default_window, endpoint_gap_condition,
                         eventual_constants, is_asymptotic_ap, normalize, stabilization_check,
                         structure_constants)
from .covering import covering_number, default_budget, is_approximate_group, lower_bound
from .errors import ApproxCoverError, BudgetExceeded, NoStabilization
from .intset import IntSet, format_set, parse_set
from .sumsets import detect_ap, hfold
from .verify import Bounds, get_suite, run_suite

SCHEMA = 1
ELIDE_ABOVE = 10_000

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)
    status: str = "ok"
    message: str | None = None
    schema: int = SCHEMA

    def to_dict(self) -> dict:
        d = {"schema": self.schema, "command": self.command, "inputs": self.inputs,
             "results": self.results, "timings_ms": self.timings_ms, "status": self.status}
        if self.message is not None:
            d["message"] = self.message
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(d["command"], d["inputs"], d["results"], d["timings_ms"], d["status"],
                   d.get("message"), d["schema"])


def parse_report(text: str) -> RunReport:
    return RunReport.from_dict(json.loads(text))


# --- argument helpers --------------------------------------------------------

def parse_range(text: str) -> tuple[int, int]:
    """``"3"`` -> (3, 3); ``"1..8"`` -> (1, 8)."""
    parts = text.strip().split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _env(name, cast, default):
    raw = os.environ.get(f"APPROXCOVER_{name}")
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"bad value for APPROXCOVER_{name}: {raw!r}") from None


def _resolve(args, name, env_name, cast, default):
    val = getattr(args, name, None)
    if val is not None:
        return val
    return _env(env_name, cast, default)


def elements_payload(S: IntSet):
    """Element list, or a summary once it exceeds ``ELIDE_ABOVE`` entries."""
    if len(S) > ELIDE_ABOVE:
        return {"min": S.min, "max": S.max, "size": len(S), "is_interval": S.is_interval()}
    return S.tolist()


def _ap_payload(S: IntSet):
    shape = detect_ap(S)
    if shape is None:
        return None
    return {"first": shape.first, "diff": shape.diff, "size": shape.size}


def _set_arg(args) -> IntSet:
    if args.set is None:
        raise UsageError("--set is required")
    return parse_set(args.set)


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise UsageError(f"--{name} is required")
    return val


class _Clock:
    def __init__(self):
        self.t0 = time.perf_counter()
        self.marks = {}

    def mark(self, name):
        now = time.perf_counter()
        self.marks[name] = round((now - self.t0) * 1000, 3)
        self.t0 = now


# --- commands ----------------------------------------------------------------

def cmd_sumset(args, clock):
    A = _set_arg(args)
    h = _need(args, "h")
    if h[0] != h[1]:
        raise UsageError("sumset takes a single --h value")
    h = h[0]
    inputs = {"set": format_set(A), "h": h}
    clock.mark("parse")
    H = hfold(A, h)
    clock.mark("hfold")
    results = {"elements": elements_payload(H), "size": len(H), "ap": _ap_payload(H)}
    return inputs, results, EXIT_OK


def cover_payload(A: IntSet, r: int, budget: int) -> dict:
    res = covering_number(A, r, budget=budget)
    return {
        "covering_number": res.covering_number,
        "witness": res.witness.tolist(),
        "lower_bound": lower_bound(A, r),
        "certificate_ok": is_approximate_group(A, r, res.witness),
        "nodes_explored": res.nodes_explored,
        "optimal": res.optimal,
    }


def cmd_cover(args, clock):
    A = _set_arg(args)
    r = _need(args, "r")
    budget = _resolve(args, "budget", "BUDGET", int, default_budget())
    inputs = {"set": format_set(A), "r": r, "budget": budget}
    clock.mark("parse")
    results = cover_payload(A, r, budget)
    clock.mark("solve")
    return inputs, results, EXIT_OK


def sweep_row(args):
    A, r, h, budget = args
    H = hfold(A, h)
    row = {"h": h, "size_hA": len(H), "is_ap": detect_ap(H) is not None,
           "covering_number": None, "witness": None}
    try:
        res = covering_number(H, r, budget=budget)
    except BudgetExceeded as exc:
        row["error"] = f"budget exceeded after {exc.nodes} nodes"
        return row
    row["covering_number"] = res.covering_number
    row["witness"] = res.witness.tolist()
    return row


def sweep_rows(A: IntSet, r: int, hs, jobs: int = 1, budget: int | None = None) -> list[dict]:
    """One row per ``h``, in the order of ``hs``."""
    budget = default_budget() if budget is None else budget
    tasks = [(A, r, h, budget) for h in hs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_row, tasks))
    return [sweep_row(t) for t in tasks]


def cmd_sweep(args, clock):
    A = _set_arg(args)
    r = _need(args, "r")
    lo, hi = _need(args, "h")
    jobs = _resolve(args, "jobs", "JOBS", int, 1)
    budget = _resolve(args, "budget", "BUDGET", int, default_budget())
    inputs = {"set": format_set(A), "r": r, "h": [lo, hi], "jobs": jobs, "budget": budget}
    clock.mark("parse")
    rows = sweep_rows(A, r, range(max(lo, 1), hi + 1), jobs=jobs, budget=budget)
    clock.mark("sweep")
    code = EXIT_BUDGET if any("error" in row for row in rows) else EXIT_OK
    return inputs, {"rows": rows}, code


def cmd_asymptotic(args, clock):
    A = _set_arg(args)
    r = _need(args, "r")
    nf = normalize(A)
    b = nf.normalized.max if len(A) > 1 else 0
    window = args.window or args.h or default_window(b)
    jobs = _resolve(args, "jobs", "JOBS", int, 1)
    budget = _resolve(args, "budget", "BUDGET", int, default_budget())
    inputs = {"set": format_set(A), "r": r, "window": list(window), "sweep": bool(args.sweep)}
    clock.mark("parse")
    rep = is_asymptotic_ap(A, window)
    results = {
        "condition_holds": endpoint_gap_condition(A),
        "normal_form": {"set": nf.normalized.tolist(), "offset": nf.offset, "scale": nf.scale},
        "b": rep.b,
        "asymptotic_covering_number": asymptotic_covering_number(A, r),
        "theoretical_threshold": rep.theoretical_threshold,
        "empirical_threshold": rep.empirical_threshold,
        "window": list(rep.window_checked),
        "window_consistent": rep.window_consistent,
    }
    try:
        sc = structure_constants(nf.normalized, window)
        results["structure_constants"] = asdict(sc)
    except NoStabilization:
        results["structure_constants"] = None
    results["eventual_constants"] = asdict(eventual_constants(nf.normalized))
    clock.mark("structure")
    code = EXIT_OK
    if args.sweep:
        st = stabilization_check(A, r, window, jobs=jobs, budget=budget)
        results["sweep"] = {
            "rows": [{"h": h, "covering_number": v} for h, v in st.rows],
            "tail_start": st.tail_start,
            "tail_value": st.tail_value,
            "tail_agrees": st.tail_agrees,
            "lower_bound_violations": st.lower_bound_violations,
        }
        clock.mark("sweep")
    inputs["budget"] = budget
    return inputs, results, code


def cmd_verify(args, clock):
    if args.suite is None:
        raise UsageError("--suite is required")
    try:
        suite = get_suite(args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    defaults = Bounds()
    bounds = Bounds(
        max_elem=args.max_elem if args.max_elem is not None else defaults.max_elem,
        max_size=args.max_size if args.max_size is not None else defaults.max_size,
        r=args.r_range or defaults.r,
        h=args.h or defaults.h,
        samples=args.samples if args.samples is not None else defaults.samples,
        seed=_resolve(args, "seed", "SEED", int, defaults.seed),
        budget=_resolve(args, "budget", "BUDGET", int, default_budget()),
    )
    jobs = _resolve(args, "jobs", "JOBS", int, 1)
    inputs = {"suite": suite.name, "bounds": asdict(bounds), "skip": args.skip,
              "limit": args.limit, "jobs": jobs}
    clock.mark("parse")
    summary = run_suite(suite.name, bounds, skip=args.skip, limit=args.limit, jobs=jobs)
    clock.mark("verify")
    return inputs, summary.to_dict(), (EXIT_OK if summary.passed else EXIT_VERIFY_FAILED)


COMMANDS = {
    "sumset": cmd_sumset,
    "cover": cmd_cover,
    "asymptotic": cmd_asymptotic,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


# --- output --------------------------------------------------------------------

def _cell(v):
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    if isinstance(v, (dict, tuple)):
        return json.dumps(v)
    if v is None:
        return ""
    return v


def csv_table(report: RunReport) -> tuple[list[str], list[list]]:
    res = report.results
    if report.status != "ok":
        return ["status", "message"], [[report.status, report.message]]
    if report.command == "sweep":
        header = ["h", "size_hA", "is_ap", "covering_number", "witness"]
        rows = [[row[k] for k in header] for row in res["rows"]]
        if any("error" in row for row in res["rows"]):
            header.append("error")
            for out, row in zip(rows, res["rows"]):
                out.append(row.get("error"))
        return header, rows
    if report.command == "asymptotic" and "sweep" in res:
        return ["h", "covering_number"], [[r["h"], r["covering_number"]] for r in res["sweep"]["rows"]]
    if report.command == "verify":
        header = ["set", "params", "expected", "got", "rerun"]
        return header, [[f[k] for k in header] for f in res["failures"]]
    header = [k for k in res if k != "sweep"]
    return header, [[res[k] for k in header]]


def render_csv(report: RunReport) -> str:
    header, rows = csv_table(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_text(report: RunReport) -> str:
    lines = [f"{report.command}: {report.status}"]
    if report.message:
        lines.append(f"  {report.message}")
    for k, v in report.inputs.items():
        lines.append(f"  input {k} = {_cell(v)}")
    if report.command == "sweep" and report.status == "ok":
        for row in report.results["rows"]:
            lines.append("  h={h} |hA|={size_hA} ap={is_ap} C={covering_number} X={w}".format(
                w=_cell(row["witness"]), **row))
    elif report.command == "verify" and report.status == "ok":
        res = report.results
        lines.append(f"  instances {res['instances_checked']}, failures {len(res['failures'])}, "
                     f"budget exceeded {len(res['budget_exceeded'])}")
        for f in res["failures"]:
            lines.append(f"  FAIL {f['set']} {json.dumps(f['params'])}: expected {f['expected']},"
                         f" got {f['got']}  ({f['rerun']})")
    else:
        for k, v in report.results.items():
            lines.append(f"  {k} = {_cell(v)}")
    lines.append("  timings_ms " + " ".join(f"{k}={v}" for k, v in report.timings_ms.items()))
    return "\n".join(lines) + "\n"


def render(report: RunReport, fmt: str) -> str:
    if fmt == "csv":
        return render_csv(report)
    if fmt == "text":
        return render_text(report)
    return report.to_json() + "\n"


# --- entry point -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=None,
                        help="output format (env APPROXCOVER_FORMAT, default json)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes")
    common.add_argument("--budget", type=int, default=None, help="search node budget")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized suites")

    p = _Parser(prog="approxcover", description="Sumsets and covering numbers of integer sets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sumset", parents=[common], help="h-fold sumset hA")
    s.add_argument("--set", required=True)
    s.add_argument("--h", type=parse_range, required=True)

    s = sub.add_parser("cover", parents=[common], help="exact covering number C_r(A)")
    s.add_argument("--set", required=True)
    s.add_argument("--r", type=int, required=True)

    s = sub.add_parser("asymptotic", parents=[common], help="eventual behaviour of hA and C_r(hA)")
    s.add_argument("--set", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--window", type=parse_range, default=None, help="h window LO..HI")
    s.add_argument("--h", type=parse_range, default=None, help="alias for --window")
    s.add_argument("--sweep", action="store_true", help="also compute C_r(hA) across the window")

    s = sub.add_parser("sweep", parents=[common], help="C_r(hA) for a range of h")
    s.add_argument("--set", required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--h", type=parse_range, required=True)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--max-elem", type=int, default=None)
    s.add_argument("--max-size", type=int, default=None)
    s.add_argument("--r", dest="r_range", type=parse_range, default=None)
    s.add_argument("--h", type=parse_range, default=None)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--skip", type=int, default=0)
    s.add_argument("--limit", type=int, default=None)
    return p


def run(argv=None) -> tuple[RunReport, int, str]:
    """Parse ``argv`` and execute; returns (report, exit code, format)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    clock = _Clock()
    command = next((a for a in argv if a in COMMANDS), "unknown")
    fmt = "json"
    try:
        fmt = _env("FORMAT", str, "json")
        args = build_parser().parse_args(argv)
        command = args.command
        if args.format is not None:
            fmt = args.format
        if fmt not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {fmt!r}")
        for name in ("jobs", "budget"):
            val = _resolve(args, name, name.upper(), int, 1)
            if val < 1:
                raise UsageError(f"--{name} must be positive")
        inputs, results, code = COMMANDS[command](args, clock)
    except UsageError as exc:
        return RunReport(command, {"argv": argv}, status="error", message=str(exc)), EXIT_USAGE, fmt
    except BudgetExceeded as exc:
        msg = f"node budget of {exc.budget} exceeded after {exc.nodes} nodes"
        return (RunReport(command, {"argv": argv}, {"nodes_explored": exc.nodes},
                          status="error", message=msg), EXIT_BUDGET, fmt)
    except (ApproxCoverError, ValueError, OverflowError) as exc:
        return RunReport(command, {"argv": argv}, status="error", message=str(exc)), EXIT_USAGE, fmt
    total = sum(clock.marks.values())
    clock.marks["total"] = round(total, 3)
    return RunReport(command, inputs, results, clock.marks), code, fmt


def main(argv=None) -> int:
    report, code, fmt = run(argv)
    sys.stdout.write(render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
