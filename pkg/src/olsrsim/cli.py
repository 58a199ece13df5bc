"""Command line: run, batch and validate scenario files.

Exit codes: 0 all assertions pass, 1 an assertion failed, 2 usage or
scenario validation error, 3 the engine failed.
"""
from __future__ import annotations

import argparse
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

from .runner import build_report, simulate
from .scenario import ScenarioError, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _print_assertions(report, out=None) -> None:
    out = out or sys.stdout
    for a in report.assertions:
        flag = "PASS" if a.passed else "FAIL"
        line = f"  [{flag}] {a.id}: observed={a.to_dict()['observed']!r} {a.op} expected={a.expected!r}"
        if a.tolerance:
            line += f" (tol {a.tolerance:g})"
        if a.error:
            line += f" ({a.error})"
        print(line, file=out)


def run_file(path: str, seed: Optional[int] = None, log: Optional[str] = None,
             report_path: Optional[str] = None, quiet: bool = False) -> Tuple[int, str]:
    """Run one scenario file; returns (exit status, one-line summary)."""
    try:
        spec = load_scenario(path)
    except ScenarioError as e:
        return EXIT_USAGE, f"invalid: {e}"
    try:
        ctx = simulate(spec, seed)
        report = build_report(ctx)
    except Exception as e:  # noqa: BLE001 - any crash inside the engine maps to one status
        if not quiet:
            traceback.print_exc()
        return EXIT_ENGINE, f"engine error: {type(e).__name__}: {e}"
    if log:
        Path(log).write_text("\n".join(ctx.engine.event_log()) + "\n")
    if report_path:
        Path(report_path).write_text(report.to_json())
    if not quiet:
        print(f"{spec.name} (seed {report.seed}, {report.duration:g} s, {report.events} events)")
        _print_assertions(report)
    n_fail = sum(not a.passed for a in report.assertions)
    summary = f"{len(report.assertions) - n_fail}/{len(report.assertions)} assertions pass"
    return (EXIT_FAIL if n_fail else EXIT_OK), summary


def _batch_one(args) -> Tuple[str, int, str]:
    path, out_dir = args
    stem = Path(path).stem
    log = str(Path(out_dir) / f"{stem}.log") if out_dir else None
    rep = str(Path(out_dir) / f"{stem}.report.json") if out_dir else None
    status, summary = run_file(path, log=log, report_path=rep, quiet=True)
    return stem, status, summary


def batch(directory: str, jobs: int = 1, out_dir: Optional[str] = None) -> int:
    files = sorted(str(p) for p in Path(directory).glob("*.json"))
    if not files:
        print(f"no scenario files in {directory}", file=sys.stderr)
        return EXIT_USAGE
    if out_dir:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    work = [(f, out_dir) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_batch_one, work))
    else:
        results = [_batch_one(w) for w in work]
    names = {0: "PASS", 1: "FAIL", 2: "INVALID", 3: "ERROR"}
    width = max(len(r[0]) for r in results)
    for stem, status, summary in results:
        print(f"{stem:<{width}}  {names[status]:<7}  {summary}")
    statuses = {s for _, s, _ in results}
    n_pass = sum(s == EXIT_OK for _, s, _ in results)
    print(f"{n_pass}/{len(results)} scenarios pass")
    for code in (EXIT_ENGINE, EXIT_USAGE, EXIT_FAIL):
        if code in statuses:
            return code
    return EXIT_OK


def validate(path: str) -> int:
    try:
        spec = load_scenario(path)
    except ScenarioError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(f"ok: {spec.name} ({len(spec.nodes)} nodes, {len(spec.links)} links, "
          f"{len(spec.assertions)} assertions)")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _Parser(prog="olsrsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one scenario and check its assertions")
    p_run.add_argument("scenario")
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.add_argument("--log", help="write the event log here")
    p_run.add_argument("--report", help="write the JSON report here")

    p_batch = sub.add_parser("batch", help="run every *.json scenario in a directory")
    p_batch.add_argument("directory")
    p_batch.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p_batch.add_argument("--out", help="directory for per-scenario logs and reports")

    p_val = sub.add_parser("validate", help="check a scenario file without running it")
    p_val.add_argument("scenario")

    args = parser.parse_args(argv)
    if args.cmd == "run":
        status, summary = run_file(args.scenario, args.seed, args.log, args.report)
        print(summary, file=sys.stderr if status >= 2 else sys.stdout)
        return status
    if args.cmd == "batch":
        return batch(args.directory, args.jobs, args.out)
    return validate(args.scenario)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
