"""Command-line driver: ``modvertex --suite NAME [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from modvertex.kernels import BACKEND
from modvertex.report import jsonable
from modvertex.suites import SUITES, SuiteConfig, expand_jobs, run_job

SCHEMA = "modvertex-report/1"


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _kappa_list(text: str) -> tuple:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modvertex",
                                 description="Exact F_p verification suites for affine sl2.")
    ap.add_argument("--suite", required=True, choices=SUITES + ("all",))
    ap.add_argument("--p", type=_int_list, default=(), help="comma-separated primes")
    ap.add_argument("--kappa", type=_kappa_list, default=(),
                    help="comma-separated levels; 'formal' for an indeterminate, 'kc' for critical")
    ap.add_argument("--depth", type=int, default=None, help="delta-depth of probe sets")
    ap.add_argument("--depth-cap", type=int, default=8)
    ap.add_argument("--mode-bound", type=int, default=None)
    ap.add_argument("--weight", type=int, default=None,
                    help="lambda(h) for the singular suite (default -rho, i.e. -1)")
    ap.add_argument("--output", default=None, help="write the JSON report here")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--extra-random", type=int, default=0,
                    help="additional seeded random binomial pairs for the lucas suite")
    ap.add_argument("--force", action="store_true", help="allow slow configurations")
    return ap


def run(cfg: SuiteConfig, stream=None) -> tuple:
    """Run every job of ``cfg``; return (exit_status, report_dict)."""
    stream = stream or sys.stdout
    cfg.validate()
    jobs = expand_jobs(cfg)
    started = [time.perf_counter()]
    timings = []

    def timed(results_iter):
        for job, res in zip(jobs, results_iter):
            now = time.perf_counter()
            timings.append(now - started[0])
            started[0] = now
            yield job, res

    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            pairs = list(timed(pool.map(run_job, jobs)))
    else:
        pairs = list(timed(run_job(j) for j in jobs))

    suites: dict = {}
    for (suite, label, _, _), reports in pairs:
        entry = suites.setdefault(suite, {"suite": suite, "passed": True, "jobs": []})
        ok = all(r.passed for r in reports)
        entry["passed"] = entry["passed"] and ok
        entry["jobs"].append({"job": label, "passed": ok,
                              "checks": [r.to_json() for r in reports]})
    passed = all(e["passed"] for e in suites.values())
    report = {"schema": SCHEMA, "config": cfg.to_json(), "passed": passed,
              "suites": [suites[s] for s in cfg.suites() if s in suites]}
    for ((suite, label, _, _), reports), dt in zip(pairs, timings):
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status}  {suite:15s} {r.name:60s} checks={r.checked:<8d} {dt:7.2f}s",
                  file=stream)
    print(f"{'PASS' if passed else 'FAIL'}  overall ({len(jobs)} jobs, backend={BACKEND})",
          file=stream)
    return (0 if passed else 1), report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = int(os.environ.get("MODVERTEX_THREADS", "1") or 1)
    cfg = SuiteConfig(suite=args.suite, p=args.p, kappa=args.kappa, depth=args.depth,
                      mode_bound=args.mode_bound, weight=args.weight, seed=args.seed,
                      extra_random=args.extra_random, depth_cap=args.depth_cap,
                      force=args.force, output=args.output, threads=threads)
    try:
        status, report = run(cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(jsonable(report), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
