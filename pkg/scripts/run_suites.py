#!/usr/bin/env python3
"""Run every verifier suite and print a one-line verdict per suite.

Exits non-zero if any suite fails.
"""
import argparse
import json
import sys
import time

from meterprivacy import verify


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", help="also dump the full reports to this file")
    args = parser.parse_args()

    reports = {}
    for name, fn in verify.SUITES.items():
        t0 = time.perf_counter()
        rep = fn(seed=args.seed) if name == "theorem1" else fn()
        reports[name] = rep
        verdict = "pass" if rep["passed"] else "FAIL"
        print(f"{name:22s} {verdict}  {rep['checks'] - rep['failed']}/{rep['checks']}  "
              f"{time.perf_counter() - t0:.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)
    sys.exit(0 if all(r["passed"] for r in reports.values()) else 1)


if __name__ == "__main__":
    main()
