#!/usr/bin/env python3
"""Write the data behind the three bound figures as CSV.

fig3.csv  leakage bound vs beta/alpha (staircase)
fig4.csv  mean-constrained limit bound vs mu/alpha, one curve per beta/alpha
fig5.csv  mean-constrained limit bound vs beta/alpha, one curve per mu/alpha
"""
import argparse
import sys
from pathlib import Path

from meterprivacy.cli import main as cli


def run(argv):
    code = cli(argv)
    if code:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    run(["bound", "--alpha", "1,2", "--ratio", "0:8:0.5", "--out", str(out / "fig3.csv")])
    run(["avg-bound", "--alpha", "2", "--ratio", "0.5,1,2,4,8", "--mu-ratio", "0:1:0.02",
         "--out", str(out / "fig4.csv")])
    run(["avg-bound", "--alpha", "2", "--ratio", "0:8:0.5", "--mu-ratio", "0.05,0.1,0.25,0.5",
         "--out", str(out / "fig5.csv")])
    print(f"wrote {', '.join(str(out / f) for f in ('fig3.csv', 'fig4.csv', 'fig5.csv'))}")


if __name__ == "__main__":
    main()
