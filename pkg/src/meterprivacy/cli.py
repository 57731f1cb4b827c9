"""Command-line entry point: figure data as CSV, verifier suites, simulation.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import verify as suites
from .errors import DomainError, PolicyInfeasibleError, ResourceError
from .leakage import exact_leakage, theorem1_bound, theorem3_bound
from .model import EmsConfig, trajectory
from .policy import PolicyTable, echo_policy, greedy_charge_policy, max_block_length
from .processes import SequenceDistribution, mean_block_process, uniform_block_process

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# flag dest -> default, applied after --config so that flags win over the file
DEFAULTS = {
    "alpha": "1",
    "gamma": None,
    "beta": None,
    "s0": 0,
    "l": None,
    "m": 1,
    "mu": None,
    "n": None,
    "seed": 0,
    "out": None,
    "ratio": None,
    "mu_ratio": None,
    "x": None,
    "process": None,
    "policy": "block",
    "bound": "theorem1",
}


class UsageError(Exception):
    pass


def parse_grid(text) -> List[Fraction]:
    """``"1,2,5"`` or inclusive range ``"start:stop:step"``, or a JSON list."""
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [Fraction(str(v)) for v in text]
    if isinstance(text, (int, float)):
        return [Fraction(str(text))]
    text = str(text).strip()
    if not text:
        return []
    out: List[Fraction] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = part.split(":")
            if len(bits) != 3:
                raise UsageError(f"range {part!r} must be start:stop:step")
            start, stop, step = (Fraction(b) for b in bits)
            if step <= 0:
                raise UsageError(f"range step must be positive in {part!r}")
            v = start
            while v <= stop:
                out.append(v)
                v += step
        else:
            try:
                out.append(Fraction(part))
            except ValueError as exc:
                raise UsageError(f"bad number {part!r}") from exc
    return out


def _int_value(v, name: str) -> Optional[int]:
    if v is None:
        return None
    vals = parse_grid(v)
    if len(vals) != 1 or vals[0].denominator != 1:
        raise UsageError(f"--{name} must be a single integer, got {v!r}")
    return int(vals[0])


def fmt(v) -> str:
    if isinstance(v, float) and v == float("inf"):
        return "inf"
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _write_csv(header: Sequence[str], rows: Sequence[Sequence], out: Optional[str]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    _emit(buf.getvalue(), out)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cfg(args, need_beta: bool = True) -> EmsConfig:
    alpha = _int_value(args.alpha, "alpha")
    beta = _int_value(args.beta, "beta")
    if beta is None:
        if need_beta:
            raise UsageError("--beta is required")
        beta = 0
    try:
        return EmsConfig(alpha=alpha, beta=beta, gamma=_int_value(args.gamma, "gamma"),
                         s0=_int_value(args.s0, "s0"))
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bound(args) -> int:
    alphas = parse_grid(args.alpha)
    ratios = parse_grid(args.ratio)
    betas = parse_grid(args.beta)
    if not alphas or not (ratios or betas):
        raise UsageError("empty grid: give --alpha and --ratio (beta/alpha) or --beta")
    points = []
    for a in alphas:
        if ratios:
            points.extend((a, r * a) for r in ratios)
        else:
            points.extend((a, b) for b in betas)
    rows = []
    for a, b in points:
        if a.denominator != 1 or b.denominator != 1 or a < 1 or b < 0:
            print(f"skip alpha={fmt(a)} beta={fmt(b)}: alpha and beta must be integers, alpha >= 1, beta >= 0",
                  file=sys.stderr)
            continue
        cfg = EmsConfig(alpha=int(a), beta=int(b))
        rows.append((Fraction(cfg.beta, cfg.alpha), cfg.alpha, cfg.beta, max_block_length(cfg),
                     theorem1_bound(cfg)))
    if not rows:
        raise UsageError("no valid grid points")
    _write_csv(("beta_over_alpha", "alpha", "beta", "l", "bound"), rows, args.out)
    return EXIT_OK


def cmd_avg_bound(args) -> int:
    alphas = parse_grid(args.alpha)
    ratios = parse_grid(args.ratio)
    betas = parse_grid(args.beta) if args.ratio is None else []
    mu_ratios = parse_grid(args.mu_ratio)
    mus = parse_grid(args.mu)
    if not alphas or not (ratios or betas) or not (mu_ratios or mus):
        raise UsageError("empty grid: give --alpha, --ratio or --beta, and --mu-ratio or --mu")
    n = _int_value(args.n, "n")
    if n is not None and n < 1:
        raise UsageError("--n must be >= 1")
    rows = []
    for a in alphas:
        if a.denominator != 1 or a < 1:
            raise UsageError(f"alpha must be a positive integer, got {fmt(a)}")
        bs = [r * a for r in ratios] if ratios else betas
        fracs = mu_ratios if mu_ratios else [mu / a for mu in mus]
        for q in fracs:
            if not 0 <= q <= 1:
                raise UsageError(f"mean {fmt(q * a)} outside [0, alpha={fmt(a)}]")
        for b in bs:
            if b.denominator != 1 or b < 0:
                print(f"skip alpha={fmt(a)} beta={fmt(b)}: beta must be a non-negative integer",
                      file=sys.stderr)
                continue
            cfg = EmsConfig(alpha=int(a), beta=int(b))
            for q in fracs:
                mu = float(q * a)
                rows.append((q, Fraction(cfg.beta, cfg.alpha), cfg.alpha, cfg.beta, mu,
                             "inf" if n is None else n, theorem3_bound(cfg, mu, n)))
    if not rows:
        raise UsageError("no valid grid points")
    _write_csv(("mu_over_alpha", "beta_over_alpha", "alpha", "beta", "mu", "n", "bound"), rows, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    name = args.suite
    if name not in suites.SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(suites.SUITES)}")
    if name == "theorem1":
        report = suites.suite_theorem1(seed=_int_value(args.seed, "seed"))
    elif name == "disjointness" and args.beta is not None:
        cfg = _cfg(args)
        l = _int_value(args.l, "l")
        if l is None:
            l = -(-(cfg.beta + 1) // cfg.alpha)
        m = _int_value(args.m, "m")
        report = suites.suite_disjointness([(cfg.beta, cfg.alpha, l, m)])
    else:
        report = suites.SUITES[name]()
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _policy(args, cfg: EmsConfig, l: Optional[int]):
    if args.policy == "block":
        return PolicyTable(cfg, l)
    if args.policy == "echo":
        return echo_policy(cfg)
    if args.policy == "greedy":
        return greedy_charge_policy(cfg)
    raise UsageError(f"unknown policy {args.policy!r}; choose block, echo or greedy")


def _load_process(args, cfg: EmsConfig) -> SequenceDistribution:
    source = args.process
    m = _int_value(args.m, "m")
    l = _int_value(args.l, "l")
    if l is None:
        l = -(-(cfg.beta + 1) // cfg.alpha)
    if source == "uniform-block":
        return uniform_block_process(cfg, l, m)
    if source == "mean-block":
        mus = parse_grid(args.mu)
        if len(mus) != 1:
            raise UsageError("mean-block needs a single --mu")
        return mean_block_process(cfg, l, m, float(mus[0]))
    text = source if source.lstrip().startswith("{") else Path(source).read_text()
    return SequenceDistribution.from_json(text)


def cmd_simulate(args) -> int:
    cfg = _cfg(args)
    l = _int_value(args.l, "l")
    pol = _policy(args, cfg, l)
    if args.process is not None:
        d = _load_process(args, cfg)
        report = exact_leakage(d, pol, cfg, bound=args.bound)
        _emit(report.to_json() + "\n", args.out)
        return EXIT_OK
    if args.x is None:
        raise UsageError("simulate needs --x or --process")
    x = [int(v) for v in parse_grid(args.x)]
    y = pol(x)
    traj = trajectory(x, y, cfg)
    rows = [(i, x[i], y[i], traj.states[i], traj.states[i + 1]) for i in range(len(traj.states) - 1)]
    _write_csv(("i", "x", "y", "s_before", "s_after"), rows, args.out)
    if traj.violation is not None:
        print(f"violation: {traj.violation.kind} at step {traj.violation.index}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_leakage(args) -> int:
    cfg = _cfg(args)
    if args.process is None:
        raise UsageError("leakage needs --process (file, inline JSON, uniform-block or mean-block)")
    d = _load_process(args, cfg)
    report = exact_leakage(d, _policy(args, cfg, _int_value(args.l, "l")), cfg, bound=args.bound)
    _emit(report.to_json() + "\n", args.out)
    return EXIT_OK if report.satisfied else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="peak consumption (list/range for sweeps)")
    common.add_argument("--gamma", help="peak request (defaults to alpha)")
    common.add_argument("--beta", help="battery capacity (list/range for sweeps)")
    common.add_argument("--s0", help="initial battery level")
    common.add_argument("--l", help="block length")
    common.add_argument("--m", help="number of blocks")
    common.add_argument("--mu", help="average consumption")
    common.add_argument("--n", help="horizon (avg-bound: finite-n bound instead of the limit)")
    common.add_argument("--seed", help="seed for randomized suites")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--config", help="JSON file with any of the flags above; flags win")

    p = argparse.ArgumentParser(prog="meterprivacy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", parents=[common], help="leakage upper bound vs beta/alpha (CSV)")
    b.add_argument("--ratio", help="beta/alpha grid, e.g. 0:8:0.5")

    a = sub.add_parser("avg-bound", parents=[common], help="mean-constrained bound grid (CSV)")
    a.add_argument("--ratio", help="beta/alpha grid")
    a.add_argument("--mu-ratio", dest="mu_ratio", help="mu/alpha grid, e.g. 0:1:0.05")

    v = sub.add_parser("verify", parents=[common], help="run a property suite (JSON report)")
    v.add_argument("suite", help=", ".join(suites.SUITES))

    s = sub.add_parser("simulate", parents=[common], help="trace a policy on a consumption sequence")
    s.add_argument("--x", help="consumption sequence, e.g. 1,1,0,0")
    s.add_argument("--process", help="distribution JSON file/inline, uniform-block or mean-block")
    s.add_argument("--policy", help="block (default), echo or greedy")
    s.add_argument("--bound", help="theorem1 (default), theorem2, theorem3, theorem4 or none")

    k = sub.add_parser("leakage", parents=[common], help="exact leakage report (JSON)")
    k.add_argument("--process", help="distribution JSON file/inline, uniform-block or mean-block")
    k.add_argument("--policy", help="block (default), echo or greedy")
    k.add_argument("--bound", help="theorem1 (default), theorem2, theorem3, theorem4 or none")

    for sp in (b, a, v, s, k):
        sp.set_defaults(**{key: None for key in DEFAULTS})
    return p


def _apply_config(args) -> None:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise UsageError("config must be a JSON object")
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key in DEFAULTS and getattr(args, key, None) is None:
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


COMMANDS = {
    "bound": cmd_bound,
    "avg-bound": cmd_avg_bound,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "leakage": cmd_leakage,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PolicyInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
