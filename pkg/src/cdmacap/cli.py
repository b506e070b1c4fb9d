"""Command-line front end.

Commands
--------
analytic      capacity versus load for a few noise thresholds
kappa-sweep   capacity versus noise threshold for a few loads
simulate      exhaustive finite-K ensemble
outage        BER versus rate under AWGN
validate      run the acceptance checks

Exit status: 0 success, 1 usage error, 2 saddle non-convergence,
3 degenerate ensemble (every trial had zero codewords), 4 failed validation.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from . import enumeration as en
from . import tables
from .errors import DegenerateStatisticsError
from .outage import outage_curve
from .saddle import BETA_RANGE, DEFAULT_MAX_ITER, DEFAULT_TOL, KAPPA_RANGE, capacity_sweep

WORKERS_ENV = "CDMACAP_WORKERS"

EXIT_OK, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_DEGENERATE, EXIT_VALIDATION = 0, 1, 2, 3, 4

DEFAULTS = {
    "analytic": dict(betas="0.01:10:60:log", kappas="0,0.5,0.75,0.9,1"),
    "kappa-sweep": dict(betas="0.01,0.1,1", kappas="0:1.5:151"),
    "simulate": dict(betas="0.5", kappas="0"),
    "outage": dict(betas="0.1", kappas="0:1.1:100", ebn0s="5,7,10"),
    "validate": dict(),
}


class UsageError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"{flag}: {message}" if flag else message)
        self.flag = flag


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(None, message)


@dataclass
class RunConfig:
    command: str
    betas: List[float] = field(default_factory=list)
    kappas: List[float] = field(default_factory=list)
    ebn0s: List[float] = field(default_factory=list)
    users: int = 25
    trials: int = 20
    seed: int = 0
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    workers: int = 1
    output: Optional[str] = None
    fmt: str = "csv"
    two_sided: bool = False
    skip: List[int] = field(default_factory=list)

    def validate(self):
        if self.command not in DEFAULTS:
            raise UsageError(None, f"unknown command {self.command!r}")
        lo, hi = BETA_RANGE
        for b in self.betas:
            if not lo <= b <= hi:
                raise UsageError("--beta", f"{b} outside [{lo}, {hi}]")
        lo, hi = KAPPA_RANGE
        for k in self.kappas:
            if not lo <= k <= hi:
                raise UsageError("--kappa", f"{k} outside [{lo}, {hi}]")
        if not 1 <= self.users <= en.MAX_USERS:
            raise UsageError("--users", f"{self.users} outside [1, {en.MAX_USERS}]")
        if self.trials < 1:
            raise UsageError("--trials", "must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed", "must be a 64-bit unsigned integer")
        if not self.tol > 0:
            raise UsageError("--tol", "must be positive")
        if self.max_iter < 1:
            raise UsageError("--max-iter", "must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers", "must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise UsageError("--format", f"unknown format {self.fmt!r}")
        if self.command == "simulate":
            if len(self.betas) != 1 or len(self.kappas) != 1:
                raise UsageError("--beta", "simulate takes a single beta and a single kappa")
            if en.chips_for_load(self.users, self.betas[0]) < 1:
                raise UsageError("--beta", f"round(K/beta) = 0 chips for K={self.users}")
        return self


def build_parser():
    parser = _Parser(prog="cdmacap", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
        p.add_argument("--workers", type=int, default=None,
                       help=f"worker threads (default: ${WORKERS_ENV} or 1)")
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")

    p = sub.add_parser("analytic", help="capacity vs load")
    p.add_argument("--beta", "--beta-grid", dest="betas")
    p.add_argument("--kappa", "--kappa-grid", dest="kappas")
    common(p)

    p = sub.add_parser("kappa-sweep", help="capacity vs noise threshold")
    p.add_argument("--beta", "--beta-grid", dest="betas")
    p.add_argument("--kappa", "--kappa-grid", dest="kappas")
    common(p)

    p = sub.add_parser("simulate", help="exhaustive finite-K ensemble")
    p.add_argument("--users", type=int, default=25)
    p.add_argument("--beta", dest="betas")
    p.add_argument("--kappa", dest="kappas")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("outage", help="AWGN outage: BER vs rate")
    p.add_argument("--beta", dest="betas")
    p.add_argument("--ebn0", "--ebn0-grid", dest="ebn0s")
    p.add_argument("--kappa", "--kappa-grid", dest="kappas")
    p.add_argument("--two-sided", action="store_true",
                   help="use Pr(|n| > kappa sqrt(P)) instead of the upper tail")
    common(p)

    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--skip", type=int, action="append", default=[],
                   help="check number to skip (repeatable)")
    p.add_argument("--workers", type=int, default=None)
    return parser


def _grid(flag, text):
    try:
        return tables.parse_grid(text)
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None


def config_from_args(argv=None):
    ns = build_parser().parse_args(argv)
    defaults = DEFAULTS[ns.command]
    workers = ns.workers
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        try:
            workers = int(env) if env else 1
        except ValueError:
            raise UsageError("--workers", f"${WORKERS_ENV}={env!r} is not an integer") from None
    cfg = RunConfig(command=ns.command, workers=workers)
    for attr, flag in (("betas", "--beta"), ("kappas", "--kappa"), ("ebn0s", "--ebn0")):
        text = getattr(ns, attr, None) or defaults.get(attr)
        if text is not None:
            setattr(cfg, attr, _grid(flag, text))
    for attr in ("users", "trials", "seed", "tol", "max_iter", "output", "fmt", "two_sided",
                 "skip"):
        if hasattr(ns, attr):
            setattr(cfg, attr, getattr(ns, attr))
    return cfg.validate()


def _analytic_rows(sweep):
    rows = []
    for r in sweep:
        row = {"beta": r.beta, "kappa": r.kappa}
        if r.ok:
            res = r.result
            row.update(
                a_star=res.saddle.a_star, t_star=res.saddle.t_star, capacity_nats=res.nats,
                capacity_bits=res.bits, clamped=res.clamped,
                iterations=res.saddle.iterations, residual=res.saddle.residual,
            )
        rows.append(row)
    return rows


def _summary_path(output, fmt):
    return Path(output).with_suffix(f".summary.{fmt}")


def run(config, quiet=False):
    """Execute one configured command; returns the process exit status."""
    config.validate()
    say = (lambda *a, **k: None) if quiet else print
    to_stdout = config.output in (None, "-")
    # keep stdout clean for the table itself
    out = sys.stderr if to_stdout else sys.stdout

    def note(msg):
        say(msg, file=out)

    if config.command in ("analytic", "kappa-sweep"):
        sweep = capacity_sweep(
            config.betas, config.kappas, kappa_major=config.command == "analytic",
            tol=config.tol, max_iter=config.max_iter, workers=config.workers,
        )
        rows = _analytic_rows(sweep)
        tables.emit_table(rows, tables.ANALYTIC_COLUMNS, config.fmt, config.output)
        failed = sum(not r.ok for r in sweep)
        clamped = sum(r.ok and r.result.clamped for r in sweep)
        note(f"{config.command}: {len(rows)} rows, {clamped} clamped, {failed} not converged")
        return EXIT_CONVERGENCE if failed else EXIT_OK

    if config.command == "outage":
        rows, failed = [], 0
        for ebn0 in config.ebn0s:
            for pt in outage_curve(config.betas[0], ebn0, config.kappas, tol=config.tol,
                                   max_iter=config.max_iter, two_sided=config.two_sided):
                failed += pt.error is not None
                rows.append({"ebn0_db": pt.ebn0_db, "kappa": pt.kappa, "ber": pt.ber,
                             "rate_bits": pt.rate_bits, "clamped": pt.clamped})
        tables.emit_table(rows, tables.OUTAGE_COLUMNS, config.fmt, config.output)
        note(f"outage: beta={config.betas[0]}, {len(rows)} rows, {failed} not converged")
        return EXIT_CONVERGENCE if failed else EXIT_OK

    if config.command == "simulate":
        beta, kappa = config.betas[0], config.kappas[0]
        try:
            stats = en.empirical_capacity(config.users, beta, kappa, config.trials,
                                          master_seed=config.seed, workers=config.workers)
        except DegenerateStatisticsError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
        rows = [
            {"trial": r.trial, "seed": r.seed, "users": stats.users, "chips": stats.chips,
             "realized_beta": stats.realized_beta, "kappa": stats.kappa, "count": r.count,
             "capacity_bits": r.bits(stats.users)}
            for r in stats.per_trial
        ]
        summary = [{"trials": stats.trials, "zero_trials": stats.zero_trials,
                    "mean_bits": stats.mean_bits, "std_bits": stats.std_bits}]
        tables.emit_table(rows, tables.SIMULATE_COLUMNS, config.fmt, config.output)
        if to_stdout:
            sys.stdout.write("\n")
            tables.emit_table(summary, tables.SUMMARY_COLUMNS, config.fmt, None)
        else:
            tables.emit_table(summary, tables.SUMMARY_COLUMNS, config.fmt,
                              _summary_path(config.output, config.fmt))
        note(f"simulate: K={stats.users}, N={stats.chips}, kappa={stats.kappa}: "
             f"C_K = {stats.mean_bits:.6f} +- {stats.std_bits:.6f} bits over "
             f"{stats.trials - stats.zero_trials} trials ({stats.zero_trials} zero)")
        return EXIT_OK

    from .validation import run_all

    results = run_all(skip=set(config.skip), echo=lambda s: say(s))
    failed = [r for r in results if not r.passed]
    say(f"validate: {len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv=None):
    try:
        config = config_from_args(argv)
    except UsageError as exc:
        print(f"cdmacap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(config)
    except OSError as exc:
        print(f"cdmacap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
