"""Acceptance checks for the capacity, enumeration and outage modules.

Each check returns a CheckResult; ``run_all`` prints one PASS/FAIL line
per check.  The reference numbers are frozen from an independent
50-digit fixed-point evaluation (see tests/oracles.py).
"""

import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import enumeration as en
from .outage import rate_at_ber
from .saddle import LoadNoisePoint, capacity, capacity_sweep, free_energy, zero_capacity_threshold
from .special import gaussian_tail, inverse_gaussian_tail


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.elapsed:.2f} s)"


def _timed(number, name, budget):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if budget is not None and dt >= budget:
                ok = False
                detail += f"; runtime {dt:.2f} s over budget {budget} s"
            return CheckResult(number, name, ok, detail, dt)
        run.number = number
        run.check_name = name
        return run
    return wrap


THRESHOLDS = {0.01: 1.05, 0.1: 1.09, 1.0: 1.27}
PLATEAU_BITS = {0.01: 0.224, 0.1: 0.210, 1.0: 0.171}


@_timed(1, "zero-capacity thresholds", budget=1.0)
def check_thresholds():
    found = {b: zero_capacity_threshold(b) for b in THRESHOLDS}
    ok = all(abs(found[b] - k) <= 0.02 for b, k in THRESHOLDS.items())
    return ok, ", ".join(f"beta={b}: {found[b]:.4f} (ref {k})" for b, k in THRESHOLDS.items())


@_timed(2, "kappa=1 plateau", budget=1.0)
def check_plateau():
    bits = {b: capacity((b, 1.0)).bits for b in PLATEAU_BITS}
    ok = all(0.15 <= v <= 0.25 for v in bits.values())
    ok = ok and all(abs(bits[b] - ref) <= 1e-3 for b, ref in PLATEAU_BITS.items())
    return ok, ", ".join(f"beta={b}: {bits[b]:.4f} (ref {r})" for b, r in PLATEAU_BITS.items())


@_timed(3, "small-load limit and kappa=0 monotonicity", budget=1.0)
def check_small_load():
    c0 = capacity((0.01, 0.0)).bits
    grid = np.geomspace(0.01, 10.0, 60)
    curve = [capacity((float(b), 0.0)).bits for b in grid]
    mono = all(y2 <= y1 for y1, y2 in zip(curve, curve[1:]))
    return c0 >= 0.99 and mono, f"C(0.01, 0) = {c0:.6f} bits, non-increasing: {mono}"


@_timed(4, "outage operating point", budget=1.0)
def check_outage():
    r = rate_at_ber(0.1, 10.0, 1e-3)
    return abs(r - 0.755) <= 0.01, f"rate_at_ber(0.1, 10 dB, 1e-3) = {r:.4f} bits (ref 0.755 +- 0.01)"


def random_instances(n=100, seed=2005):
    """Small random (corr, kappa) instances: K in [4, 12], kappa in {0, 0.5, 0.9}."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        K = int(rng.integers(4, 13))
        N = int(rng.integers(1, 3 * K + 1))
        kappa = float(rng.choice([0.0, 0.5, 0.9]))
        s = en.sample_spreading(K, N, int(rng.integers(0, 2**63)))
        out.append((en.correlations(s), kappa))
    return out


@_timed(5, "Gray-code count equals brute force", budget=60.0)
def check_oracle_equivalence():
    mismatches = 0
    for corr, kappa in random_instances():
        if en.count_codewords(corr, kappa).count != en.brute_force_count(corr, kappa):
            mismatches += 1
    return mismatches == 0, f"{mismatches} mismatches over 100 instances"


@_timed(6, "finite-size agreement at K=25", budget=None)
def check_finite_size(users=25, trials=20, betas=(0.25, 0.5, 1.0), master_seed=0, workers=1):
    parts, ok = [], True
    for beta in betas:
        t0 = time.perf_counter()
        stats = en.empirical_capacity(users, beta, 0.0, trials, master_seed, workers=workers)
        per_point = time.perf_counter() - t0
        asym = capacity((beta, 0.0)).bits
        dev = abs(stats.mean_bits - asym)
        ok = ok and dev <= 0.05 and per_point <= 600.0 and per_point / trials <= 10.0
        parts.append(
            f"beta={beta}: C_K={stats.mean_bits:.4f}+-{stats.std_bits:.4f} vs "
            f"C_inf={asym:.4f} (|d|={dev:.4f}, {per_point / trials:.2f} s/realization)"
        )
    return ok, "; ".join(parts)


@_timed(7, "constructive interference at kappa=1.2", budget=1.0)
def check_crossing():
    hi, lo = capacity((1.0, 1.2)), capacity((0.1, 1.2))
    ok = hi.bits > lo.bits and lo.clamped and lo.bits == 0.0
    return ok, f"C(1, 1.2) = {hi.bits:.4f} bits, C(0.1, 1.2) = {lo.bits:.4f} (clamped={lo.clamped})"


def _byte_determinism():
    from .cli import RunConfig, run

    configs = [
        dict(command="analytic", betas=[0.01, 0.1, 1.0, 10.0], kappas=[0.0, 0.9, 1.0]),
        dict(command="simulate", users=12, betas=[0.5], kappas=[0.5], trials=6, seed=9),
        dict(command="outage", betas=[0.1], ebn0s=[5.0, 10.0], kappas=[0.0, 0.5, 0.691]),
    ]
    with tempfile.TemporaryDirectory() as tmp:
        for i, cfg in enumerate(configs):
            for fmt in ("csv", "json"):
                blobs = []
                for workers in (1, 3):
                    path = Path(tmp) / f"{i}-{workers}.{fmt}"
                    status = run(RunConfig(**cfg, workers=workers, output=str(path), fmt=fmt),
                                 quiet=True)
                    if status != 0:
                        return False, f"{cfg['command']} exited {status}"
                    blobs.append(path.read_bytes())
                    summary = path.with_suffix(".summary." + fmt)
                    if summary.exists():
                        blobs[-1] += summary.read_bytes()
                if blobs[0] != blobs[1]:
                    return False, f"{cfg['command']} {fmt} output depends on workers"
    return True, "ok"


@_timed(8, "property suites", budget=120.0)
def check_properties():
    failures = []

    odd = [c for c, k in random_instances(60, seed=7) if en.count_codewords(c, k).count % 2]
    for K, N in [(8, 8), (10, 9), (12, 12)]:
        for kappa in (0.95, 1.0, 1.05, 1.2):
            corr = en.correlations(en.sample_spreading(K, N, K * 1000 + N))
            if en.count_codewords(corr, kappa).count % 2:
                odd.append(corr)
    if odd:
        failures.append(f"{len(odd)} odd codeword counts")

    ok, detail = _byte_determinism()
    if not ok:
        failures.append(detail)

    xs = np.linspace(-8.0, 8.0, 1601)
    sym = max(abs(gaussian_tail(x) + gaussian_tail(-x) - 1.0) for x in xs)
    if sym > 1e-14:
        failures.append(f"Q(x)+Q(-x)-1 reaches {sym:.2e}")
    # below x = -5 the inverse is ill-conditioned (Q rounds toward 1), so the
    # x-space round trip is checked on [-5, 8] and the p-space one on (0, 1)
    worst = 0.0
    for x in np.linspace(-5.0, 8.0, 131):
        worst = max(worst, abs(inverse_gaussian_tail(gaussian_tail(x)) - x))
    for p in np.geomspace(1e-300, 0.999, 301):
        x = inverse_gaussian_tail(p)
        worst = max(worst, abs(gaussian_tail(x) - p) / p)
    if worst > 1e-9:
        failures.append(f"inverse round trip error {worst:.2e}")

    h = 1e-6
    worst_db = 0.0
    rows = capacity_sweep(np.geomspace(0.001, 100.0, 16).tolist(),
                          [0.0, 0.25, 0.5, 0.75, 0.9, 1.0, 1.05, 1.2, 1.5, 2.0])
    for row in rows:
        if not row.ok:
            failures.append(f"no convergence at beta={row.beta}, kappa={row.kappa}")
            continue
        p, a = LoadNoisePoint(row.beta, row.kappa), row.result.saddle.a_star
        d = (free_energy(a, h, p) - free_energy(a, -h, p)) / (2 * h)
        worst_db = max(worst_db, abs(d))
    if worst_db > 1e-5:
        failures.append(f"|dg/db| reaches {worst_db:.2e}")

    if failures:
        return False, "; ".join(failures)
    return True, (f"even counts, byte-identical outputs, |Q(x)+Q(-x)-1| <= {sym:.1e}, "
                  f"round trip <= {worst:.1e}, max |dg/db| = {worst_db:.1e}")


CHECKS = [
    check_thresholds,
    check_plateau,
    check_small_load,
    check_outage,
    check_oracle_equivalence,
    check_finite_size,
    check_crossing,
    check_properties,
]


def run_all(skip=(), echo=print):
    results = []
    for check in CHECKS:
        if check.number in skip:
            echo(f"[SKIP] {check.number}. {check.check_name}")
            continue
        res = check()
        echo(res.line())
        results.append(res)
    return results
