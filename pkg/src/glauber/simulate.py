"""Continuous-time kinetic Monte Carlo for the spin-flip chain.

Used as a statistically independent check of the exact site densities.
Each replica draws from its own PCG64 stream spawned from one
``numpy.random.SeedSequence``, so results depend only on the seed.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import Config, RateProfile, site_flip_rate
from .steady import exact_density

Z_THRESHOLD = 4.0


class ZeroTotalRate(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    profile: RateProfile
    t_total: float
    t_burnin: float = 0.0
    seed: int = 0
    replicas: int = 8

    def __post_init__(self):
        if self.profile.symbolic:
            raise ValueError("simulation needs numeric rates")
        self.profile.validate_numeric()
        if not self.t_total > self.t_burnin >= 0:
            raise ValueError(f"need t_total > t_burnin >= 0, got {self.t_total}, {self.t_burnin}")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")


@dataclass
class DensityEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    replica_means: np.ndarray = field(repr=False)
    events: list[int] = field(default_factory=list)

    @property
    def L(self) -> int:
        return len(self.mean)


def step(cfg: Config, profile: RateProfile, rng: np.random.Generator) -> tuple[float, Config]:
    """One Gillespie event: exponential dwell time, then a single site flip."""
    rates = [float(site_flip_rate(cfg, i, profile)) for i in range(1, cfg.L + 1)]
    total = sum(rates)
    if total <= 0:
        raise ZeroTotalRate(f"no possible flip from {cfg}")
    dwell = rng.exponential(1.0 / total)
    u = rng.random() * total
    acc = 0.0
    site = cfg.L
    for i, r in enumerate(rates, start=1):
        acc += r
        if u < acc:
            site = i
            break
    return dwell, cfg.flip(site)


def _rate_tables(profile: RateProfile) -> tuple[list[float], list[float]]:
    return [float(a) for a in profile.alpha], [float(b) for b in profile.beta]


def run_replica(alpha: list[float], beta: list[float], t_total: float, t_burnin: float,
                seed_seq: np.random.SeedSequence, trajectory: bool = False):
    """Time-averaged occupations of one trajectory started from all zeros.

    Returns ``(occupation, events)`` or, with ``trajectory=True``, also the
    list of ``(time, flipped_site)`` events.
    """
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    L = len(alpha)
    spins = [0] * L
    occ = [0.0] * L
    t = 0.0
    events = 0
    path = [] if trajectory else None
    batch = 4096
    expo = rng.standard_exponential(batch)
    unif = rng.random(batch)
    k = 0
    while True:
        rates = []
        left = 0
        for i in range(L):
            s = spins[i]
            rates.append(alpha[i] if s != left else beta[i])
            left = s
        total = sum(rates)
        if total <= 0:
            raise ZeroTotalRate("no possible flip")
        if k == batch:
            expo = rng.standard_exponential(batch)
            unif = rng.random(batch)
            k = 0
        dwell = expo[k] / total
        u = unif[k] * total
        k += 1
        t_next = t + dwell
        lo, hi = max(t, t_burnin), min(t_next, t_total)
        if hi > lo:
            span = hi - lo
            for i in range(L):
                if spins[i]:
                    occ[i] += span
        if t_next >= t_total:
            break
        acc = 0.0
        site = L - 1
        for i, r in enumerate(rates):
            acc += r
            if u < acc:
                site = i
                break
        spins[site] ^= 1
        t = t_next
        events += 1
        if path is not None:
            path.append((t, site + 1))
    window = t_total - t_burnin
    result = ([x / window for x in occ], events)
    return result + (path,) if trajectory else result


def replica_seeds(seed: int, replicas: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(replicas)


def estimate_densities(sim: SimConfig, jobs: int = 1) -> DensityEstimate:
    """Pool time-averaged occupations over replicas; stderr from their spread."""
    alpha, beta = _rate_tables(sim.profile)
    seeds = replica_seeds(sim.seed, sim.replicas)
    args = [(alpha, beta, sim.t_total, sim.t_burnin, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_args, args))
    else:
        results = [_run_args(a) for a in args]
    means = np.array([r[0] for r in results])
    mean = means.mean(axis=0)
    if sim.replicas > 1:
        stderr = means.std(axis=0, ddof=1) / math.sqrt(sim.replicas)
    else:
        stderr = np.full(mean.shape, np.inf)
    return DensityEstimate(mean, stderr, means, [r[1] for r in results])


def _run_args(args):
    return run_replica(*args)


def compare_exact(est: DensityEstimate, profile: RateProfile, threshold: float = Z_THRESHOLD) -> dict:
    """Per-site z-scores of the estimate against the exact densities."""
    per_site = []
    for k in range(1, profile.L + 1):
        exact = exact_density(k, profile)
        se = float(est.stderr[k - 1])
        diff = float(est.mean[k - 1]) - float(exact)
        if se > 0:
            z = diff / se
        else:
            z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
        per_site.append({
            "site": k,
            "mean": float(est.mean[k - 1]),
            "stderr": se,
            "exact": _fraction_text(exact),
            "exact_value": float(exact),
            "z": z,
        })
    ok = all(abs(s["z"]) <= threshold for s in per_site)
    return {"per_site": per_site, "threshold": threshold, "verdict": "pass" if ok else "fail"}


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def relaxation_rate(profile: RateProfile, t_total: float, seed: int = 0, dt: float = 0.05,
                    max_lag: float = 3.0) -> float:
    """Empirical decay rate of the site-1 autocorrelation (diagnostic only).

    Fits ``log C(t)`` on lags where the autocorrelation is still above 0.05.
    """
    alpha, beta = _rate_tables(profile)
    _, _, path = run_replica(alpha, beta, t_total, 0.0, np.random.SeedSequence(seed), trajectory=True)
    n = int(t_total / dt)
    series = np.zeros(n)
    state, idx = 0, 0
    for j in range(n):
        t = j * dt
        while idx < len(path) and path[idx][0] <= t:
            if path[idx][1] == 1:
                state ^= 1
            idx += 1
        series[j] = state
    x = series - series.mean()
    var = x.var()
    if var == 0:
        return math.nan
    lags = np.arange(1, int(max_lag / dt))
    ac = np.array([np.mean(x[:-k] * x[k:]) / var for k in lags])
    keep = ac > 0.05
    if keep.sum() < 2:
        return math.nan
    slope = np.polyfit(lags[keep] * dt, np.log(ac[keep]), 1)[0]
    return -slope
