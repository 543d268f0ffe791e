from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from glauber.model import Config, RateProfile
from glauber.simulate import (
    SimConfig,
    compare_exact,
    estimate_densities,
    relaxation_rate,
    step,
)

TWO_SITE = RateProfile((Fraction(1), Fraction(2)), (Fraction(3), Fraction(1)))


def test_single_site_step_from_empty():
    p = RateProfile((Fraction(2),), (Fraction(5),))
    rng = np.random.default_rng(0)
    dwells = []
    for _ in range(4000):
        dt, nxt = step(Config.from_string("0"), p, rng)
        assert str(nxt) == "1"
        dwells.append(dt)
    assert abs(np.mean(dwells) - 1 / 5) < 0.02


def test_two_site_step_choice_probabilities():
    # from 10 both sites disagree with their left neighbour: rates alpha_1, alpha_2
    p = RateProfile((Fraction(1), Fraction(3)), (Fraction(7), Fraction(7)))
    rng = np.random.default_rng(1)
    counts = Counter(str(step(Config.from_string("10"), p, rng)[1]) for _ in range(8000))
    assert set(counts) == {"00", "11"}
    assert abs(counts["11"] / 8000 - 0.75) < 0.02


def test_matching_profile_passes_and_is_deterministic():
    sim = SimConfig(TWO_SITE, 2000.0, 10.0, seed=42, replicas=8)
    est = estimate_densities(sim)
    rep = compare_exact(est, TWO_SITE)
    assert rep["verdict"] == "pass"
    assert [s["exact"] for s in rep["per_site"]] == ["3/4", "7/12"]
    again = estimate_densities(sim)
    assert np.array_equal(est.mean, again.mean) and est.events == again.events


def test_parallel_replicas_match_serial():
    sim = SimConfig(TWO_SITE, 300.0, 0.0, seed=3, replicas=4)
    assert np.array_equal(estimate_densities(sim).mean, estimate_densities(sim, jobs=2).mean)


def test_zero_burnin_long_run_passes():
    sim = SimConfig(TWO_SITE, 4000.0, 0.0, seed=9, replicas=8)
    assert compare_exact(estimate_densities(sim), TWO_SITE)["verdict"] == "pass"


def test_swapped_rates_negative_control_fails():
    est = estimate_densities(SimConfig(TWO_SITE.swapped(), 2000.0, 10.0, seed=42, replicas=8))
    rep = compare_exact(est, TWO_SITE)
    assert rep["verdict"] == "fail"
    assert max(abs(s["z"]) for s in rep["per_site"]) > 4


def test_ferro_limit_equal_rates_half_density():
    p = RateProfile((Fraction(1),) + (Fraction(1),) * 3, (Fraction(1),) + (Fraction(0),) * 3)
    est = estimate_densities(SimConfig(p, 3000.0, 20.0, seed=5, replicas=8))
    rep = compare_exact(est, p)
    assert all(s["exact"] == "1/2" for s in rep["per_site"])
    assert rep["verdict"] == "pass"


def test_relaxation_rate_near_site_one_gap():
    # site 1 alone is a two-state chain relaxing at alpha_1 + beta_1
    p = RateProfile((Fraction(1), Fraction(2)), (Fraction(1, 2), Fraction(2)))
    rate = relaxation_rate(p, 3000.0, seed=2)
    assert abs(rate - 1.5) < 0.3


@pytest.mark.parametrize("kwargs", [
    {"t_total": 10.0, "t_burnin": 10.0},
    {"t_total": 10.0, "replicas": 0},
])
def test_invalid_configs(kwargs):
    with pytest.raises(ValueError):
        SimConfig(TWO_SITE, **kwargs)
    with pytest.raises(ValueError):
        SimConfig(RateProfile.symbolic_profile(1), 10.0)
