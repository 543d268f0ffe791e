import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from glauber.algebra import MPoly
from glauber.model import RateProfile, SiteOutOfRange
from glauber.steady import (
    SymbolicCapExceeded,
    conjecture_check,
    conjectured_z,
    density_by_recurrence,
    exact_density,
    fractions_equal,
    marginal_density,
    prefix_marginal_consistency,
    recurrence_check,
    residual_is_zero,
    stationary,
)

# matrix-tree cofactors of -M_2, computed once with sympy (tests/oracles.py)
TWO_SITE_WEIGHTS = [
    "a1*(a1*a2 + a2**2 + a2*b2 + b1*b2)",
    "a1*(a1*b2 + a2*b1 + a2*b2 + b2**2)",
    "b1*(a1*a2 + a2*b2 + b1*b2 + b2**2)",
    "b1*(a1*b2 + a2**2 + a2*b1 + a2*b2)",
]


def _sym(text):
    return oracles.poly_text_to_sympy(str(text))


def test_one_site_weights():
    p = RateProfile.symbolic_profile(1)
    v = stationary(p)
    assert v.weights == [p.alpha[0], p.beta[0]]


def test_two_site_weights_match_frozen_cofactors():
    v = stationary(RateProfile.symbolic_profile(2))
    for got, want in zip(v.weights, TWO_SITE_WEIGHTS):
        assert sp.expand(_sym(got) - sp.sympify(want)) == 0
    assert residual_is_zero(v)


def test_two_site_cofactor_oracle_live():
    a, b = oracles.symbols(2)
    cof = oracles.cofactor_weights(oracles.flip_rule_generator(a, b))
    assert [sp.expand(c - sp.sympify(w)) for c, w in zip(cof, TWO_SITE_WEIGHTS)] == [0] * 4


def test_site_one_marginal_two_sites():
    p = RateProfile.symbolic_profile(2)
    num, den = marginal_density(stationary(p), 1)
    assert num * (p.alpha[0] + p.beta[0]) == p.beta[0] * den


def test_four_sites_all_ones_is_positive_kernel():
    p = RateProfile((1,) * 4, (1,) * 4)
    v = stationary(p)
    assert residual_is_zero(v) and all(w > 0 for w in v.weights)


def test_density_examples():
    p = RateProfile.symbolic_profile(2)
    a1, a2 = p.alpha
    b1, b2 = p.beta
    assert fractions_equal(exact_density(1, p), (b1, a1 + b1))
    want = (b1 * a2 + a1 * b2, (a1 + b1) * (a2 + b2))
    assert fractions_equal(exact_density(2, p), want)
    assert fractions_equal(density_by_recurrence(2, p), want)
    assert recurrence_check(2, p)
    with pytest.raises(SiteOutOfRange):
        exact_density(3, p)


@pytest.mark.parametrize("k", range(1, 7))
def test_recurrence_symbolic(k):
    assert recurrence_check(k, RateProfile.symbolic_profile(6))


def test_three_site_marginal_matches_closed_form():
    p = RateProfile((Fraction(1), Fraction(2, 3), Fraction(1)), (Fraction(1, 2), Fraction(0), Fraction(1)))
    v = stationary(p)
    for k in (1, 2, 3):
        assert marginal_density(v, k) == exact_density(k, p)


def test_symbolic_marginals_match_closed_form_three_sites():
    p = RateProfile.symbolic_profile(3)
    v = stationary(p)
    for k in (1, 2, 3):
        assert fractions_equal(marginal_density(v, k), exact_density(k, p))


def test_prefix_examples():
    p = RateProfile((Fraction(2), Fraction(1, 3), Fraction(5), Fraction(1)),
                    (Fraction(1), Fraction(4), Fraction(1, 2), Fraction(3)))
    assert prefix_marginal_consistency(1, 1, 3, p).passed
    assert prefix_marginal_consistency(2, 2, 4, p).passed
    assert marginal_density(stationary(p.prefix(1)), 1) == Fraction(1, 3)


rates = st.fractions(min_value=Fraction(1, 4), max_value=8, max_denominator=4)


@st.composite
def profiles(draw, max_L=6):
    L = draw(st.integers(1, max_L))
    return RateProfile(tuple(draw(st.lists(rates, min_size=L, max_size=L))),
                       tuple(draw(st.lists(rates, min_size=L, max_size=L))))


@settings(max_examples=25, deadline=None)
@given(profiles())
def test_stationary_properties(p):
    v = stationary(p)
    assert residual_is_zero(v)
    assert all(w > 0 for w in v.weights)
    assert sum(v.probabilities()) == 1
    assert v.weights == stationary(p, backend="python").weights
    for k in range(1, p.L + 1):
        assert marginal_density(v, k) == exact_density(k, p) == density_by_recurrence(k, p)


@settings(max_examples=10, deadline=None)
@given(profiles(max_L=5), st.data())
def test_prefix_invariance_property(p, data):
    k = data.draw(st.integers(1, p.L))
    L_small = data.draw(st.integers(k, p.L))
    assert prefix_marginal_consistency(k, L_small, p.L, p).passed


def test_conjecture_two_sites():
    rep = conjecture_check(2)
    assert rep.verdict == "supported" and rep.quotient == MPoly.one(4)
    a, b = oracles.symbols(2)
    want = (a[0] + b[0]) * (a[1] + b[1]) * (a[0] + b[0] + a[1] + b[1])
    assert sp.expand(_sym(rep.Z_conj) - want) == 0
    assert rep.S == rep.Z_conj


def test_conjecture_one_and_three_sites():
    assert conjecture_check(1).verdict == "supported"
    rep = conjecture_check(3)
    p = RateProfile.symbolic_profile(3)
    assert rep.verdict == "supported" and rep.divides_all and rep.factors_tight
    assert rep.content_evidence.unit_points >= 3
    assert rep.quotient == sum(p.alpha, MPoly.zero(6)) + sum(p.beta, MPoly.zero(6))
    assert sum(rep.reduced_weights, MPoly.zero(6)) == conjectured_z(p)


def test_conjecture_three_sites_against_cofactor_gcd():
    a, b = oracles.symbols(3)
    cof = oracles.cofactor_weights(oracles.flip_rule_generator(a, b))
    g = sp.gcd_list(cof)
    rep = conjecture_check(3)
    assert sp.expand(_sym(rep.quotient) - g) == 0
    reduced = [sp.cancel(c / g) for c in cof]
    assert all(sp.expand(_sym(r) - w) == 0 for r, w in zip(rep.reduced_weights, reduced))


def test_conjecture_cap():
    with pytest.raises(SymbolicCapExceeded):
        conjecture_check(4)


def test_probabilities_symbolic_refused():
    with pytest.raises(ValueError):
        stationary(RateProfile.symbolic_profile(1)).probabilities()


def test_random_rational_three_site_density():
    rng = random.Random(5)
    for _ in range(5):
        p = RateProfile(tuple(Fraction(rng.randint(0, 9), rng.randint(1, 5)) for _ in range(3)),
                        tuple(Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(3)))
        assert marginal_density(stationary(p), 2) == exact_density(2, p)
