import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from glauber.algebra import MPoly, RingMatrix
from glauber.model import RateProfile, build_generator
from glauber.spectral import (
    SymbolicModeUnsupported,
    characteristic_polynomial,
    characteristic_polynomial_from_eigenvalues,
    conjugate,
    conjugate_and_check,
    conjugate_dense,
    diagonal_multiset,
    eigenvalues,
    hadamard_sign,
    involution_check,
    smallest_nonzero_magnitude,
    spectral_gap,
)


def test_sign_matrix_small_cases():
    assert hadamard_sign(1).tolist() == [[1, 1], [1, -1]]
    S = hadamard_sign(3)
    assert S[0].tolist() == [1] * 8
    assert S[1].tolist() == [1, 1, 1, 1, -1, -1, -1, -1]
    assert S[2].tolist() == [1, 1, -1, -1, 1, 1, -1, -1]
    assert np.array_equal(S, S.T)


@pytest.mark.parametrize("L", range(1, 9))
def test_involution(L):
    assert involution_check(L).passed


def test_one_site_conjugation_by_hand():
    p = RateProfile.symbolic_profile(1)
    a, b = p.alpha[0], p.beta[0]
    C = conjugate(build_generator(p).matrix, 1)
    zero = MPoly.zero(2)
    assert C == RingMatrix([[zero, zero], [2 * (a - b), -2 * (a + b)]])


def test_two_site_diagonal_row_order():
    p = RateProfile.symbolic_profile(2)
    a1, a2 = p.alpha
    b1, b2 = p.beta
    C = conjugate(build_generator(p).matrix, 2)
    # listed by the reversed word c-hat = 00, 01, 10, 11, i.e. rows c = 0, 2, 1, 3
    diag = [C.data[i, i] for i in (0, 2, 1, 3)]
    assert diag == [4 * x for x in (MPoly.zero(4), -(a2 + b2), -(a1 + b1), -(a1 + a2 + b1 + b2))]


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_fast_conjugation_matches_dense_product(L):
    M = build_generator(RateProfile.symbolic_profile(L)).matrix
    assert conjugate(M, L) == conjugate_dense(M, L)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_symbolic_triangularization(L):
    rep = conjugate_and_check(build_generator(RateProfile.symbolic_profile(L)), dense=True)
    assert rep.passed, rep.details


def test_six_sites_random_integer_upper_part_zero():
    rng = random.Random(11)
    p = RateProfile(tuple(rng.randint(1, 10) for _ in range(6)), tuple(rng.randint(1, 10) for _ in range(6)))
    rep = conjugate_and_check(build_generator(p))
    assert rep.details["triangular"] and rep.passed


def test_conjugation_flags_corrupted_generator():
    p = RateProfile((Fraction(2), Fraction(3)), (Fraction(1), Fraction(5)))
    gen = build_generator(p)
    gen.matrix.data[0, 3] = Fraction(7)
    rep = conjugate_and_check(gen)
    assert not rep.passed and rep.details.get("upper_violations")


def test_two_site_eigenvalues():
    p = RateProfile.symbolic_profile(2)
    a1, a2 = p.alpha
    b1, b2 = p.beta
    want = [MPoly.zero(4), -(a1 + b1), -(a2 + b2), -(a1 + a2 + b1 + b2)]
    ev = eigenvalues(p)
    assert ev.total == 4 and all(ev.multiplicity(x) == 1 for x in want)


def test_two_site_characteristic_polynomial_factorization():
    p = RateProfile.symbolic_profile(2)
    got = characteristic_polynomial(p)
    assert got == characteristic_polynomial_from_eigenvalues(p)
    a, b = oracles.symbols(2)
    lam = sp.Symbol("lam")
    want = lam * (lam + a[0] + b[0]) * (lam + a[1] + b[1]) * (lam + a[0] + a[1] + b[0] + b[1])
    assert sp.expand(oracles.poly_text_to_sympy(str(got)) - want) == 0
    # independent route: sympy's own determinant of the flip-rule generator
    M = oracles.flip_rule_generator(a, b)
    assert sp.expand((M - lam * sp.eye(4)).det(method="berkowitz") - want) == 0


def test_three_site_charpoly_by_elimination():
    p = RateProfile.symbolic_profile(3)
    assert characteristic_polynomial(p) == characteristic_polynomial_from_eigenvalues(p)


@st.composite
def positive_profiles(draw, max_L=6):
    L = draw(st.integers(1, max_L))
    r = st.fractions(min_value=Fraction(1, 5), max_value=10, max_denominator=5)
    return RateProfile(tuple(draw(st.lists(r, min_size=L, max_size=L))),
                       tuple(draw(st.lists(r, min_size=L, max_size=L))))


@settings(max_examples=30, deadline=None)
@given(positive_profiles())
def test_spectrum_invariants(p):
    ev = eigenvalues(p)
    assert ev.total == 2 ** p.L and ev.multiplicity(0) >= 1
    assert diagonal_multiset(build_generator(p)) == ev
    assert spectral_gap(p) == smallest_nonzero_magnitude(ev)


@settings(max_examples=15, deadline=None)
@given(positive_profiles(max_L=5))
def test_eigenvalues_agree_with_floating_point(p):
    dense = np.array(build_generator(p).matrix.tolist(), dtype=float)
    numeric = np.sort(np.linalg.eigvals(dense).real)
    exact = np.sort([float(v) for v, m in eigenvalues(p).items() for _ in range(m)])
    assert np.allclose(numeric, exact, atol=1e-6 * max(1.0, abs(exact).max()))


def test_gap_example_and_symbolic_error():
    p = RateProfile((Fraction(2), Fraction(1), Fraction(1)), (Fraction(3), Fraction(5), Fraction(2)))
    assert spectral_gap(p) == 3
    with pytest.raises(SymbolicModeUnsupported):
        spectral_gap(RateProfile.symbolic_profile(2))


@settings(max_examples=20, deadline=None)
@given(positive_profiles(max_L=4))
def test_integer_route_matches_dense_product_for_rationals(p):
    M = build_generator(p).matrix
    assert conjugate(M, p.L) == conjugate_dense(M, p.L)
