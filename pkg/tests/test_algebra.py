from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from glauber.algebra import (
    AllZero,
    ArityMismatch,
    DivisionByZero,
    KernelDimensionNotOne,
    MPoly,
    NotDivisible,
    RingMatrix,
    content_probe,
    determinant,
    eval_poly,
    exact_div,
    kernel_vector,
    mat_mul,
    normalize_vector,
    parse_poly,
    variable_names,
)

N = 3
exps = st.tuples(*[st.integers(0, 2)] * N)
polys = st.dictionaries(exps, st.integers(-6, 6), max_size=5).map(lambda t: MPoly(N, t))
nonzero_polys = polys.filter(bool)


def test_variable_names():
    assert variable_names(2) == ("a", "b")
    assert variable_names(4) == ("a1", "b1", "a2", "b2")
    assert variable_names(5)[-1] == "lam"


def test_canonical_text_and_parse():
    a1, b1, a2, b2 = (MPoly.var(i, 4) for i in range(4))
    p = 3 * a1 ** 2 * b2 - a2
    assert str(p) == "3*a1^2*b2 - a2"
    assert parse_poly(str(p), 4) == p
    assert str(MPoly.zero(4)) == "0"
    assert str(-MPoly.one(4)) == "-1"


@given(polys)
def test_parse_roundtrip(p):
    assert parse_poly(str(p), N) == p


@given(polys, polys, polys)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == MPoly.zero(N)


@given(polys, nonzero_polys)
def test_exact_div_recovers_factor(p, q):
    assert exact_div(p * q, q) == p


@given(polys, polys, st.tuples(*[st.integers(-4, 4)] * N))
def test_evaluation_is_a_homomorphism(p, q, pt):
    assert eval_poly(p * q, pt) == eval_poly(p, pt) * eval_poly(q, pt)
    assert eval_poly(p + q, pt) == eval_poly(p, pt) + eval_poly(q, pt)


def test_exact_div_examples():
    a, b = MPoly.var(0, 2), MPoly.var(1, 2)
    assert exact_div(a * a - b * b, a + b) == a - b
    assert exact_div(6 * a * b, 3 * a) == 2 * b
    with pytest.raises(NotDivisible):
        exact_div(a * a + b, a + b)
    with pytest.raises(NotDivisible):
        exact_div(a + b, MPoly.const(2, 2))
    with pytest.raises(DivisionByZero):
        exact_div(a, MPoly.zero(2))
    with pytest.raises(ArityMismatch):
        exact_div(a, MPoly.var(0, 3))
    assert exact_div(Fraction(3, 4), Fraction(1, 2)) == Fraction(3, 2)


def test_content_probe_detects_common_factor():
    a, b = MPoly.var(0, 2), MPoly.var(1, 2)
    shared = [(a + b) * a, (a + b) * b]
    assert content_probe(shared, trials=20).unit_points == 0
    free = [a, b]
    rep = content_probe(free, trials=50, stop_after=3)
    assert rep.unit_points == 3 and rep.verdict == "content-is-unit"
    with pytest.raises(AllZero):
        content_probe([MPoly.zero(2)])


def _matrix(rows):
    return RingMatrix([[Fraction(x) for x in r] for r in rows])


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_matmul_associative_and_matches_sympy(x, y, z):
    A, B, C = _matrix(x), _matrix(y), _matrix(z)
    assert mat_mul(mat_mul(A, B), C) == mat_mul(A, mat_mul(B, C))
    want = sp.Matrix(x) * sp.Matrix(y)
    got = mat_mul(A, B)
    assert all(got.data[i, j] == want[i, j] for i in range(3) for j in range(3))


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_determinant_matches_sympy(rows):
    assert determinant(_matrix(rows)) == sp.Matrix(rows).det()


@settings(max_examples=40)
@given(st.lists(st.integers(1, 9), min_size=6, max_size=6))
def test_kernel_backends_agree(rates):
    # a column-stochastic 3-state generator with a one-dimensional kernel
    r01, r02, r10, r12, r20, r21 = rates
    M = _matrix([[-(r10 + r20), r01, r02], [r10, -(r01 + r21), r12], [r20, r21, -(r02 + r12)]])
    v = kernel_vector(M, backend="python")
    assert v == kernel_vector(M, backend="flint")
    assert all(x == 0 for x in (mat_mul(M, RingMatrix([[x] for x in v])).data.flat))
    sym = sp.Matrix(M.tolist()).nullspace()[0]
    ratio = [Fraction(int(sp.fraction(s)[0]), int(sp.fraction(s)[1])) / x for s, x in zip(sym, v)]
    assert len(set(ratio)) == 1


def test_kernel_polynomial_two_state():
    a, b = MPoly.var(0, 2), MPoly.var(1, 2)
    M = RingMatrix([[-b, a], [b, -a]])
    assert kernel_vector(M) == [a, b]


def test_kernel_rejects_non_one_dimensional():
    with pytest.raises(KernelDimensionNotOne):
        kernel_vector(_matrix([[0, 0], [0, 0]]))
    with pytest.raises(KernelDimensionNotOne):
        kernel_vector(_matrix([[1, 0], [0, 1]]))


def test_normalize_vector_unit_convention():
    a = MPoly.var(0, 2)
    assert normalize_vector([-2 * a, -4 * a]) == [a, 2 * a]
    assert normalize_vector([Fraction(-1, 2), Fraction(1, 3)]) == [Fraction(3), Fraction(-2)]
