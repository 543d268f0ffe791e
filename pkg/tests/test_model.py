import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from glauber.algebra import MPoly, RingMatrix
from glauber.model import (
    Config,
    LTooSmall,
    ProfileError,
    RateProfile,
    SiteOutOfRange,
    build_generator,
    build_generator_recursive,
    load_profile,
    profile_from_document,
    second_order_blocks,
    site_flip_rate,
    symmetry_conjugation_check,
    transpose_symmetry_diagnostic,
)

rates = st.fractions(min_value=0, max_value=10, max_denominator=6)


@st.composite
def profiles(draw, min_L=1, max_L=5):
    L = draw(st.integers(min_L, max_L))
    alpha = draw(st.lists(rates, min_size=L, max_size=L))
    beta = draw(st.lists(rates, min_size=L, max_size=L))
    # keep alpha_i + beta_i > 0
    beta = [b if a + b > 0 else Fraction(1) for a, b in zip(alpha, beta)]
    return RateProfile(tuple(alpha), tuple(beta))


def test_config_index_roundtrip_and_order():
    assert [str(Config.from_index(i, 2)) for i in range(4)] == ["00", "01", "10", "11"]
    for L in range(1, 6):
        for i in range(1 << L):
            assert Config.from_index(i, L).index == i
    c = Config.from_string("10")
    assert c[0] == 0 and c[1] == 1 and c[2] == 0


def test_site_flip_rate_examples():
    p = RateProfile.symbolic_profile(2)
    a1, b1, a2, b2 = p.alpha[0], p.beta[0], p.alpha[1], p.beta[1]
    assert site_flip_rate(Config.from_string("10"), 2, p) == a2
    assert site_flip_rate(Config.from_string("00"), 1, p) == b1
    assert site_flip_rate(Config.from_string("11"), 2, p) == b2
    assert site_flip_rate(Config.from_string("10"), 1, p) == a1
    with pytest.raises(SiteOutOfRange):
        site_flip_rate(Config.from_string("10"), 3, p)


def test_one_site_generator():
    p = RateProfile.symbolic_profile(1)
    a, b = p.alpha[0], p.beta[0]
    assert build_generator(p).matrix == RingMatrix([[-b, a], [b, -a]])


def test_two_site_ferro_type_generator():
    a, b = MPoly.var(0, 2), MPoly.var(1, 2)
    p = RateProfile((a, MPoly.one(2)), (b, MPoly.zero(2)))
    one, zero = MPoly.one(2), MPoly.zero(2)
    want = RingMatrix([[-b, one, a, zero], [zero, -(1 + b), zero, a],
                       [b, zero, -(1 + a), zero], [zero, b, one, -a]])
    assert build_generator(p).matrix == want
    assert build_generator_recursive(p).matrix == want
    assert second_order_blocks(p).matrix == want


@pytest.mark.parametrize("L", [1, 2, 3])
def test_generator_matches_flip_rule_oracle(L):
    p = RateProfile.symbolic_profile(L)
    a, b = oracles.symbols(L)
    want = oracles.flip_rule_generator(a, b)
    got = build_generator(p).matrix
    for i in range(1 << L):
        for j in range(1 << L):
            assert oracles.poly_text_to_sympy(str(got.data[i, j])) - want[i, j] == 0


@settings(max_examples=40, deadline=None)
@given(profiles())
def test_generator_invariants(p):
    M = build_generator(p).matrix
    n = M.rows
    for c in range(n):
        assert sum(M.data[:, c]) == 0
        for b in range(n):
            if b != c and M.data[b, c]:
                assert bin(b ^ c).count("1") == 1
                assert M.data[b, c] in set(p.alpha) | set(p.beta)


@settings(max_examples=40, deadline=None)
@given(profiles())
def test_recursions_equal_direct(p):
    direct = build_generator(p).matrix
    assert build_generator_recursive(p).matrix == direct
    if p.L >= 2:
        assert second_order_blocks(p).matrix == direct


def test_recursion_block_structure():
    p = RateProfile.symbolic_profile(3)
    M = build_generator_recursive(p).matrix
    h = 4
    assert RingMatrix._wrap(M.data[:h, h:], M.ring) == RingMatrix.identity(h, M.ring, p.alpha[0])
    S = second_order_blocks(p).matrix
    q = 2
    assert RingMatrix._wrap(S.data[:q, q:2 * q], S.ring) == RingMatrix.identity(q, S.ring, p.alpha[1])
    assert RingMatrix._wrap(S.data[:q, 2 * q:3 * q], S.ring) == RingMatrix.identity(q, S.ring, p.alpha[0])


def test_second_order_needs_two_sites():
    with pytest.raises(LTooSmall):
        second_order_blocks(RateProfile.symbolic_profile(1))


@pytest.mark.parametrize("L", [1, 2, 3, 4])
@pytest.mark.parametrize("variant", [1, 2])
def test_spin_flip_symmetries_symbolic(L, variant):
    assert symmetry_conjugation_check(RateProfile.symbolic_profile(L), variant).passed


def test_transpose_symmetry_diagnostic():
    d = transpose_symmetry_diagnostic(RateProfile.symbolic_profile(1)).details
    assert d["literal_transpose_equals_swapped"] is False
    assert d["spectra_equal"] is True


def test_profile_document_parsing(tmp_path):
    doc = {"L": 3, "alpha": ["1", "2/3", 1], "beta": ["1/2", "0", "1"]}
    p = profile_from_document(doc)
    assert p.alpha == (1, Fraction(2, 3), 1) and p.beta[0] == Fraction(1, 2)
    assert profile_from_document(p.to_document()) == p
    f = tmp_path / "p.json"
    f.write_text(json.dumps(doc))
    assert load_profile(str(f)) == p
    assert profile_from_document({"L": 2, "symbolic": True}).symbolic
    ferro = profile_from_document({"L": 3, "limit": "ferro"})
    assert ferro.alpha[1:] == (MPoly.one(2), MPoly.one(2))


@pytest.mark.parametrize("doc, path", [
    ({"alpha": [1], "beta": [1]}, "L"),
    ({"L": 2, "alpha": [1], "beta": [1, 1]}, "alpha"),
    ({"L": 1, "alpha": ["x"], "beta": [1]}, "alpha[0]"),
    ({"L": 1, "alpha": [0], "beta": [0]}, ""),
    ({"L": 1, "alpha": [-1], "beta": [2]}, ""),
    ({"L": 2, "limit": "ferro", "symbolic": True}, "limit"),
    ({"L": 2, "limit": "sideways"}, "limit"),
])
def test_profile_document_errors(doc, path):
    with pytest.raises((ProfileError, ValueError)) as info:
        profile_from_document(doc)
    if path:
        assert getattr(info.value, "path", "") == path


def test_profile_bad_json(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{\"L\": 2,,}")
    with pytest.raises(ProfileError, match="line 1"):
        load_profile(str(f))


def test_random_rational_recursions_deterministic():
    rng = random.Random(3)
    p = RateProfile(tuple(Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(5)),
                    tuple(Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(5)))
    assert second_order_blocks(p).matrix == build_generator(p).matrix
