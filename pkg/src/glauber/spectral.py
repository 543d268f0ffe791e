"""Bit-reversed Hadamard conjugation and the exact spectrum.

All matrices here use the unnormalized +-1 sign matrix ``S`` with
``S[b, c] = (-1)^(rev(b) . c)``, so ``S @ S == 2^L I`` and every check stays
over integers or polynomials.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

import numpy as np

from .algebra import MPoly, RingMatrix, ring_zero
from .model import CheckReport, Generator, RateProfile, reverse_bits, site_bit


class SymbolicModeUnsupported(ValueError):
    pass


def hadamard_sign(L: int) -> np.ndarray:
    """The ``2^L x 2^L`` sign matrix as an int64 array."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    n = 1 << L
    rev = np.array([reverse_bits(b, L) for b in range(n)])
    c = np.arange(n)
    parity = np.zeros((n, n), dtype=np.int64)
    anded = rev[:, None] & c[None, :]
    for k in range(L):
        parity ^= (anded >> k) & 1
    return 1 - 2 * parity


def involution_check(L: int) -> CheckReport:
    S = hadamard_sign(L)
    sq = S @ S
    expected = (1 << L) * np.eye(1 << L, dtype=np.int64)
    ok = bool(np.array_equal(sq, expected)) and bool(np.array_equal(S, S.T))
    return CheckReport("hadamard-involution", ok, {"L": L, "symmetric": bool(np.array_equal(S, S.T))})


def hadamard_apply(X: np.ndarray, L: int) -> np.ndarray:
    """``S @ X`` for an object (or numeric) array, via a fast Walsh-Hadamard pass.

    Only additions and subtractions are used, so the result is exact in any
    ring. Rows of the plain Walsh transform are then permuted by bit reversal.
    """
    n = 1 << L
    if X.shape[0] != n:
        raise ValueError(f"expected {n} rows, got {X.shape[0]}")
    m = X.shape[1]
    Y = X
    h = 1
    while h < n:
        Y = Y.reshape(n // (2 * h), 2, h, m)
        a, b = Y[:, 0], Y[:, 1]
        Y = np.stack([a + b, a - b], axis=1).reshape(n, m)
        h *= 2
    rev = np.array([reverse_bits(b, L) for b in range(n)])
    return Y[rev]


def conjugate(M: RingMatrix, L: int) -> RingMatrix:
    """``S @ M @ S`` computed with two fast transforms.

    Rational matrices are scaled to integers first; the transform then runs on
    int64 when ``4^L`` times the largest entry fits, else on Python ints.
    """
    if M.ring[0] != "Q":
        return RingMatrix._wrap(_conjugate_array(M.data, L), M.ring)
    den = 1
    for x in M.data.flat:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = np.array([[int(x * den) for x in row] for row in M.data], dtype=object)
    bound = max((abs(x) for x in ints.flat), default=0) << (2 * L)
    if bound < 2 ** 62:
        ints = ints.astype(np.int64)
    out = _conjugate_array(ints, L)
    data = np.empty(out.shape, dtype=object)
    for idx, y in np.ndenumerate(out):
        data[idx] = Fraction(int(y), den)
    return RingMatrix._wrap(data, M.ring)


def _conjugate_array(X: np.ndarray, L: int) -> np.ndarray:
    left = hadamard_apply(X, L)
    return np.ascontiguousarray(hadamard_apply(np.ascontiguousarray(left.T), L).T)


def conjugate_dense(M: RingMatrix, L: int) -> RingMatrix:
    """Same product by explicit matrix multiplication (reference route)."""
    S = RingMatrix(hadamard_sign(L).astype(object).tolist(), M.ring)
    return S @ M @ S


def _diag_entry(profile: RateProfile, c: int):
    L = profile.L
    rc = reverse_bits(c, L)
    total = ring_zero(profile.ring)
    for i in range(1, L + 1):
        if site_bit(rc, L, i):
            total = total + profile.alpha[i - 1] + profile.beta[i - 1]
    return -total


def site_mask_pair(L: int, i: int) -> int:
    """Positions ``i-1, i`` of a word (only position 1 when ``i = 1``).

    Strictly-lower entries of ``S M S`` sit where the reversed row and column
    words differ by exactly this mask, with bit ``i`` set in the row word;
    their value is ``2^L (alpha_i - beta_i)``.
    """
    m = 1 << (L - i)
    if i > 1:
        m |= 1 << (L - i + 1)
    return m


def expected_conjugate(profile: RateProfile) -> RingMatrix:
    """The triangular matrix ``S M S`` predicted by the diagonal and sub-diagonal rules."""
    L = profile.L
    n = 1 << L
    scale = 1 << L
    zero = ring_zero(profile.ring)
    out = np.empty((n, n), dtype=object)
    out.fill(zero)
    rev = [reverse_bits(x, L) for x in range(n)]
    for c in range(n):
        out[c, c] = _diag_entry(profile, c) * scale
    for i in range(1, L + 1):
        pattern = site_mask_pair(L, i)
        value = (profile.alpha[i - 1] - profile.beta[i - 1]) * scale
        if not value:
            continue
        for d in range(n):
            rd = rev[d]
            if site_bit(rd, L, i):
                continue
            out[rev[rd ^ pattern], d] = value
    return RingMatrix._wrap(out, profile.ring)


_differs = np.frompyfunc(lambda x, y: x != y, 2, 1)


def conjugate_and_check(gen: Generator, dense: bool = False) -> CheckReport:
    """Triangularity, diagonal and sub-diagonal structure of ``S M S``."""
    profile = gen.profile
    L = profile.L
    C = conjugate_dense(gen.matrix, L) if dense else conjugate(gen.matrix, L)
    want = expected_conjugate(profile)
    bad = np.argwhere(_differs(C.data, want.data).astype(bool))
    upper_bad, diag_bad, lower_bad = [], [], []
    for c, d in bad:
        c, d = int(c), int(d)
        entry = (c, d, str(C.data[c, d]), str(want.data[c, d]))
        (upper_bad if d > c else diag_bad if d == c else lower_bad).append(entry)
    details = {
        "L": L,
        "triangular": not upper_bad,
        "diagonal_match": not diag_bad,
        "offdiag_structure": not lower_bad,
    }
    for key, found in (("upper_violations", upper_bad), ("diagonal_violations", diag_bad),
                       ("lower_violations", lower_bad)):
        if found:
            details[key] = found[:10]
    return CheckReport("hadamard-triangular", not (upper_bad or diag_bad or lower_bad), details)


@dataclass
class EigenvalueMultiset:
    counts: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def multiplicity(self, value) -> int:
        return self.counts.get(value, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, EigenvalueMultiset):
            return self.counts == other.counts
        return NotImplemented

    def items(self) -> list:
        """``(eigenvalue, multiplicity)`` pairs, numerics sorted descending."""
        items = list(self.counts.items())
        if items and not isinstance(items[0][0], MPoly):
            items.sort(key=lambda kv: kv[0], reverse=True)
        else:
            items.sort(key=lambda kv: (-kv[0].degree(), str(kv[0])))
        return items

    @classmethod
    def from_values(cls, values: Iterable) -> "EigenvalueMultiset":
        return cls(Counter(values))


def eigenvalues(profile: RateProfile) -> EigenvalueMultiset:
    """``{-sum_i b_i (alpha_i + beta_i) : b in {0,1}^L}`` with multiplicities."""
    sums = [a + b for a, b in zip(profile.alpha, profile.beta)]
    zero = ring_zero(profile.ring)
    values = []
    for bits in product((0, 1), repeat=profile.L):
        total = zero
        for bit, s in zip(bits, sums):
            if bit:
                total = total + s
        values.append(-total)
    return EigenvalueMultiset.from_values(values)


def diagonal_multiset(gen: Generator) -> EigenvalueMultiset:
    """Diagonal of ``S M S / 2^L`` as a multiset."""
    C = conjugate(gen.matrix, gen.L)
    scale = 1 << gen.L
    vals = []
    for i in range(C.rows):
        x = C.data[i, i]
        vals.append(Fraction(x) / scale if not isinstance(x, MPoly) else _div_scale(x, scale))
    return EigenvalueMultiset.from_values(vals)


def _div_scale(p: MPoly, scale: int) -> MPoly:
    from .algebra import exact_div

    return exact_div(p, scale)


def spectral_gap(profile: RateProfile):
    if profile.symbolic:
        raise SymbolicModeUnsupported("the spectral gap needs numeric rates")
    return min(a + b for a, b in zip(profile.alpha, profile.beta))


def smallest_nonzero_magnitude(spec: EigenvalueMultiset):
    mags = [abs(v) for v in spec.counts if v != 0]
    return min(mags) if mags else None


def characteristic_polynomial(profile: RateProfile) -> MPoly:
    """``det(M - lam I)`` in the ring with ``lam`` appended as the last variable.

    Computed by fraction-free elimination of the generator itself, not from
    the eigenvalue formula.
    """
    from .algebra import determinant
    from .model import build_generator

    if not profile.symbolic or profile.ring[1] != 2 * profile.L:
        raise SymbolicModeUnsupported("characteristic_polynomial needs the full symbolic profile")
    n_old = 2 * profile.L
    n_new = n_old + 1
    lift = lambda p: MPoly(n_new, {e + (0,): c for e, c in p.terms.items()})  # noqa: E731
    M = build_generator(profile).matrix
    lam = MPoly.var(n_old, n_new)
    size = M.rows
    rows = []
    for i in range(size):
        row = [lift(M.data[i, j]) for j in range(size)]
        row[i] = row[i] - lam
        rows.append(row)
    return determinant(RingMatrix(rows, ("Z[x]", n_new)))


def characteristic_polynomial_from_eigenvalues(profile: RateProfile) -> MPoly:
    """``prod_b (lam + sum_i b_i (alpha_i + beta_i))``, expanded."""
    n_old = 2 * profile.L
    n_new = n_old + 1
    lam = MPoly.var(n_old, n_new)
    out = MPoly.one(n_new)
    for value, mult in eigenvalues(profile).counts.items():
        lifted = MPoly(n_new, {e + (0,): c for e, c in value.terms.items()})
        out = out * (lam - lifted) ** mult
    return out
