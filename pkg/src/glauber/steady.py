"""Stationary distributions, site densities and the normalization-factor check.

Densities are exact rationals for numeric profiles and ``(numerator,
denominator)`` polynomial pairs for symbolic ones.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import (
    MPoly,
    NotDivisible,
    ProbeReport,
    content_probe,
    exact_div,
    kernel_vector,
    mat_vec,
    ring_one,
    ring_zero,
)
from .model import CheckReport, RateProfile, SiteOutOfRange, build_generator, site_bit

log = logging.getLogger(__name__)

SYMBOLIC_CAP = 3
SYMBOLIC_STRETCH_CAP = 4


class SymbolicCapExceeded(ValueError):
    pass


@dataclass
class StationaryVector:
    """Kernel of the generator in canonical (content-free) form."""

    profile: RateProfile
    weights: list

    @property
    def L(self) -> int:
        return self.profile.L

    @property
    def mode(self) -> str:
        return "symbolic" if self.profile.symbolic else "rational"

    def total(self):
        return _sum(self.weights, self.profile.ring)

    def probabilities(self) -> list[Fraction]:
        if self.profile.symbolic:
            raise ValueError("probabilities of a symbolic vector are rational functions; use weights")
        tot = self.total()
        return [w / tot for w in self.weights]

    def to_dict(self) -> dict:
        L = self.L
        return {
            "L": L,
            "mode": self.mode,
            "weights": [
                {"config": format(i, f"0{L}b"), "weight": _text(w)}
                for i, w in enumerate(self.weights)
            ],
            "total": _text(self.total()),
        }


def _text(x) -> str:
    if isinstance(x, MPoly):
        return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _sum(xs, ring):
    total = ring_zero(ring)
    for x in xs:
        total = total + x
    return total


def stationary(profile: RateProfile, backend: str = "auto") -> StationaryVector:
    profile.validate_numeric()
    M = build_generator(profile).matrix
    return StationaryVector(profile, kernel_vector(M, backend=backend))


def residual_is_zero(v: StationaryVector) -> bool:
    M = build_generator(v.profile).matrix
    return all(not x for x in mat_vec(M, v.weights))


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

def fractions_equal(x, y) -> bool:
    """Equality of two densities, either rationals or (num, den) pairs."""
    if isinstance(x, tuple) or isinstance(y, tuple):
        xn, xd = x if isinstance(x, tuple) else (x, 1)
        yn, yd = y if isinstance(y, tuple) else (y, 1)
        return xn * yd == yn * xd
    return x == y


def _quotient(num, den, ring):
    if ring[0] == "Q":
        return Fraction(num) / Fraction(den)
    return (num, den)


def exact_density(k: int, profile: RateProfile):
    """Stationary probability that site ``k`` holds a 1, from the closed form.

    Numerator: sum over odd-size subsets ``s`` of ``{1..k}`` of
    ``prod_{i in s} beta_i * prod_{j not in s} alpha_j``; denominator:
    ``prod_{j <= k} (alpha_j + beta_j)``.
    """
    if not 1 <= k <= profile.L:
        raise SiteOutOfRange(f"site {k} outside 1..{profile.L}")
    ring = profile.ring
    num = ring_zero(ring)
    for size in range(1, k + 1, 2):
        for s in combinations(range(k), size):
            chosen = set(s)
            term = ring_one(ring)
            for j in range(k):
                term = term * (profile.beta[j] if j in chosen else profile.alpha[j])
            num = num + term
    den = ring_one(ring)
    for j in range(k):
        den = den * (profile.alpha[j] + profile.beta[j])
    return _quotient(num, den, ring)


def density_by_recurrence(k: int, profile: RateProfile):
    """Site density from the one-site master equation, iterated from site 1.

    ``rho_k = (alpha_k rho_{k-1} + beta_k (1 - rho_{k-1})) / (alpha_k + beta_k)``
    with ``rho_0 = 0`` (the virtual empty site).
    """
    if not 1 <= k <= profile.L:
        raise SiteOutOfRange(f"site {k} outside 1..{profile.L}")
    ring = profile.ring
    num, den = ring_zero(ring), ring_one(ring)
    for j in range(k):
        a, b = profile.alpha[j], profile.beta[j]
        num, den = a * num + b * (den - num), (a + b) * den
    return _quotient(num, den, ring)


def recurrence_check(k: int, profile: RateProfile) -> bool:
    """Does the closed form satisfy the one-step master-equation recurrence at ``k``?"""
    rho = exact_density(k, profile)
    if k == 1:
        prev = _quotient(ring_zero(profile.ring), ring_one(profile.ring), profile.ring)
    else:
        prev = exact_density(k - 1, profile)
    a, b = profile.alpha[k - 1], profile.beta[k - 1]
    if isinstance(prev, tuple):
        pn, pd = prev
        step = (a * pn + b * (pd - pn), (a + b) * pd)
    else:
        step = (a * prev + b * (1 - prev)) / (a + b)
    return fractions_equal(rho, step)


def marginal_density(v: StationaryVector, k: int):
    L = v.L
    if not 1 <= k <= L:
        raise SiteOutOfRange(f"site {k} outside 1..{L}")
    ring = v.profile.ring
    num = _sum((w for i, w in enumerate(v.weights) if site_bit(i, L, k)), ring)
    return _quotient(num, v.total(), ring)


def prefix_marginals(v: StationaryVector, k: int) -> dict:
    """Unnormalized joint weights of the first ``k`` spins, keyed by prefix word."""
    L = v.L
    ring = v.profile.ring
    out = {p: ring_zero(ring) for p in range(1 << k)}
    for i, w in enumerate(v.weights):
        out[i >> (L - k)] = out[i >> (L - k)] + w
    return out


def prefix_marginal_consistency(k: int, L_small: int, L_big: int, profile: RateProfile) -> CheckReport:
    """Joint law of sites ``1..k`` is the same for sizes ``L_small`` and ``L_big``.

    ``profile`` supplies the rates of the larger system; the smaller system
    uses its first ``L_small`` sites.
    """
    if not 1 <= k <= L_small <= L_big <= profile.L:
        raise ValueError(f"need 1 <= k <= L_small <= L_big <= L, got {k}, {L_small}, {L_big}, {profile.L}")
    small = stationary(profile.prefix(L_small))
    big = stationary(profile.prefix(L_big))
    ms, mb = prefix_marginals(small, k), prefix_marginals(big, k)
    ts, tb = small.total(), big.total()
    bad = [format(p, f"0{k}b") for p in ms if ms[p] * tb != mb[p] * ts]
    return CheckReport("prefix-marginals", not bad,
                       {"k": k, "L_small": L_small, "L_big": L_big, "mismatched_prefixes": bad})


# ---------------------------------------------------------------------------
# Normalization factor
# ---------------------------------------------------------------------------

def conjectured_factors(profile: RateProfile) -> list[MPoly]:
    """Linear factors ``alpha_i+beta_i`` and ``alpha_i+beta_i+alpha_j+beta_j`` (i < j)."""
    sums = [a + b for a, b in zip(profile.alpha, profile.beta)]
    return sums + [sums[i] + sums[j] for i, j in combinations(range(profile.L), 2)]


def conjectured_z(profile: RateProfile) -> MPoly:
    out = ring_one(profile.ring)
    for f in conjectured_factors(profile):
        out = out * f
    return out


@dataclass
class ConjectureReport:
    L: int
    S: MPoly
    Z_conj: MPoly
    quotient: MPoly | None
    divides_all: bool
    factors_tight: bool
    content_evidence: ProbeReport | None
    verdict: str
    reduced_weights: list = field(default_factory=list, repr=False)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "S": str(self.S),
            "Z_conj": str(self.Z_conj),
            "quotient": None if self.quotient is None else str(self.quotient),
            "divides_all": self.divides_all,
            "factors_tight": self.factors_tight,
            "content_evidence": None if self.content_evidence is None else self.content_evidence.to_dict(),
            "verdict": self.verdict,
            "notes": self.notes,
        }


def conjecture_check(L: int, stretch: bool = False, trials: int = 2000, seed: int = 0,
                     unit_points: int = 3) -> ConjectureReport:
    """Test the product formula for the normalization factor at size ``L``.

    1. ``S`` = sum of the symbolic stationary weights;
    2. ``q = S / Z_conj`` must be exact;
    3. ``q`` must divide every weight, and the reduced weights ``w / q`` (which
       sum to ``Z_conj``) must have unit content, probed at random points
       until ``unit_points`` of them give gcd 1;
    4. no linear factor of ``Z_conj`` divides every reduced weight.
    """
    cap = SYMBOLIC_STRETCH_CAP if stretch else SYMBOLIC_CAP
    if L > cap:
        raise SymbolicCapExceeded(f"symbolic L={L} exceeds the cap {cap}"
                                  + ("" if stretch else " (pass stretch=True for L=4)"))
    if L > SYMBOLIC_CAP:
        warnings.warn(f"symbolic elimination at L={L} is slow and memory hungry", RuntimeWarning)
    profile = RateProfile.symbolic_profile(L)
    v = stationary(profile)
    S = v.total()
    Z = conjectured_z(profile)
    notes = []
    try:
        q = exact_div(S, Z)
    except NotDivisible:
        return ConjectureReport(L, S, Z, None, False, False, None, "refuted",
                                notes=["sum of weights is not a multiple of Z_conj"])
    reduced = []
    divides_all = True
    for w in v.weights:
        try:
            reduced.append(exact_div(w, q))
        except NotDivisible:
            divides_all = False
            break
    if not divides_all:
        return ConjectureReport(L, S, Z, q, False, False, None, "refuted",
                                notes=["quotient S/Z_conj does not divide every weight"])
    tight = True
    for f in conjectured_factors(profile):
        if all(_divides(f, w) for w in reduced):
            tight = False
            notes.append(f"factor {f} divides every reduced weight")
    probe = content_probe(reduced, trials=trials, seed=seed, stop_after=unit_points)
    supported = tight and probe.unit_points >= unit_points
    verdict = "supported" if supported else "inconclusive"
    log.info("L=%d: quotient %s, verdict %s", L, q, verdict)
    return ConjectureReport(L, S, Z, q, True, tight, probe, verdict, reduced, notes)


def _divides(f, w) -> bool:
    try:
        exact_div(w, f)
    except NotDivisible:
        return False
    return True
