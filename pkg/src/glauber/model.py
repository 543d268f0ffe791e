"""Configurations, rate profiles and the generator of the spin-flip chain.

Configurations of ``L`` spins are indexed lexicographically with site 1 as
the most significant bit, so for ``L = 2`` the order is 00, 01, 10, 11.
Generator entries ``M[b, c]`` are the rate of the jump ``c -> b`` and every
column sums to zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (
    MPoly,
    RingMatrix,
    ring_of,
    ring_zero,
)


class ModelError(ValueError):
    pass


class SiteOutOfRange(ModelError, IndexError):
    pass


class LTooSmall(ModelError):
    pass


class ProfileError(ModelError):
    """Invalid profile document; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------

def site_bit(index: int, L: int, i: int) -> int:
    """Spin at site ``i`` (1-based) of configuration ``index``; site 0 is empty."""
    if i == 0:
        return 0
    return (index >> (L - i)) & 1


def site_mask(L: int, i: int) -> int:
    return 1 << (L - i)


def reverse_bits(index: int, L: int) -> int:
    out = 0
    for _ in range(L):
        out = (out << 1) | (index & 1)
        index >>= 1
    return out


@dataclass(frozen=True)
class Config:
    """A word of ``L`` spins."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ModelError(f"invalid spin word {self.bits!r}")

    @property
    def L(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | b
        return idx

    @classmethod
    def from_index(cls, index: int, L: int) -> "Config":
        if not 0 <= index < 1 << L:
            raise ModelError(f"index {index} outside [0, 2^{L})")
        return cls(tuple(site_bit(index, L, i) for i in range(1, L + 1)))

    @classmethod
    def from_string(cls, word: str) -> "Config":
        return cls(tuple(int(ch) for ch in word))

    def __getitem__(self, i: int) -> int:
        """Spin at site ``i`` (1-based), with the virtual site 0 always empty."""
        if i == 0:
            return 0
        if not 1 <= i <= self.L:
            raise SiteOutOfRange(f"site {i} outside 1..{self.L}")
        return self.bits[i - 1]

    def flip(self, i: int) -> "Config":
        if not 1 <= i <= self.L:
            raise SiteOutOfRange(f"site {i} outside 1..{self.L}")
        b = list(self.bits)
        b[i - 1] ^= 1
        return Config(tuple(b))

    def reversed(self) -> "Config":
        return Config(self.bits[::-1])

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def all_configs(L: int) -> list[Config]:
    return [Config.from_index(k, L) for k in range(1 << L)]


# ---------------------------------------------------------------------------
# Rate profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RateProfile:
    """Per-site rates ``alpha[i-1]`` (equalizing) and ``beta[i-1]`` (unequalizing).

    Rates are either all rationals or all polynomials over one ring.
    """

    alpha: tuple
    beta: tuple
    ring: tuple = field(default=None, compare=False)

    def __post_init__(self):
        alpha = tuple(self.alpha)
        beta = tuple(self.beta)
        if len(alpha) != len(beta) or not alpha:
            raise ProfileError(f"alpha/beta lengths {len(alpha)} and {len(beta)} must be equal and >= 1")
        rings = {ring_of(x) for x in alpha + beta}
        poly = [r for r in rings if r[0] == "Z[x]"]
        if len(poly) > 1:
            raise ProfileError(f"rates from several polynomial rings: {sorted(poly)}")
        ring = poly[0] if poly else ("Q",)
        if ring[0] == "Q":
            alpha = tuple(Fraction(x) for x in alpha)
            beta = tuple(Fraction(x) for x in beta)
        else:
            alpha = tuple(x if isinstance(x, MPoly) else MPoly.const(x, ring[1]) for x in alpha)
            beta = tuple(x if isinstance(x, MPoly) else MPoly.const(x, ring[1]) for x in beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "ring", ring)

    @property
    def L(self) -> int:
        return len(self.alpha)

    @property
    def symbolic(self) -> bool:
        return self.ring[0] == "Z[x]"

    @classmethod
    def symbolic_profile(cls, L: int) -> "RateProfile":
        """All ``2L`` rates are independent indeterminates ``a1, b1, ...``."""
        n = 2 * L
        return cls(tuple(MPoly.var(2 * i, n) for i in range(L)),
                   tuple(MPoly.var(2 * i + 1, n) for i in range(L)))

    def validate_numeric(self) -> "RateProfile":
        """Check ``rates >= 0`` and ``alpha_i + beta_i > 0`` (numeric mode only)."""
        if self.symbolic:
            return self
        for i, (a, b) in enumerate(zip(self.alpha, self.beta), start=1):
            if a < 0 or b < 0:
                raise ProfileError(f"negative rate at site {i}", f"site[{i}]")
            if a + b <= 0:
                raise ProfileError(f"alpha_{i} + beta_{i} must be positive", f"site[{i}]")
        return self

    def shifted(self) -> "RateProfile":
        """Rates of sites 2..L, relabelled as a system of size L-1."""
        return RateProfile(self.alpha[1:], self.beta[1:])

    def shifted_flipped(self) -> "RateProfile":
        """Sites 2..L seen from a left neighbour in state 1 (site-2 rates swapped)."""
        return RateProfile((self.beta[1],) + self.alpha[2:], (self.alpha[1],) + self.beta[2:])

    def swapped(self, sites: Sequence[int] | None = None) -> "RateProfile":
        """Exchange ``alpha_i`` and ``beta_i`` at the given sites (default: all)."""
        sites = set(range(1, self.L + 1) if sites is None else sites)
        a = tuple(self.beta[i - 1] if i in sites else self.alpha[i - 1] for i in range(1, self.L + 1))
        b = tuple(self.alpha[i - 1] if i in sites else self.beta[i - 1] for i in range(1, self.L + 1))
        return RateProfile(a, b)

    def prefix(self, k: int) -> "RateProfile":
        return RateProfile(self.alpha[:k], self.beta[:k])

    def to_document(self) -> dict:
        if self.symbolic:
            return {"L": self.L, "alpha": [str(x) for x in self.alpha],
                    "beta": [str(x) for x in self.beta], "symbolic": True}
        return {"L": self.L, "alpha": [_fraction_text(x) for x in self.alpha],
                "beta": [_fraction_text(x) for x in self.beta]}


def _fraction_text(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ProfileError("booleans are not rates", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ProfileError(f"cannot parse rational {value!r}", path) from exc
    raise ProfileError(f"expected integer or 'p/q' string, got {type(value).__name__}", path)


def profile_from_document(doc: dict) -> RateProfile:
    """Build a profile from its JSON document form.

    ``{"L": 3, "alpha": ["1", "2/3", "1"], "beta": ["1/2", "0", "1"]}``;
    ``"symbolic": true`` replaces all rates by indeterminates; ``"limit":
    "ferro" | "antiferro"`` selects a limit profile whose first-site rates
    are the optional scalars ``alpha``/``beta`` (indeterminates if omitted).
    """
    if not isinstance(doc, dict):
        raise ProfileError("profile document must be a JSON object")
    if "L" not in doc:
        raise ProfileError("missing field", "L")
    L = doc["L"]
    if isinstance(L, bool) or not isinstance(L, int) or L < 1:
        raise ProfileError(f"L must be a positive integer, got {L!r}", "L")
    symbolic = doc.get("symbolic", False)
    if not isinstance(symbolic, bool):
        raise ProfileError("must be true or false", "symbolic")
    limit = doc.get("limit")
    if limit is not None:
        from .limits import LimitKind, limit_profile

        if symbolic:
            raise ProfileError("'limit' and 'symbolic' are mutually exclusive", "limit")
        try:
            kind = LimitKind.parse(limit)
        except ValueError as exc:
            raise ProfileError(str(exc), "limit") from exc
        a, b = doc.get("alpha"), doc.get("beta")
        if isinstance(a, list) or isinstance(b, list):
            raise ProfileError("with 'limit', alpha and beta are single first-site rates", "limit")
        if a is None and b is None:
            return limit_profile(kind, L)
        if a is None or b is None:
            raise ProfileError("give both alpha and beta or neither", "limit")
        return limit_profile(kind, L, _parse_rational(a, "alpha"), _parse_rational(b, "beta"))
    if symbolic:
        return RateProfile.symbolic_profile(L)
    rates = {}
    for key in ("alpha", "beta"):
        arr = doc.get(key)
        if not isinstance(arr, list):
            raise ProfileError("expected an array of rates", key)
        if len(arr) != L:
            raise ProfileError(f"length {len(arr)} != L = {L}", key)
        rates[key] = tuple(_parse_rational(x, f"{key}[{i}]") for i, x in enumerate(arr))
    return RateProfile(rates["alpha"], rates["beta"]).validate_numeric()


def load_profile(path: str) -> RateProfile:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProfileError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return profile_from_document(doc)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Generator:
    profile: RateProfile
    matrix: RingMatrix

    @property
    def L(self) -> int:
        return self.profile.L

    @property
    def size(self) -> int:
        return self.matrix.rows


def _flip_rate(index: int, L: int, i: int, profile: RateProfile):
    if site_bit(index, L, i - 1) != site_bit(index, L, i):
        return profile.alpha[i - 1]
    return profile.beta[i - 1]


def site_flip_rate(cfg: Config, i: int, profile: RateProfile):
    """Rate at which site ``i`` flips in configuration ``cfg``.

    A spin that differs from its left neighbour flips at ``alpha_i``; one that
    agrees flips at ``beta_i``. Site 1 compares with an always-empty site 0.
    """
    if not 1 <= i <= cfg.L:
        raise SiteOutOfRange(f"site {i} outside 1..{cfg.L}")
    if cfg.L != profile.L:
        raise ModelError(f"configuration length {cfg.L} != profile length {profile.L}")
    return _flip_rate(cfg.index, cfg.L, i, profile)


def build_generator(profile: RateProfile) -> Generator:
    L = profile.L
    n = 1 << L
    M = RingMatrix.zeros(n, n, profile.ring)
    data = M.data
    for c in range(n):
        out = ring_zero(profile.ring)
        for i in range(1, L + 1):
            rate = _flip_rate(c, L, i, profile)
            data[c ^ site_mask(L, i), c] = rate
            out = out + rate
        data[c, c] = -out
    return Generator(profile, M)


def _base_generator(profile: RateProfile) -> RingMatrix:
    a, b = profile.alpha[0], profile.beta[0]
    return RingMatrix([[-b, a], [b, -a]], profile.ring)


def build_generator_recursive(profile: RateProfile) -> Generator:
    """Assemble the generator from two generators of size ``L-1``.

    ``[[M(sites 2..L) - beta_1, alpha_1], [beta_1, M'(sites 2..L) - alpha_1]]``
    where ``M'`` has the site-2 rates exchanged.
    """
    return Generator(profile, _recursive(profile))


def _recursive(profile: RateProfile) -> RingMatrix:
    if profile.L == 1:
        return _base_generator(profile)
    a1, b1 = profile.alpha[0], profile.beta[0]
    h = 1 << (profile.L - 1)
    top = _recursive(profile.shifted()).add_diagonal(-b1)
    bottom = _recursive(profile.shifted_flipped()).add_diagonal(-a1)
    return RingMatrix.block([
        [top, RingMatrix.identity(h, profile.ring, a1)],
        [RingMatrix.identity(h, profile.ring, b1), bottom],
    ])


def second_order_blocks(profile: RateProfile) -> Generator:
    """Assemble the generator as a 4x4 block matrix from size ``L-2`` generators."""
    if profile.L < 2:
        raise LTooSmall(f"second-order blocks need L >= 2, got {profile.L}")
    return Generator(profile, _second_order(profile))


def _generator_l_minus_2(alpha: tuple, beta: tuple, ring: tuple) -> RingMatrix:
    if not alpha:
        return RingMatrix.zeros(1, 1, ring)
    sub = RateProfile(alpha, beta)
    if sub.L == 1:
        return _base_generator(sub)
    return _second_order(sub)


def _second_order(profile: RateProfile) -> RingMatrix:
    ring = profile.ring
    (a1, a2), (b1, b2) = profile.alpha[:2], profile.beta[:2]
    rest_a, rest_b = profile.alpha[2:], profile.beta[2:]
    m11 = _generator_l_minus_2(rest_a, rest_b, ring)
    if rest_a:
        m22 = _generator_l_minus_2((rest_b[0],) + rest_a[1:], (rest_a[0],) + rest_b[1:], ring)
    else:
        m22 = m11
    h = m11.rows
    eye = lambda c: RingMatrix.identity(h, ring, c)  # noqa: E731
    zero = RingMatrix.zeros(h, h, ring)
    return RingMatrix.block([
        [m11.add_diagonal(-(b1 + b2)), eye(a2), eye(a1), zero],
        [eye(b2), m22.add_diagonal(-(b1 + a2)), zero, eye(a1)],
        [eye(b1), zero, m11.add_diagonal(-(a1 + a2)), eye(b2)],
        [zero, eye(b1), eye(a2), m22.add_diagonal(-(a1 + b2))],
    ])


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.name, "passed": self.passed, **self.details}


def _difference_details(mine: RingMatrix, theirs: RingMatrix) -> dict:
    diff = mine.first_difference(theirs)
    if diff is None:
        return {}
    i, j, x, y = diff
    return {"first_difference": {"row": i, "col": j, "got": str(x), "expected": str(y)}}


def conjugate_by_flip(M: RingMatrix, mask: int) -> RingMatrix:
    """``P M P`` where ``P`` permutes configurations by xor with ``mask``."""
    perm = np.arange(M.rows) ^ mask
    return RingMatrix._wrap(M.data[np.ix_(perm, perm)], M.ring)


def conjugate_by_reversal(M: RingMatrix) -> RingMatrix:
    """``J M J`` with ``J`` the antidiagonal matrix (works for rectangular M)."""
    return RingMatrix._wrap(M.data[::-1, ::-1].copy(), M.ring)


def symmetry_conjugation_check(profile: RateProfile, variant: int) -> CheckReport:
    """Spin-flip symmetries of the chain.

    Variant 1 flips every odd site and exchanges all rates; variant 2 flips
    every even site and exchanges the rates of sites 2..L.
    """
    L = profile.L
    if variant == 1:
        sites = [i for i in range(1, L + 1) if i % 2 == 1]
        swapped = profile.swapped()
    elif variant == 2:
        sites = [i for i in range(1, L + 1) if i % 2 == 0]
        swapped = profile.swapped(range(2, L + 1))
    else:
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    mask = 0
    for i in sites:
        mask |= site_mask(L, i)
    M = build_generator(profile).matrix
    conj = conjugate_by_flip(build_generator(swapped).matrix, mask)
    return CheckReport(f"symmetry-variant-{variant}", conj == M,
                       {"L": L, "flipped_sites": sites, **_difference_details(conj, M)})


def transpose_symmetry_diagnostic(profile: RateProfile) -> CheckReport:
    """Which readings of "invariant under transposition and alpha <-> beta" hold.

    Always passes; the outcome of each reading is recorded in ``details``.
    """
    from .spectral import eigenvalues

    M = build_generator(profile).matrix
    Ms = build_generator(profile.swapped()).matrix
    literal = M.T == Ms
    reversal = conjugate_by_reversal(M.T) == Ms
    spectrum = eigenvalues(profile).counts == eigenvalues(profile.swapped()).counts
    return CheckReport("transpose-symmetry-diagnostic", True, {
        "L": profile.L,
        "literal_transpose_equals_swapped": literal,
        "reversed_transpose_equals_swapped": reversal,
        "spectra_equal": spectrum,
    })
