"""Exact scalar rings and dense exact linear algebra.

Two scalar rings are used throughout the package:

* rationals, represented by :class:`fractions.Fraction` (plain ``int`` is
  accepted wherever a rational is expected);
* polynomials with integer coefficients in a fixed number of variables,
  represented by :class:`MPoly`.

A :class:`RingMatrix` holds entries from exactly one of these rings.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np


class AlgebraError(Exception):
    """Base class for errors raised by the exact algebra layer."""


class NotDivisible(AlgebraError, ArithmeticError):
    pass


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class DimensionMismatch(AlgebraError, ValueError):
    pass


class RingMismatch(AlgebraError, TypeError):
    pass


class ArityMismatch(AlgebraError, ValueError):
    pass


class KernelDimensionNotOne(AlgebraError, ValueError):
    pass


class AllZero(AlgebraError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def variable_names(nvars: int) -> tuple[str, ...]:
    """Names of the indeterminates for a given arity.

    Arity 2 is the two-parameter ring ``a, b``; any other even arity ``2L``
    is ``a1, b1, a2, b2, ..., aL, bL`` (stored in that order). An odd arity
    ``2L + 1`` appends a spectral variable ``lam``.
    """
    if nvars == 2:
        return ("a", "b")
    names = []
    for i in range(1, nvars // 2 + 1):
        names += [f"a{i}", f"b{i}"]
    if nvars % 2:
        names.append("lam")
    return tuple(names)


def _grlex_key(exps: tuple[int, ...]):
    # variables are stored smallest first, so lex compares from the back
    return (sum(exps), exps[::-1])


class MPoly:
    """Sparse multivariate polynomial with integer coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    integers. Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int, nvars: int) -> "MPoly":
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise RingMismatch(f"non-integral constant {c} in integer polynomial ring")
            c = c.numerator
        return cls._raw(nvars, {(0,) * nvars: int(c)} if c else {})

    @classmethod
    def var(cls, index: int, nvars: int) -> "MPoly":
        if not 0 <= index < nvars:
            raise ArityMismatch(f"variable index {index} outside arity {nvars}")
        e = [0] * nvars
        e[index] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls._raw(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "MPoly":
        return cls._raw(nvars, {(0,) * nvars: 1})

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"arity {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.const(other, self.nvars)
        return NotImplemented

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * self.nvars: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __pos__(self) -> "MPoly":
        return self

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.nvars, out)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other == 0:
                return MPoly.zero(self.nvars)
            return MPoly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return MPoly.zero(self.nvars)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([x + y for x, y in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = MPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure --------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise AllZero("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def content(self) -> int:
        """Gcd of the integer coefficients (0 for the zero polynomial)."""
        return reduce(math.gcd, self.terms.values(), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def substitute(self, perm: Sequence[int]) -> "MPoly":
        """Rename variables: variable ``i`` becomes variable ``perm[i]``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, k in enumerate(e):
                ne[perm[i]] += k
            out[tuple(ne)] = c
        return MPoly._raw(self.nvars, out)

    def __call__(self, point: Sequence) -> Fraction:
        return eval_poly(self, point)

    # -- text -------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = variable_names(self.nvars)
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for name, k in zip(names, e):
                if k == 1:
                    mono.append(name)
                elif k:
                    mono.append(f"{name}^{k}")
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = "*".join(mono)
            else:
                body = "*".join([str(a)] + mono)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MPoly({self})"


def parse_poly(text: str, nvars: int) -> MPoly:
    """Parse the canonical text form produced by ``str(MPoly)``."""
    names = {n: i for i, n in enumerate(variable_names(nvars))}
    s = text.replace(" ", "")
    if s in ("", "0"):
        return MPoly.zero(nvars)
    if s[0] not in "+-":
        s = "+" + s
    terms: dict = {}
    i = 0
    while i < len(s):
        sign = -1 if s[i] == "-" else 1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        coef = 1
        e = [0] * nvars
        for factor in s[i + 1:j].split("*"):
            if factor.isdigit():
                coef *= int(factor)
                continue
            name, _, power = factor.partition("^")
            if name not in names:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            e[names[name]] += int(power) if power else 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + sign * coef
        i = j
    return MPoly(nvars, terms)


# ---------------------------------------------------------------------------
# Generic scalar helpers
# ---------------------------------------------------------------------------

def ring_of(x) -> tuple:
    """``("Q",)`` for rationals, ``("Z[x]", n)`` for polynomials in n variables."""
    if isinstance(x, MPoly):
        return ("Z[x]", x.nvars)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ("Q",)
    raise RingMismatch(f"unsupported scalar type {type(x).__name__}")


def ring_zero(ring: tuple):
    return Fraction(0) if ring[0] == "Q" else MPoly.zero(ring[1])


def ring_one(ring: tuple):
    return Fraction(1) if ring[0] == "Q" else MPoly.one(ring[1])


def exact_div(p, q):
    """Return ``r`` with ``q * r == p``.

    Rationals always divide. For polynomials the quotient must have integer
    coefficients, otherwise :class:`NotDivisible` is raised.
    """
    if not q:
        raise DivisionByZero("division by zero")
    if not isinstance(p, MPoly) and not isinstance(q, MPoly):
        return Fraction(p) / Fraction(q)
    if not isinstance(p, MPoly):
        p = q._coerce(p)
    if not isinstance(q, MPoly):
        q = p._coerce(q)
    if p.nvars != q.nvars:
        raise ArityMismatch(f"arity {p.nvars} vs {q.nvars}")
    n = p.nvars
    if not p.terms:
        return MPoly.zero(n)
    if len(q.terms) == 1:
        (eq, cq), = q.terms.items()
        out = {}
        for e, c in p.terms.items():
            d = tuple([x - y for x, y in zip(e, eq)])
            if min(d) < 0 or c % cq:
                raise NotDivisible(f"{q} does not divide {p}")
            out[d] = c // cq
        return MPoly._raw(n, out)

    lt_e, lt_c = q.leading_term()
    qterms = list(q.terms.items())
    rem = dict(p.terms)
    heap = [(-s, tuple(-x for x in rev), e) for e in rem for s, rev in [_grlex_key(e)]]
    heapq.heapify(heap)
    quot: dict = {}
    while rem:
        while True:
            _, _, e = heapq.heappop(heap)
            if e in rem:
                break
        c = rem[e]
        d = tuple([x - y for x, y in zip(e, lt_e)])
        if min(d) < 0 or c % lt_c:
            raise NotDivisible(f"{q} does not divide {p}")
        k = c // lt_c
        quot[d] = k
        for eq, cq in qterms:
            t = tuple([x + y for x, y in zip(eq, d)])
            v = rem.get(t, 0) - k * cq
            if v:
                if t not in rem:
                    s, rev = _grlex_key(t)
                    heapq.heappush(heap, (-s, tuple(-x for x in rev), t))
                rem[t] = v
            else:
                rem.pop(t, None)
    return MPoly._raw(n, quot)


def divides(q, p) -> bool:
    try:
        exact_div(p, q)
    except NotDivisible:
        return False
    return True


def eval_poly(p: MPoly, point: Sequence) -> Fraction:
    """Evaluate ``p`` exactly at a rational point."""
    if len(point) != p.nvars:
        raise ArityMismatch(f"point of length {len(point)} for arity {p.nvars}")
    pt = [Fraction(x) for x in point]
    total = Fraction(0)
    for e, c in p.terms.items():
        t = Fraction(c)
        for x, k in zip(pt, e):
            if k:
                t *= x ** k
        total += t
    return total


# ---------------------------------------------------------------------------
# Content probing
# ---------------------------------------------------------------------------

@dataclass
class ProbeReport:
    points: list[tuple[int, ...]]
    gcds: list[int]
    verdict: str
    unit_points: int = field(init=False)

    def __post_init__(self):
        self.unit_points = sum(1 for g in self.gcds if g == 1)

    def to_dict(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "gcds": self.gcds,
            "unit_points": self.unit_points,
            "verdict": self.verdict,
            "note": "probabilistic evidence, not a proof",
        }


def _eval_int(p: MPoly, pt: Sequence[int]) -> int:
    total = 0
    for e, c in p.terms.items():
        t = c
        for x, k in zip(pt, e):
            if k:
                t *= x ** k
        total += t
    return total


def content_probe(vs: Sequence[MPoly], trials: int = 5, seed: int = 0,
                  low: int = 2, high: int = 97, stop_after: int | None = None) -> ProbeReport:
    """Evaluate every polynomial at random integer points and take the gcd.

    A common polynomial factor with nonnegative coefficients evaluates to at
    least 2 at points whose coordinates are all >= 2, so a gcd of 1 at any
    point is evidence that the vector has unit content. Sampling stops early
    once ``stop_after`` points with gcd 1 have been seen.
    """
    vs = [v for v in vs]
    if not vs or all(not v for v in vs):
        raise AllZero("content probe needs a nonzero polynomial")
    n = vs[0].nvars
    rng = random.Random(seed)
    points, gcds = [], []
    units = 0
    for _ in range(trials):
        pt = tuple(rng.randint(low, high) for _ in range(n))
        g = 0
        for v in vs:
            g = math.gcd(g, _eval_int(v, pt))
            if g == 1:
                break
        points.append(pt)
        gcds.append(g)
        units += g == 1
        if stop_after is not None and units >= stop_after:
            break
    verdict = "content-is-unit" if units else "common factor >= 2"
    return ProbeReport(points, gcds, verdict)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class RingMatrix:
    """Dense matrix over one exact ring, backed by a numpy object array."""

    __slots__ = ("data", "ring")

    def __init__(self, data, ring: tuple | None = None):
        arr = np.empty((len(data), len(data[0]) if len(data) else 0), dtype=object) \
            if not isinstance(data, np.ndarray) else None
        if arr is not None:
            for i, row in enumerate(data):
                for j, x in enumerate(row):
                    arr[i, j] = x
        else:
            arr = data
        if arr.ndim != 2:
            raise DimensionMismatch("matrix data must be two-dimensional")
        if ring is None:
            ring = _infer_ring(arr)
        self.data = _normalize_entries(arr, ring)
        self.ring = ring

    @classmethod
    def _wrap(cls, arr: np.ndarray, ring: tuple) -> "RingMatrix":
        m = cls.__new__(cls)
        m.data = arr
        m.ring = ring
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: tuple) -> "RingMatrix":
        arr = np.empty((rows, cols), dtype=object)
        arr.fill(ring_zero(ring))
        return cls._wrap(arr, ring)

    @classmethod
    def identity(cls, n: int, ring: tuple, scale=None) -> "RingMatrix":
        m = cls.zeros(n, n, ring)
        d = ring_one(ring) if scale is None else _to_ring(scale, ring)
        for i in range(n):
            m.data[i, i] = d
        return m

    @classmethod
    def block(cls, blocks: Sequence[Sequence["RingMatrix"]]) -> "RingMatrix":
        ring = blocks[0][0].ring
        for row in blocks:
            for b in row:
                if b.ring != ring:
                    raise RingMismatch(f"{b.ring} vs {ring}")
        return cls._wrap(np.block([[b.data for b in row] for row in blocks]), ring)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, idx):
        return self.data[idx]

    def copy(self) -> "RingMatrix":
        return RingMatrix._wrap(self.data.copy(), self.ring)

    @property
    def T(self) -> "RingMatrix":
        return RingMatrix._wrap(self.data.T.copy(), self.ring)

    def tolist(self) -> list[list]:
        return self.data.tolist()

    def _check(self, other: "RingMatrix"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix._wrap(self.data + other.data, self.ring)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix._wrap(self.data - other.data, self.ring)

    def __neg__(self) -> "RingMatrix":
        return RingMatrix._wrap(-self.data, self.ring)

    def scale(self, c) -> "RingMatrix":
        c = _to_ring(c, self.ring)
        return RingMatrix._wrap(self.data * c, self.ring)

    def add_diagonal(self, c) -> "RingMatrix":
        """Return ``self + c*I``."""
        out = self.data.copy()
        c = _to_ring(c, self.ring)
        for i in range(min(self.shape)):
            out[i, i] = out[i, i] + c
        return RingMatrix._wrap(out, self.ring)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and \
            bool(np.all(self.data == other.data))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(bool(x) for x in self.data.flat)

    def nonzero_entries(self) -> list[tuple[int, int, object]]:
        return [(i, j, x) for (i, j), x in np.ndenumerate(self.data) if x]

    def first_difference(self, other: "RingMatrix"):
        """First ``(row, col, mine, theirs)`` where entries differ, else None."""
        self._check(other)
        diff = np.argwhere(self.data != other.data)
        if not len(diff):
            return None
        i, j = (int(x) for x in diff[0])
        return i, j, self.data[i, j], other.data[i, j]

    def map(self, fn) -> "RingMatrix":
        out = np.empty(self.shape, dtype=object)
        for idx, x in np.ndenumerate(self.data):
            out[idx] = fn(x)
        return RingMatrix(out)

    def to_text(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.data]

    def __repr__(self) -> str:
        return f"RingMatrix({self.rows}x{self.cols}, ring={self.ring})"


def _to_ring(x, ring):
    if ring[0] == "Q":
        if isinstance(x, MPoly):
            raise RingMismatch("polynomial scalar in rational matrix")
        return Fraction(x)
    if isinstance(x, MPoly):
        if x.nvars != ring[1]:
            raise ArityMismatch(f"arity {x.nvars} vs {ring[1]}")
        return x
    return MPoly.const(x, ring[1])


def _infer_ring(arr: np.ndarray) -> tuple:
    ring = None
    for x in arr.flat:
        r = ring_of(x)
        if r[0] == "Z[x]":
            if ring is not None and ring[0] == "Z[x]" and ring != r:
                raise ArityMismatch(f"mixed arities {ring[1]} and {r[1]}")
            ring = r
        elif ring is None:
            ring = r
    return ring or ("Q",)


def _normalize_entries(arr: np.ndarray, ring: tuple) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _to_ring(x, ring)
    return out


def mat_mul(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    """Exact matrix product; zero entries of ``A`` are skipped."""
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring} vs {B.ring}")
    if A.cols != B.rows:
        raise DimensionMismatch(f"{A.shape} @ {B.shape}")
    out = np.empty((A.rows, B.cols), dtype=object)
    zero = ring_zero(A.ring)
    for i in range(A.rows):
        row = None
        for k in range(A.cols):
            a = A.data[i, k]
            if not a:
                continue
            term = B.data[k] * a
            row = term if row is None else row + term
        if row is None:
            out[i].fill(zero)
        else:
            out[i] = row
    return RingMatrix._wrap(out, A.ring)


def mat_vec(A: RingMatrix, v: Sequence) -> list:
    if len(v) != A.cols:
        raise DimensionMismatch(f"{A.shape} @ vector of length {len(v)}")
    col = RingMatrix._wrap(np.array([[_to_ring(x, A.ring)] for x in v], dtype=object), A.ring)
    return [x for x in mat_mul(A, col).data[:, 0]]


def permutation_matrix(perm: Sequence[int], ring: tuple) -> RingMatrix:
    """Matrix ``P`` with ``P[perm[j], j] = 1``."""
    n = len(perm)
    m = RingMatrix.zeros(n, n, ring)
    one = ring_one(ring)
    for j, i in enumerate(perm):
        m.data[i, j] = one
    return m


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

# Rational matrices at least this large are reduced with FLINT when available.
FLINT_THRESHOLD = 32


def kernel_vector(M: RingMatrix, backend: str = "auto") -> list:
    """Spanning vector of a one-dimensional kernel, in canonical form.

    The result has ring entries (no denominators), integer content 1 and a
    first nonzero entry with positive leading coefficient.

    ``backend`` applies to rational matrices only: ``"python"`` runs the
    pure-Python elimination, ``"flint"`` the FLINT row reduction and
    ``"auto"`` picks FLINT for matrices of size >= ``FLINT_THRESHOLD``.
    """
    if M.rows != M.cols:
        raise DimensionMismatch(f"kernel_vector needs a square matrix, got {M.shape}")
    if M.ring[0] == "Q":
        if backend == "flint" or (backend == "auto" and M.rows >= FLINT_THRESHOLD and _have_flint()):
            v = _flint_kernel(M)
        else:
            v = _rational_kernel(M)
    else:
        v = _bareiss_kernel(M)
    return normalize_vector(v)


def _have_flint() -> bool:
    try:
        import flint  # noqa: F401
    except ImportError:
        return False
    return True


def _flint_kernel(M: RingMatrix) -> list[Fraction]:
    import flint

    n = M.rows
    A = flint.fmpq_mat(n, n, [flint.fmpq(Fraction(x).numerator, Fraction(x).denominator)
                              for x in M.data.flat])
    R, rank = A.rref()
    if rank != n - 1:
        raise KernelDimensionNotOne(f"kernel dimension {n - rank} (rank {rank} of {n})")
    pivots = [next(c for c in range(n) if R[r, c] != 0) for r in range(rank)]
    free, = set(range(n)) - set(pivots)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for row, c in enumerate(pivots):
        q = R[row, free]
        v[c] = -Fraction(int(q.p), int(q.q))
    return v


def _rational_kernel(M: RingMatrix) -> list[Fraction]:
    n = M.rows
    rows = []
    for i in range(n):
        rows.append({j: Fraction(x) for j, x in enumerate(M.data[i]) if x})
    pivot_of_row: list[tuple[int, dict]] = []
    free = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if c in rows[i]), None)
        if piv is None:
            free.append(c)
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        prow = {j: x * inv for j, x in prow.items()}
        rows[r] = prow
        for i in range(n):
            if i == r:
                continue
            row = rows[i]
            f = row.get(c)
            if f is None:
                continue
            for j, x in prow.items():
                v = row.get(j, 0) - f * x
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
        pivot_of_row.append((c, prow))
        r += 1
    if len(free) != 1:
        raise KernelDimensionNotOne(f"kernel dimension {len(free)} (rank {n - len(free)} of {n})")
    f = free[0]
    v = [Fraction(0)] * n
    v[f] = Fraction(1)
    for c, prow in pivot_of_row:
        v[c] = -prow.get(f, 0)
    return v


def _bareiss_kernel(M: RingMatrix) -> list:
    n = M.rows
    ring = M.ring
    A = [list(M.data[i]) for i in range(n)]
    one = ring_one(ring)
    prev = one
    pivots: list[int] = []
    free: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if A[i][c]), None)
        if piv is None:
            free.append(c)
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        prow = A[r]
        for i in range(r + 1, n):
            row = A[i]
            f = row[c]
            for j in range(c + 1, n):
                num = p * row[j]
                if f and prow[j]:
                    num = num - f * prow[j]
                row[j] = exact_div(num, prev) if prev != one else num
            row[c] = ring_zero(ring)
        prev = p
        pivots.append(c)
        r += 1
    if len(free) != 1:
        raise KernelDimensionNotOne(f"kernel dimension {len(free)} (rank {len(pivots)} of {n})")
    f = free[0]
    x = [ring_zero(ring)] * n
    x[f] = prev
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        acc = A[k][f] * prev
        for j in pivots[k + 1:]:
            if A[k][j]:
                acc = acc + A[k][j] * x[j]
        x[c] = -exact_div(acc, A[k][c])
    return x


def normalize_vector(v: Sequence) -> list:
    """Clear denominators, strip integer content, fix the sign."""
    v = list(v)
    if all(not x for x in v):
        raise AllZero("cannot normalize the zero vector")
    if isinstance(v[0], MPoly) or any(isinstance(x, MPoly) for x in v):
        g = reduce(math.gcd, (x.content() for x in v), 0)
        first = next(x for x in v if x)
        if first.leading_term()[1] < 0:
            g = -g
        return [exact_div(x, g) for x in v]
    fr = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
    ints = [x.numerator * (den // x.denominator) for x in fr]
    g = reduce(math.gcd, ints, 0)
    first = next(x for x in ints if x)
    if first < 0:
        g = -g
    return [Fraction(x // g) for x in ints]


def determinant(M: RingMatrix):
    """Fraction-free (Bareiss) determinant; used by test oracles."""
    n = M.rows
    if n != M.cols:
        raise DimensionMismatch(f"determinant needs a square matrix, got {M.shape}")
    if n == 0:
        return ring_one(M.ring)
    A = [list(M.data[i]) for i in range(n)]
    sign = 1
    prev = ring_one(M.ring)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return ring_zero(M.ring)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = exact_div(A[k][k] * A[i][j] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def vector_is_zero(v: Iterable) -> bool:
    return all(not x for x in v)
