"""Claim-by-claim verification runs and the aggregate report.

Each ``check_*`` function returns a :class:`VerificationReport`. Status is
``verified`` only for an exact zero-residual pass (or, for the simulation
claim, for the statistical contract).
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import limits, spectral, steady
from .model import (
    RateProfile,
    build_generator,
    build_generator_recursive,
    second_order_blocks,
    symmetry_conjugation_check,
    transpose_symmetry_diagnostic,
)

VERIFIED = "verified"
FAILED = "failed"
NOT_AS_PRINTED = "not-reproduced-as-printed"
STATUSES = (VERIFIED, FAILED, NOT_AS_PRINTED)

# claim id -> what is checked
CLAIMS = {
    "charpoly": "eigenvalues are -sum_i b_i (alpha_i + beta_i) over all binary words b",
    "hadamard-involution": "the bit-reversed sign matrix is symmetric and squares to 2^L I",
    "hadamard-triangular": "conjugating the generator by the sign matrix gives a lower-triangular matrix",
    "spectral-gap": "the spectral gap is min_i (alpha_i + beta_i)",
    "first-order-recursion": "2x2 block recursion of the generator in terms of size L-1",
    "second-order-recursion": "4x4 block recursion of the generator in terms of size L-2",
    "transpose-symmetry": "invariance under transposition together with alpha <-> beta",
    "spin-flip-symmetries": "odd-site and even-site spin-flip symmetries with rate exchange",
    "prefix-marginals": "marginals of the first k sites do not depend on the sites to the right",
    "density-formula": "closed-form density of 1s at each site",
    "normalization-conjecture": "product formula for the normalization factor",
    "ferro-generator-recursion": "ferromagnetic block recursion of the generator",
    "ferro-transfer-ansatz": "ferromagnetic transfer matrices intertwine consecutive generators",
    "ferro-normalization": "ferromagnetic normalization factor 2^C(L-1,2) (a+b)(1+a+b)^(L-1)",
    "antiferro-generator-recursion": "antiferromagnetic block recursion of the generator",
    "antiferro-transfer-ansatz": "antiferromagnetic transfer matrices intertwine consecutive generators",
    "antiferro-normalization": "antiferromagnetic normalization factor equals the ferromagnetic one",
    "limit-densities": "uniform (ferro) and parity-alternating (antiferro) densities",
    "limit-duality": "reversal dualities and the ferro/antiferro correspondence",
    "simulation-oracle": "kinetic Monte Carlo densities agree with the closed form",
}

DEFAULT_BUDGETS = {
    "spectrum": 6,
    "involution": 8,
    "gap": 8,
    "recursions": 8,
    "symmetry": 6,
    "density": 8,
    "prefix": 6,
    "conjecture": 3,
    "limits": 6,
    "simulate": 6,
}


@dataclass
class VerificationReport:
    claim: str
    status: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "statement": CLAIMS.get(self.claim, ""),
            "status": self.status,
            "details": self.details,
            "timing": {"seconds": round(self.seconds, 3)},
        }


REPORT_SCHEMA = {
    "type": "object",
    "required": ["claim", "statement", "status", "details", "timing"],
    "properties": {
        "claim": {"type": "string", "enum": sorted(CLAIMS)},
        "statement": {"type": "string"},
        "status": {"type": "string", "enum": list(STATUSES)},
        "details": {"type": "object"},
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {"seconds": {"type": "number", "minimum": 0}},
        },
    },
}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["seed", "budgets", "claims", "summary"],
    "properties": {
        "seed": {"type": "integer"},
        "budgets": {"type": "object"},
        "claims": {"type": "array", "items": REPORT_SCHEMA},
        "summary": {"type": "object", "additionalProperties": {"type": "string", "enum": list(STATUSES)}},
    },
}


def _timed(claim: str, fn) -> VerificationReport:
    t0 = time.perf_counter()
    status, details = fn()
    return VerificationReport(claim, status, details, time.perf_counter() - t0)


def _status(ok: bool) -> str:
    return VERIFIED if ok else FAILED


# ---------------------------------------------------------------------------
# Random profiles
# ---------------------------------------------------------------------------

def random_integer_profile(L: int, rng: random.Random, lo: int = 1, hi: int = 10) -> RateProfile:
    return RateProfile(tuple(rng.randint(lo, hi) for _ in range(L)),
                       tuple(rng.randint(lo, hi) for _ in range(L)))


def random_rational_profile(L: int, rng: random.Random, max_num: int = 9, max_den: int = 5) -> RateProfile:
    def r():
        return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
    return RateProfile(tuple(r() for _ in range(L)), tuple(r() for _ in range(L)))


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

def check_spectrum(max_L: int = 6, trials: int = 20, seed: int = 0) -> list[VerificationReport]:
    """Triangularization and eigenvalue formula over random integer profiles."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    flags = {"triangular": True, "diagonal_match": True, "offdiag_structure": True}
    multiset_ok = True
    failures = []
    tested = 0
    for L in range(1, max_L + 1):
        profiles = [random_integer_profile(L, rng) for _ in range(trials)]
        if L <= 3:
            profiles.append(RateProfile.symbolic_profile(L))
        for p in profiles:
            gen = build_generator(p)
            rep = spectral.conjugate_and_check(gen)
            for key in flags:
                flags[key] &= rep.details[key]
            same = spectral.diagonal_multiset(gen) == spectral.eigenvalues(p)
            multiset_ok &= same
            if not (rep.passed and same) and len(failures) < 5:
                failures.append({"L": L, "profile": p.to_document(), **rep.details})
            tested += 1
    elapsed = time.perf_counter() - t0
    common = {"max_L": max_L, "profiles_tested": tested}
    tri = VerificationReport("hadamard-triangular", _status(all(flags.values())),
                             {**flags, **common, "failures": failures}, elapsed)
    char = VerificationReport("charpoly", _status(multiset_ok and flags["diagonal_match"]),
                              {"diagonal_multiset_equals_eigenvalues": multiset_ok, **common}, elapsed)
    return [tri, char]


def check_involution(max_L: int = 8) -> VerificationReport:
    def run():
        results = {L: spectral.involution_check(L).passed for L in range(1, max_L + 1)}
        return _status(all(results.values())), {"max_L": max_L, "per_L": results}
    return _timed("hadamard-involution", run)


def check_gap(max_L: int = 8, trials: int = 100, seed: int = 0) -> VerificationReport:
    def run():
        rng = random.Random(seed)
        bad = []
        for t in range(trials):
            L = 1 + t % max_L
            p = random_rational_profile(L, rng)
            gap = spectral.spectral_gap(p)
            smallest = spectral.smallest_nonzero_magnitude(spectral.eigenvalues(p))
            if gap != smallest:
                bad.append({"profile": p.to_document(), "gap": str(gap), "smallest": str(smallest)})
        return _status(not bad), {"max_L": max_L, "profiles_tested": trials, "failures": bad[:5]}
    return _timed("spectral-gap", run)


# ---------------------------------------------------------------------------
# Recursions and symmetries
# ---------------------------------------------------------------------------

def check_recursions(max_L: int = 8, trials: int = 10, seed: int = 0) -> list[VerificationReport]:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    first, second = [], []
    for L in range(1, max_L + 1):
        profiles = [random_rational_profile(L, rng) for _ in range(trials)]
        profiles.append(RateProfile.symbolic_profile(L))
        for p in profiles:
            direct = build_generator(p).matrix
            if build_generator_recursive(p).matrix != direct:
                first.append({"L": L, "profile": p.to_document()})
            if L >= 2 and second_order_blocks(p).matrix != direct:
                second.append({"L": L, "profile": p.to_document()})
    elapsed = time.perf_counter() - t0
    common = {"max_L": max_L, "profiles_per_L": trials + 1}
    return [
        VerificationReport("first-order-recursion", _status(not first), {**common, "failures": first[:5]}, elapsed),
        VerificationReport("second-order-recursion", _status(not second), {**common, "failures": second[:5]}, elapsed),
    ]


def check_symmetries(max_L: int = 6, trials: int = 5, seed: int = 0) -> list[VerificationReport]:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    bad = []
    readings = {"literal_transpose_equals_swapped": [], "reversed_transpose_equals_swapped": [],
                "spectra_equal": []}
    for L in range(1, max_L + 1):
        profiles = [random_rational_profile(L, rng) for _ in range(trials)]
        if L <= 4:
            profiles.append(RateProfile.symbolic_profile(L))
        for p in profiles:
            for variant in (1, 2):
                rep = symmetry_conjugation_check(p, variant)
                if not rep.passed:
                    bad.append(rep.to_dict())
            diag = transpose_symmetry_diagnostic(p).details
            for key in readings:
                readings[key].append(diag[key])
    elapsed = time.perf_counter() - t0
    summary = {key: all(v) for key, v in readings.items()}
    transpose_status = VERIFIED if summary["literal_transpose_equals_swapped"] else NOT_AS_PRINTED
    return [
        VerificationReport("spin-flip-symmetries", _status(not bad), {"max_L": max_L, "failures": bad[:5]}, elapsed),
        VerificationReport("transpose-symmetry", transpose_status, {
            "max_L": max_L,
            "readings_holding_for_all_profiles": summary,
            "note": "spectral equality holds; the literal entrywise identity fails already at L=1",
        }, elapsed),
    ]


# ---------------------------------------------------------------------------
# Steady state
# ---------------------------------------------------------------------------

def check_density(max_L: int = 8, trials: int = 20, seed: int = 0, recurrence_k: int = 6) -> VerificationReport:
    def run():
        rng = random.Random(seed)
        bad = []
        for L in range(1, max_L + 1):
            for _ in range(trials):
                p = random_rational_profile(L, rng)
                v = steady.stationary(p)
                for k in range(1, L + 1):
                    if steady.marginal_density(v, k) != steady.exact_density(k, p):
                        bad.append({"L": L, "site": k, "profile": p.to_document()})
        sym = RateProfile.symbolic_profile(recurrence_k)
        rec = {k: steady.recurrence_check(k, sym) for k in range(1, recurrence_k + 1)}
        ok = not bad and all(rec.values())
        return _status(ok), {"max_L": max_L, "profiles_per_L": trials, "failures": bad[:5],
                             "symbolic_recurrence": rec}
    return _timed("density-formula", run)


def check_prefix(max_k: int = 4, max_L: int = 6, seed: int = 0) -> VerificationReport:
    def run():
        rng = random.Random(seed)
        bad = []
        cases = 0
        p = random_rational_profile(max_L, rng)
        for k in range(1, max_k + 1):
            for L_big in range(k, max_L + 1):
                rep = steady.prefix_marginal_consistency(k, k, L_big, p)
                cases += 1
                if not rep.passed:
                    bad.append(rep.details)
        return _status(not bad), {"max_k": max_k, "max_L": max_L, "cases": cases, "failures": bad}
    return _timed("prefix-marginals", run)


def check_conjecture(max_L: int = 3, stretch: bool = False, seed: int = 0) -> VerificationReport:
    def run():
        per_L = {}
        ok = True
        for L in range(1, max_L + 1):
            rep = steady.conjecture_check(L, stretch=stretch, seed=seed)
            per_L[L] = {k: v for k, v in rep.to_dict().items() if k != "S"}
            ok &= rep.verdict == "supported"
        return _status(ok), {"max_L": max_L, "per_L": per_L}
    return _timed("normalization-conjecture", run)


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------

def check_limit_kind(kind, max_L: int = 6, recursion_L: int = 8) -> list[VerificationReport]:
    kind = limits.LimitKind.parse(kind)
    name = kind.value
    t0 = time.perf_counter()
    rec_bad = []
    for L in range(1, recursion_L + 1):
        M = limits.build_limit_recursive(kind, L).matrix
        direct = limits.limit_generator(kind, L)
        if M != direct:
            i, j, got, want = M.first_difference(direct)
            rec_bad.append({"L": L, "row": i, "col": j, "printed": str(got), "direct": str(want)})
    rec = VerificationReport(f"{name}-generator-recursion", VERIFIED if not rec_bad else NOT_AS_PRINTED,
                             {"max_L": recursion_L, "mismatches": rec_bad[:5]}, time.perf_counter() - t0)
    if rec_bad:
        rec.details["corrected_recursion_matches"] = all(
            limits.build_limit_recursive(kind, L, as_printed=False).matrix == limits.limit_generator(kind, L)
            for L in range(1, recursion_L + 1))

    t0 = time.perf_counter()
    ansatz = {}
    residuals = {}
    for L in range(2, max_L + 1):
        rep = limits.verify_ansatz(kind, L)
        ansatz[L] = {k: rep.details[k] for k in ("intertwining", "nontrivial", "zero_blocks_as_printed")}
        if "residual" in rep.details:
            residuals[L] = rep.details["residual"]
    ok = all(v["intertwining"] and v["nontrivial"] for v in ansatz.values())
    ans = VerificationReport(f"{name}-transfer-ansatz", VERIFIED if ok else NOT_AS_PRINTED,
                             {"max_L": max_L, "per_L": ansatz, "residuals": residuals},
                             time.perf_counter() - t0)

    t0 = time.perf_counter()
    z = {}
    for L in range(1, max_L + 1):
        zt, zc = limits.z_from_transfer(kind, L), limits.z_closed(kind, L)
        other = limits.z_closed(limits.LimitKind.ANTIFERRO if kind is limits.LimitKind.FERRO
                                else limits.LimitKind.FERRO, L)
        z[L] = {"from_transfer": str(zt), "closed_form_matches": zt == zc, "kinds_agree": zc == other}
    ok = all(v["closed_form_matches"] and v["kinds_agree"] for v in z.values())
    norm = VerificationReport(f"{name}-normalization", _status(ok), {
        "max_L": max_L, "per_L": z,
        "seed_vector": [str(x) for x in limits.seed_vector()],
        "printed_seed_in_kernel": limits.printed_seed_in_kernel(),
    }, time.perf_counter() - t0)
    return [rec, ans, norm]


def check_limit_densities(max_k: int = 8) -> VerificationReport:
    def run():
        bad = []
        for kind in limits.LimitKind:
            p = limits.limit_profile(kind, max_k)
            for k in range(1, max_k + 1):
                if not steady.fractions_equal(limits.limit_density(kind, k), steady.exact_density(k, p)):
                    bad.append({"kind": kind.value, "site": k})
        return _status(not bad), {"max_k": max_k, "failures": bad}
    return _timed("limit-densities", run)


def check_limit_duality(max_L: int = 6) -> VerificationReport:
    def run():
        per = {}
        for kind in limits.LimitKind:
            for L in range(1, max_L + 1):
                per[f"{kind.value}:{L}"] = limits.duality_check(kind, L).details
        ok = all(d["generator_reversal"] and d["transfer_reversal"] and d["ferro_antiferro_correspondence"]
                 for d in per.values())
        return _status(ok), {"max_L": max_L, "per_case": per}
    return _timed("limit-duality", run)


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def check_simulation(max_L: int = 6, profiles: int = 10, replicas: int = 8, t_total: float = 4000.0,
                     seed: int = 0, jobs: int = 1) -> VerificationReport:
    from .simulate import SimConfig, compare_exact, estimate_densities

    def run():
        rng = random.Random(seed)
        runs = []
        ok = True
        for j in range(profiles):
            L = 1 + j % max_L
            p = random_rational_profile(L, rng, max_num=6, max_den=3)
            est = estimate_densities(SimConfig(p, t_total, 10.0, seed + j, replicas), jobs=jobs)
            rep = compare_exact(est, p)
            ok &= rep["verdict"] == "pass"
            runs.append({"L": L, "verdict": rep["verdict"],
                         "max_abs_z": max(abs(s["z"]) for s in rep["per_site"]),
                         "max_stderr": max(s["stderr"] for s in rep["per_site"])})
        control = _negative_control(seed, replicas, t_total, jobs)
        ok &= control["verdict"] == "fail"
        return _status(ok), {"runs": runs, "negative_control": control, "replicas": replicas,
                             "t_total": t_total}
    return _timed("simulation-oracle", run)


def _negative_control(seed: int, replicas: int, t_total: float, jobs: int) -> dict:
    from .simulate import SimConfig, compare_exact, estimate_densities

    p = RateProfile((Fraction(1), Fraction(2), Fraction(1)), (Fraction(3), Fraction(1), Fraction(1, 2)))
    corrupted = p.swapped()
    est = estimate_densities(SimConfig(corrupted, t_total, 10.0, seed, replicas), jobs=jobs)
    rep = compare_exact(est, p)
    return {"verdict": rep["verdict"], "max_abs_z": max(abs(s["z"]) for s in rep["per_site"])}


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------

def _task(name: str, budgets: dict, seed: int) -> list[VerificationReport]:
    b = budgets
    if name == "spectrum":
        return check_spectrum(b["spectrum"], 20, seed)
    if name == "involution":
        return [check_involution(b["involution"])]
    if name == "gap":
        return [check_gap(b["gap"], 100, seed)]
    if name == "recursions":
        return check_recursions(b["recursions"], 10, seed)
    if name == "symmetry":
        return check_symmetries(b["symmetry"], 5, seed)
    if name == "density":
        return [check_density(b["density"], 20, seed)]
    if name == "prefix":
        return [check_prefix(min(4, b["prefix"]), b["prefix"], seed)]
    if name == "conjecture":
        return [check_conjecture(b["conjecture"], stretch=b["conjecture"] > steady.SYMBOLIC_CAP, seed=seed)]
    if name == "limits":
        out = []
        for kind in limits.LimitKind:
            out += check_limit_kind(kind, b["limits"], max(b["limits"], b["recursions"]))
        out.append(check_limit_densities(8))
        out.append(check_limit_duality(b["limits"]))
        return out
    if name == "simulate":
        return [check_simulation(b["simulate"], 10, 8, 4000.0, seed)]
    raise KeyError(name)


TASKS = tuple(DEFAULT_BUDGETS)


def report_all(budgets: dict | None = None, seed: int = 0, tasks=TASKS, jobs: int = 1) -> dict:
    """Run the selected checks and merge their reports in a fixed order."""
    tasks = list(tasks)
    if not tasks:
        raise ValueError("no checks selected")
    unknown = [t for t in tasks if t not in DEFAULT_BUDGETS]
    if unknown:
        raise ValueError(f"unknown checks: {unknown}")
    merged = dict(DEFAULT_BUDGETS)
    merged.update(budgets or {})
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_task, t, merged, seed) for t in tasks]
            results = [f.result() for f in futures]
    else:
        results = [_task(t, merged, seed) for t in tasks]
    reports = [r for group in results for r in group]
    return {
        "seed": seed,
        "budgets": {t: merged[t] for t in tasks},
        "claims": [r.to_dict() for r in reports],
        "summary": {r.claim: r.status for r in reports},
    }
