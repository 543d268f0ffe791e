"""Command-line entry point: ``python3 -m glauber <command> ...``.

Exit codes: 0 when every requested check is verified, 1 on a verification
failure (the report is still written), 2 on parse or validation errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import limits, spectral, steady, verify
from .algebra import AlgebraError
from .model import ModelError, RateProfile, load_profile

SEED_ENV = "GLAUBER_SEED"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _write(json.dumps(obj, indent=2, sort_keys=False) + "\n", out)


def _emit_csv(header: list[str], rows: list[list], out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(buf.getvalue(), out)


def _text(x) -> str:
    return steady._text(x)


def _profile(args) -> RateProfile:
    p = load_profile(args.profile)
    if getattr(args, "symbolic", False):
        p = RateProfile.symbolic_profile(p.L)
    return p


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    p = _profile(args)
    items = spectral.eigenvalues(p).items()
    if args.format == "csv":
        _emit_csv(["eigenvalue", "multiplicity"], [[_text(v), m] for v, m in items], args.out)
    else:
        _emit_json({"L": p.L, "eigenvalues": [{"eigenvalue": _text(v), "multiplicity": m}
                                              for v, m in items]}, args.out)
    return EXIT_OK


def cmd_gap(args) -> int:
    p = _profile(args)
    gap = spectral.spectral_gap(p)
    _emit_json({"L": p.L, "gap": _text(gap)}, args.out)
    return EXIT_OK


def cmd_stationary(args) -> int:
    p = _profile(args)
    if p.symbolic and p.L > steady.SYMBOLIC_CAP:
        raise UsageError(f"symbolic stationary vectors are capped at L={steady.SYMBOLIC_CAP}")
    v = steady.stationary(p, backend=args.backend)
    _emit_json(v.to_dict(), args.out)
    return EXIT_OK


def _density_text(d) -> str:
    if isinstance(d, tuple):
        return f"({d[0]})/({d[1]})"
    return _text(d)


def cmd_density(args) -> int:
    p = _profile(args)
    sites = [args.site] if args.site is not None else list(range(1, p.L + 1))
    rows = [[k, _density_text(steady.exact_density(k, p))] for k in sites]
    if args.format == "csv":
        _emit_csv(["site", "density"], rows, args.out)
    else:
        _emit_json({"L": p.L, "densities": [{"site": k, "density": d} for k, d in rows]}, args.out)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    try:
        rep = steady.conjecture_check(args.L, stretch=args.stretch, trials=args.trials, seed=args.seed)
    except steady.SymbolicCapExceeded as exc:
        raise UsageError(str(exc)) from exc
    doc = rep.to_dict()
    doc["status"] = verify.VERIFIED if rep.verdict == "supported" else verify.FAILED
    _emit_json(doc, args.out)
    return EXIT_OK if rep.verdict == "supported" else EXIT_FAIL


def cmd_limits(args) -> int:
    kind = limits.LimitKind.parse(args.kind)
    L = args.L
    checks = ["recursion", "ansatz", "z", "density", "duality"] if args.check == "all" else [args.check]
    results = {}
    ok = True
    for check in checks:
        if check == "recursion":
            direct = limits.limit_generator(kind, L)
            printed = limits.build_limit_recursive(kind, L).matrix == direct
            corrected = limits.build_limit_recursive(kind, L, as_printed=False).matrix == direct
            results[check] = {"as_printed": printed, "corrected": corrected,
                              "status": verify.VERIFIED if printed else verify.NOT_AS_PRINTED}
            ok &= printed
        elif check == "ansatz":
            if L < 2:
                raise UsageError("--check ansatz needs --L >= 2")
            d = limits.verify_ansatz(kind, L).details
            results[check] = d
            ok &= d["status"] == verify.VERIFIED
        elif check == "z":
            zt, zc = limits.z_from_transfer(kind, L), limits.z_closed(kind, L)
            results[check] = {"from_transfer": str(zt), "closed_form": str(zc), "equal": zt == zc,
                              "seed_vector": [str(x) for x in limits.seed_vector()]}
            ok &= zt == zc
        elif check == "density":
            p = limits.limit_profile(kind, L)
            per = []
            for k in range(1, L + 1):
                num, den = limits.limit_density(kind, k)
                match = steady.fractions_equal((num, den), steady.exact_density(k, p))
                per.append({"site": k, "density": f"({num})/({den})", "matches_closed_form": match})
                ok &= match
            results[check] = per
        elif check == "duality":
            rep = limits.duality_check(kind, L)
            results[check] = rep.details
            ok &= rep.passed
    printed_only = any(isinstance(r, dict) and r.get("status") == verify.NOT_AS_PRINTED
                       for r in results.values())
    status = verify.VERIFIED if ok else verify.NOT_AS_PRINTED if printed_only else verify.FAILED
    doc = {"kind": kind.value, "L": L, "checks": results, "status": status}
    if args.emit_matrices:
        doc["matrices"] = {"M": limits.limit_generator(kind, L).to_text(),
                           "T": limits.transfer(kind, L).to_text()}
    _emit_json(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    from .simulate import SimConfig, compare_exact, estimate_densities

    p = _profile(args)
    try:
        sim = SimConfig(p, args.t, args.burnin, args.seed, args.replicas)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    est = estimate_densities(sim, jobs=args.jobs)
    rep = compare_exact(est, p)
    rep.update({"L": p.L, "seed": args.seed, "replicas": args.replicas, "t": args.t,
                "burnin": args.burnin, "events": est.events})
    _emit_json(rep, args.out)
    return EXIT_OK if rep["verdict"] == "pass" else EXIT_FAIL


def _verify_reports(args) -> list:
    name, L, trials, seed = args.check, args.L, args.trials, args.seed
    default = verify.DEFAULT_BUDGETS[name]
    L = default if L is None else L
    if name == "spectrum":
        return verify.check_spectrum(L, trials or 20, seed)
    if name == "involution":
        return [verify.check_involution(L)]
    if name == "gap":
        return [verify.check_gap(L, trials or 100, seed)]
    if name == "recursions":
        return verify.check_recursions(L, trials or 10, seed)
    if name == "symmetry":
        return verify.check_symmetries(L, trials or 5, seed)
    if name == "density":
        return [verify.check_density(L, trials or 20, seed)]
    if name == "prefix":
        return [verify.check_prefix(min(4, L), L, seed)]
    if name == "conjecture":
        if L > steady.SYMBOLIC_STRETCH_CAP:
            raise UsageError(f"conjecture checks are capped at L={steady.SYMBOLIC_STRETCH_CAP}")
        return [verify.check_conjecture(L, stretch=L > steady.SYMBOLIC_CAP, seed=seed)]
    if name == "limits":
        out = []
        for kind in limits.LimitKind:
            out += verify.check_limit_kind(kind, L, L)
        return out + [verify.check_limit_densities(8), verify.check_limit_duality(L)]
    if name == "simulate":
        return [verify.check_simulation(L, trials or 10, 8, 4000.0, seed, args.jobs)]
    raise UsageError(f"unknown check {name!r}")


def cmd_verify(args) -> int:
    if args.L is not None and args.L < 1:
        raise UsageError("--L must be >= 1")
    reports = _verify_reports(args)
    doc = {"check": args.check, "seed": args.seed,
           "claims": [r.to_dict() for r in reports],
           "summary": {r.claim: r.status for r in reports}}
    # single-claim shorthand: lift the details to the top level
    if len(reports) >= 1:
        doc.update({k: v for k, v in reports[0].details.items() if k not in doc})
        doc["status"] = verify.VERIFIED if all(r.status == verify.VERIFIED for r in reports) else verify.FAILED
    _emit_json(doc, args.out)
    return EXIT_OK if doc["status"] == verify.VERIFIED else EXIT_FAIL


def _parse_budgets(items: list[str]) -> dict:
    budgets = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in verify.DEFAULT_BUDGETS:
            raise UsageError(f"bad --max-L entry {item!r}; expected CHECK=N with CHECK in "
                             f"{', '.join(verify.DEFAULT_BUDGETS)}")
        try:
            n = int(value)
        except ValueError:
            raise UsageError(f"bad --max-L value in {item!r}") from None
        if n < 1:
            raise UsageError(f"--max-L {key} must be >= 1")
        budgets[key] = n
    return budgets


def cmd_report(args) -> int:
    budgets = _parse_budgets(args.max_L)
    tasks = verify.TASKS if args.only is None else [t for t in args.only if t]
    if not tasks:
        raise UsageError("empty claim selection")
    try:
        doc = verify.report_all(budgets, args.seed, tasks, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit_json(doc, args.out)
    ok = all(s == verify.VERIFIED for s in doc["summary"].values())
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glauber", description="Exact and stochastic checks of the disordered spin-flip chain.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, profile=False, seed=False):
        p.add_argument("--out", help="write the report here instead of standard output")
        if profile:
            p.add_argument("--profile", required=True, help="rate profile JSON document")
        if seed:
            p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")
        return p

    p = common(sub.add_parser("spectrum", help="eigenvalues with multiplicities"), profile=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = common(sub.add_parser("gap", help="spectral gap"), profile=True)
    p.set_defaults(func=cmd_gap)

    p = common(sub.add_parser("stationary", help="stationary weight vector"), profile=True)
    p.add_argument("--symbolic", action="store_true", help="replace the rates by indeterminates")
    p.add_argument("--backend", choices=["auto", "python", "flint"], default="auto")
    p.set_defaults(func=cmd_stationary)

    p = common(sub.add_parser("density", help="closed-form site densities"), profile=True)
    p.add_argument("--site", type=int)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_density)

    p = common(sub.add_parser("conjecture", help="normalization-factor product formula"), seed=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--stretch", action="store_true", help=f"allow L={steady.SYMBOLIC_STRETCH_CAP}")
    p.add_argument("--trials", type=int, default=2000, help="content-probe budget")
    p.set_defaults(func=cmd_conjecture)

    p = common(sub.add_parser("limits", help="ferromagnetic and antiferromagnetic limits"))
    p.add_argument("--kind", choices=["ferro", "antiferro"], required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--check", choices=["recursion", "ansatz", "z", "density", "duality", "all"], default="all")
    p.add_argument("--emit-matrices", action="store_true")
    p.set_defaults(func=cmd_limits)

    p = common(sub.add_parser("simulate", help="kinetic Monte Carlo density estimate"), profile=True, seed=True)
    p.add_argument("--t", type=float, default=1e4, help="total simulated time per replica")
    p.add_argument("--burnin", type=float, default=10.0)
    p.add_argument("--replicas", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("verify", help="run one family of checks"), seed=True)
    p.add_argument("check", choices=list(verify.TASKS))
    p.add_argument("--L", type=int, help="largest size to test")
    p.add_argument("--trials", type=int, help="random profiles per size")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = common(sub.add_parser("report", help="run the whole claim matrix"), seed=True)
    p.add_argument("--max-L", dest="max_L", action="append", metavar="CHECK=N", help="per-check size budget")
    p.add_argument("--only", nargs="*", metavar="CHECK", help="restrict to these checks")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_report)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except (UsageError, ModelError, AlgebraError, spectral.SymbolicModeUnsupported,
            FileNotFoundError) as exc:
        print(f"glauber: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
