"""The ``shiftlab`` command line.

Exit codes: 0 ok, 2 input error, 3 hypothesis not met, 4 theorem violation.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import codes, entropy, formats, irreducibility, relations
from .errors import ShiftlabError, TheoremViolation
from .lattice import FiniteShape, FolnerBoxSequence
from .reports import RunReport
from .shifts import PointedConfiguration


def _inputs(*paths) -> dict:
    return {str(p): formats.digest(p) for p in paths if p is not None}


def cmd_entropy(args) -> RunReport:
    X = formats.load_shift(args.shift)
    rep = RunReport("entropy", inputs=_inputs(args.shift))
    method = args.method
    if method == "perron":
        r = entropy.entropy_exact(X)
        rep.results = r.to_json()
    elif method == "count":
        n = args.n or (12 if X.dim == 2 else 24)
        r = entropy.entropy_pattern_limit(X, FolnerBoxSequence.upto(n, dim=X.dim))
        rep.results = r.to_json()
    elif method == "strip":
        r = entropy.strip_bounds(X, range(1, (args.n or 12) + 1))
        rep.results = r.to_json()
    else:
        omega = formats.parse_shape(args.omega, dim=1) if args.omega else FiniteShape([0])
        q = entropy.entropy_quantities(X, omega, FolnerBoxSequence.upto(args.n or 16))
        rep.results = q
        r = None
    if args.csv:
        if r is not None:
            rep.results["csv"] = "n,count,rate\n" + "".join(f"{n},{c},{v:.12g}\n" for n, c, v in r.trace)
        else:
            rep.results["csv"] = "n,sep,spa,cov,rate\n" + "".join(
                f"{t['n']},{t['sep']},{t['spa']},{t['cov']},{t['hsep']:.12g}\n" for t in q["table"])
    return rep


def cmd_check_si(args) -> RunReport:
    X = formats.load_shift(args.shift)
    rep = RunReport("check-si", inputs=_inputs(args.shift))
    cert = irreducibility.strong_irreducibility(X, bound=args.bound)
    rep.verdicts["strongly_irreducible"] = cert.strongly_irreducible
    rep.results["certificate"] = cert.to_json()
    if cert.witness is not None:
        rep.witnesses["pair"] = [p.to_json() for p in cert.witness]
    if args.delta:
        delta = formats.parse_shape(args.delta, dim=1)
        ok, ce = irreducibility.delta_irreducible(X, delta)
        rep.verdicts["delta_irreducible"] = ok
        rep.results["delta"] = delta.to_json()
        if ce is not None:
            rep.witnesses["delta_counterexample"] = [p.to_json() for p in ce]
    if args.wsp:
        if args.spec_set:
            lam = formats.parse_shape(args.spec_set, dim=1)
        elif cert.strongly_irreducible:
            lam = irreducibility.specification_subset(FiniteShape([0]), cert.delta)
        else:
            lam = FiniteShape.interval(-1, 1)
        w = irreducibility.wsp_check(X, lam, exhaustive=True, max_pieces=3, window=args.window)
        rep.verdicts["wsp"] = w.passed
        rep.results["wsp"] = w.to_json()
        if w.exhaustive and w.exhaustive.get("witness"):
            rep.witnesses["wsp_violation"] = w.exhaustive["witness"]
    return rep


def cmd_goe(args) -> RunReport:
    f = formats.load_code(args.code)
    rep = RunReport("goe", inputs=_inputs(args.code))
    checks = ["surjective", "injective", "preinjective", "myhill"] if args.check == "all" else [args.check]
    for check in checks:
        if check == "surjective":
            ok, w = f.is_surjective()
            rep.verdicts["surjective"] = ok
            if w is not None:
                rep.witnesses["missing_word"] = f.codomain.alphabet.join(w)
        elif check == "injective":
            ok, pair = f.is_injective()
            rep.verdicts["injective"] = ok
            if pair is not None:
                rep.witnesses["injectivity_pair"] = [c.to_json() for c in pair]
        elif check == "preinjective":
            ok, pair = f.is_preinjective()
            rep.verdicts["preinjective"] = ok
            if pair is not None:
                rep.witnesses["homoclinic_pair"] = [c.to_json() for c in pair]
        elif check == "myhill":
            out = codes.myhill_check(f)
            rep.verdicts["myhill"] = out["verdict"]
            rep.results["myhill"] = out
        elif check == "drop":
            out = codes.preinjectivity_failure_on_drop(f)
            rep.verdicts["preinjective"] = False
            rep.results["drop"] = out
    return rep


def cmd_chain_suite(args) -> RunReport:
    rep = RunReport("chain-suite")
    if args.system:
        sysm, rels = formats.load_system(args.system)
        rep.inputs = _inputs(args.system)
        F = [sysm.word(w) for w in args.F.split(",")] if args.F else [sysm.identity]
        U, V = rels[args.U], rels[args.V]
        r = relations.check_chain(sysm, F, U, V)
        rep.results["chain"] = r.to_json()
        rep.verdicts["chain_ok"] = r.ok
        if not r.ok:
            raise TheoremViolation("chain inequality violated")
        return rep
    sweep = relations.chain_sweep(instances=args.instances, seed=args.seed)
    eq = relations.equivalence_sweep(instances=args.equivalence, seed=args.seed + 4)
    rep.results = {"seed": args.seed, "instances": args.instances, "violations": sweep["violations"],
                   "equivalence_instances": args.equivalence, "equivalence_mismatches": len(eq["mismatches"])}
    total = sum(sweep["violations"].values()) + len(eq["mismatches"])
    rep.verdicts["violations"] = total
    if total:
        rep.witnesses = {"chain": sweep["details"], "equivalence": eq["mismatches"]}
        raise _Violation(rep, "relation inequalities violated")
    return rep


def one_block_report() -> dict:
    f = formats.load_code("catalog:ten_to_eleven.code")
    X = f.domain
    inj, _ = f.is_injective()
    pre, _ = f.is_preinjective()
    surj, missing = f.is_surjective()
    cert = irreducibility.strong_irreducibility(X)
    single = PointedConfiguration.periodic("0").with_patch({0: "1"})
    return {
        "injective": inj,
        "preinjective": pre,
        "surjective": surj,
        "strongly_irreducible": cert.strongly_irreducible,
        "missing_word": X.alphabet.join(missing) if missing else None,
        "single_one_in_domain": X.contains(single),
        "single_one_in_image": f.image_presentation().contains(single),
        "si_witness": [p.to_json() for p in cert.witness] if cert.witness else None,
    }


def cmd_counterexamples(args) -> RunReport:
    rep = RunReport("counterexamples")
    if args.which in ("one-block", "all"):
        rep.results["one-block"] = one_block_report()
        rep.inputs.update(_inputs("catalog:ten_to_eleven.code", "catalog:one_block_of_ones.sofic"))
    if args.which in ("two-point", "all"):
        rep.results["two-point"] = relations.two_point_counterexample()
    return rep


def cmd_myhill_sweep(args) -> RunReport:
    rep = RunReport("myhill-sweep")
    out = codes.myhill_sweep(range(256))
    table = out.pop("table")
    rep.results = out
    rep.verdicts["myhill_violations"] = len(out["preinjective_not_surjective"])
    if args.table:
        rep.results["table"] = table
    if out["preinjective_not_surjective"]:
        raise _Violation(rep, "pre-injective but not surjective elementary rule")
    return rep


class _Violation(TheoremViolation):
    def __init__(self, report: RunReport, message: str):
        super().__init__(message)
        self.report = report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shiftlab", description="Shift spaces, entropy and cellular automata.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte stability)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", parents=[common], help="entropy of a shift")
    e.add_argument("--shift", required=True)
    e.add_argument("--method", choices=["perron", "count", "quantities", "strip"], default="perron")
    e.add_argument("--n", type=int)
    e.add_argument("--omega")
    e.add_argument("--csv", action="store_true", help="include the trace as CSV")
    e.set_defaults(func=cmd_entropy)

    s = sub.add_parser("check-si", parents=[common], help="strong irreducibility and specification")
    s.add_argument("--shift", required=True)
    s.add_argument("--delta", help="also test Delta-irreducibility for this shape, e.g. -1..1")
    s.add_argument("--bound", type=int, help="report failing gaps up to this bound")
    s.add_argument("--wsp", action="store_true", help="run the exhaustive specification sweep")
    s.add_argument("--lambda", dest="spec_set", help="specification set for --wsp")
    s.add_argument("--window", type=int, default=16)
    s.set_defaults(func=cmd_check_si)

    g = sub.add_parser("goe", parents=[common], help="Garden of Eden checks for a block code")
    g.add_argument("--code", required=True)
    g.add_argument("--check", choices=["surjective", "injective", "preinjective", "myhill", "drop", "all"],
                   default="all")
    g.set_defaults(func=cmd_goe)

    c = sub.add_parser("chain-suite", parents=[common], help="randomized sep/spa/cov inequality sweep")
    c.add_argument("--instances", type=int, default=200)
    c.add_argument("--equivalence", type=int, default=50)
    c.add_argument("--seed", type=int, default=7)
    c.add_argument("--system", help="check a single finite system file instead")
    c.add_argument("--F", help="comma separated group words for --system")
    c.add_argument("--U", default="U")
    c.add_argument("--V", default="V")
    c.set_defaults(func=cmd_chain_suite)

    x = sub.add_parser("counterexamples", parents=[common], help="the Myhill counterexamples")
    x.add_argument("--which", choices=["one-block", "two-point", "all"], default="all")
    x.set_defaults(func=cmd_counterexamples)

    m = sub.add_parser("myhill-sweep", parents=[common], help="all 256 elementary rules")
    m.add_argument("--table", action="store_true", help="include the per-rule table")
    m.set_defaults(func=cmd_myhill_sweep)
    return p


def _emit(rep: RunReport, args) -> None:
    print(rep.dumps() if args.json else rep.text())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
        code = 0
    except _Violation as exc:
        rep = exc.report
        rep.verdicts["error"] = str(exc)
        code = exc.exit_code
    except ShiftlabError as exc:
        rep = RunReport(args.command, verdicts={"error": str(exc), "error_type": type(exc).__name__})
        code = exc.exit_code
    if args.timing:
        rep.wall_time = time.perf_counter() - t0
    _emit(rep, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
