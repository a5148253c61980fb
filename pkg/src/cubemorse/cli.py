"""Command line interface: ``cubemorse graph|complex|bnsr ...``.

Exit codes: 0 pass, 1 fail, 2 inconclusive or budget exceeded, 3 input error.
Reports are JSON on stdout (``--summary`` prints a short text form instead).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import bigraph, cover, cubeworld, morse
from .verdicts import (DEFAULT_CELL_BUDGET, FAIL, INCONCLUSIVE, PASS, BudgetExceeded,
                       InputError, resolve_budget, worst)

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_INPUT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers

def _load_instance(path: str):
    try:
        return bigraph.load_graph_file(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: {exc}") from None


def _graph_of(obj, budget):
    return bigraph.realize(obj, budget) if isinstance(obj, bigraph.ModularSpec) else obj


def _describe(obj) -> dict:
    if isinstance(obj, bigraph.ModularSpec):
        return {"kind": "modular_spec", "rank": obj.rank, "modulus": obj.modulus,
                "vertices": obj.vertex_count, "edges": obj.edge_count}
    return {"kind": "explicit_graph", "rank": obj.rank, "vertices": len(obj.A) + len(obj.B),
            "edges": len(obj.edges)}


def _character(text: str, family: str) -> morse.Character:
    return morse.Character.parse(text, 1 if family == "xgamma" else 2)


# ---------------------------------------------------------------------------
# graph

def cmd_graph_gen(args) -> dict:
    spec = bigraph.build_modular_spec(args.n, args.p)
    data = spec.to_json()
    if args.output:
        Path(args.output).write_text(json.dumps(data, indent=2) + "\n")
    return {"status": PASS, "spec": data if not args.output else args.output,
            "modulus": spec.modulus, "rank": spec.rank}


def cmd_graph_verify(args) -> dict:
    obj = _load_instance(args.file)
    backends = ["explicit", "arithmetic"] if args.backend == "both" else [args.backend]
    out: dict = {"instance": _describe(obj), "reports": {}}
    notes = []
    if isinstance(obj, bigraph.MorseGraph) and "arithmetic" in backends:
        if args.backend == "arithmetic":
            raise InputError("the arithmetic backend needs a modular spec file")
        backends = ["explicit"]
        notes.append("arithmetic backend skipped: explicit graph input")
    budget = resolve_budget(args.budget, bigraph.DEFAULT_VERTEX_BUDGET)
    statuses = []
    for b in backends:
        try:
            rep = bigraph.verify_sizeable(obj, b, budget)
        except BudgetExceeded as exc:
            if args.backend == "both" and b == "explicit":
                notes.append(f"explicit backend skipped: {exc}")
                continue
            raise
        out["reports"][b] = rep.to_json()
        statuses.append(rep.status)
    if len(out["reports"]) == 2:
        agree = out["reports"]["explicit"]["status"] == out["reports"]["arithmetic"]["status"]
        out["backends_agree"] = agree
        if not agree:
            statuses.append(FAIL)
    out["notes"] = notes
    out["status"] = worst(statuses) if statuses else INCONCLUSIVE
    return out


# ---------------------------------------------------------------------------
# complex

def _complex_from_args(args, budget):
    if args.family == "theta":
        if args.n is None:
            raise InputError("--family theta needs --n")
        return None, cubeworld.build_theta_cube(args.n)
    if not args.graph:
        raise InputError("--family xgamma needs --graph")
    obj = _load_instance(args.graph)
    return obj, None


def cmd_complex_stats(args) -> dict:
    budget = resolve_budget(args.budget, DEFAULT_CELL_BUDGET)
    obj, X = _complex_from_args(args, budget)
    out: dict = {"family": args.family, "mode": args.mode}
    status = PASS
    if args.family == "theta":
        counts = cubeworld.cell_counts(X, args.mode, budget)
        n = args.n
        out["instance"] = {"rank": n}
        out["counts"] = counts.to_json()
        if args.compare_formula:
            expected = (2 - 2 * n) ** 3
            cmp = {"product_formula": expected, "equal": counts.chi == expected}
            if args.p is not None:
                y = cubeworld.euler_formula_Y(n, args.p)
                d = cubeworld.euler_Y_from_cover(n, args.p)
                cmp.update({"cover_chi_formula": y, "cover_chi_decomposition": d,
                            "cover_equal": y == d, "cover_negative": y < 0})
            ok = cmp["equal"] and cmp.get("cover_equal", True)
            out["compare"] = cmp
            status = PASS if ok else FAIL
        out["status"] = status
        return out
    out["instance"] = _describe(obj)
    if args.mode == "closed" and isinstance(obj, bigraph.ModularSpec):
        a = b = 2 * obj.rank * obj.modulus
        counts = cubeworld.xgamma_counts_from_statistics(a, b, obj.edge_count)
    else:
        g = _graph_of(obj, resolve_budget(args.budget, bigraph.DEFAULT_VERTEX_BUDGET))
        counts = cubeworld.cell_counts(cubeworld.build_x_gamma(g), args.mode, budget)
    out["counts"] = counts.to_json()
    if args.compare_formula:
        if not isinstance(obj, bigraph.ModularSpec) or not obj.is_two_residue_regular():
            out["compare"] = {"applicable": False,
                              "reason": "the closed formula presumes a two-residue modular graph"}
            status = INCONCLUSIVE
        else:
            n, p = obj.rank, obj.modulus
            formula = cubeworld.euler_formula_xgamma(n, p)
            regular = cubeworld.euler_xgamma_modular(n, p)
            out["compare"] = {"applicable": True, "chi": counts.chi, "formula_chi": formula,
                              "equal": counts.chi == formula, "regular_graph_chi": regular,
                              "regular_equal": counts.chi == regular}
            status = PASS if counts.chi == formula else FAIL
    out["status"] = status
    return out


def cmd_complex_flag_check(args) -> dict:
    budget = resolve_budget(args.budget, DEFAULT_CELL_BUDGET)
    obj, X = _complex_from_args(args, budget)
    if X is None:
        g = _graph_of(obj, resolve_budget(args.budget, bigraph.DEFAULT_VERTEX_BUDGET))
        X = cubeworld.build_x_gamma(g)
        instance = _describe(obj)
    else:
        instance = {"rank": args.n}
    verdict = cubeworld.check_flag_links(X, budget)
    return {"family": args.family, "instance": instance, "flag_links": verdict.to_json(),
            "status": verdict.status}


# ---------------------------------------------------------------------------
# bnsr

def cmd_bnsr_chambers(args) -> dict:
    chambers = morse.enumerate_chambers(args.family, args.n)
    w = morse.weights_for(args.family, args.n)
    return {"family": args.family, "rank": args.n, "functionals": w.functional_names(),
            "count": len(chambers), "chambers": [c.to_json() for c in chambers], "status": PASS}


_WORKER_CACHE: dict = {}


def _xgamma_job(job) -> dict:
    """Run every requested engine for one character (also used in worker processes)."""
    graph_json, values, engines, exhaustive, budget = job
    key = json.dumps(graph_json, sort_keys=True)
    state = _WORKER_CACHE.get(key)
    if state is None:
        if "sigma" in graph_json:
            spec = bigraph.ModularSpec.from_json(graph_json)
            g = bigraph.realize(spec, budget)
            cert = bigraph.verify_sizeable(spec, "arithmetic")
        else:
            g = bigraph.MorseGraph.from_json(graph_json)
            cert = bigraph.verify_sizeable(g, "explicit")
        state = (cubeworld.build_x_gamma(g), cert)
        _WORKER_CACHE.clear()
        _WORKER_CACHE[key] = state
    X, cert = state
    lam = morse.Character(tuple(values), 1)
    out: dict = {"engines": {}}
    for engine in engines:
        try:
            rep = morse.check_theorem_hypotheses(X, lam, engine=engine, exhaustive=exhaustive,
                                                 certificate=cert, budget=budget)
        except InputError as exc:
            out["engines"][engine] = {"status": INCONCLUSIVE, "not_applicable": str(exc)}
            continue
        out["engines"][engine] = rep.to_json()
    dead = morse.check_dead_links_full(X, lam, exhaustive=exhaustive, budget=budget)
    out["dead_links_full"] = dead.to_json()
    return out


def _characters(args, family: str, n: int) -> list[tuple[str, morse.Character]]:
    if args.all_chambers:
        return [(c.label, c.representative) for c in morse.enumerate_chambers(family, n)]
    if args.lam is None:
        raise InputError("give --lambda or --all-chambers")
    lam = _character(args.lam, family)
    w = morse.weights_for(family, n)
    morse._check_dim(w, lam)
    sv = morse.sign_vector(w, lam)
    label = "".join("+" if s > 0 else "-" if s < 0 else "0" for s in sv)
    return [(label, lam)]


def _engine_status(rep: dict) -> str:
    return rep["status"]


def cmd_bnsr_check(args) -> dict:
    budget = resolve_budget(args.budget, DEFAULT_CELL_BUDGET)
    if args.family == "theta":
        return _bnsr_theta(args)
    if not args.graph:
        raise InputError("--family xgamma needs --graph")
    obj = _load_instance(args.graph)
    n = obj.rank
    engines = ["explicit", "symbolic"] if args.engine == "both" else [args.engine]
    chars = _characters(args, "xgamma", n)
    jobs = [(obj.to_json(), lam.values, engines, args.exhaustive, budget) for _, lam in chars]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_xgamma_job, jobs))
    else:
        results = [_xgamma_job(j) for j in jobs]
    chambers = {}
    statuses = []
    homology = []
    for (label, lam), res in zip(chars, results):
        engine_statuses = [r["status"] for r in res["engines"].values()]
        applicable = [r["status"] for r in res["engines"].values() if "not_applicable" not in r]
        st = worst(applicable + [res["dead_links_full"]["status"]]) if applicable else INCONCLUSIVE
        if len(applicable) == 2 and len(set(applicable)) > 1 and INCONCLUSIVE not in applicable:
            st = FAIL
            res["engines_agree"] = False
        elif len(applicable) == 2:
            res["engines_agree"] = len(set(engine_statuses)) == 1
        entry = {"character": lam.to_json(), "status": st, **res}
        chambers[label] = entry
        statuses.append(st)
        homology += [r.get("homology_status", INCONCLUSIVE) for r in res["engines"].values()
                     if "not_applicable" not in r]
    status = worst(statuses)
    out: dict = {"family": "xgamma", "instance": _describe(obj), "m": 1,
                 "engines": engines, "chambers": chambers, "status": status,
                 "homology_status": worst(homology) if homology else INCONCLUSIVE}
    if args.all_chambers and status == PASS:
        out["certificate"] = _certificate("xgamma", n, len(chars), _xgamma_chi(obj))
    return out


def _xgamma_chi(obj) -> dict:
    if isinstance(obj, bigraph.ModularSpec):
        a = b = 2 * obj.rank * obj.modulus
        counts = cubeworld.xgamma_counts_from_statistics(a, b, obj.edge_count)
    else:
        counts = cubeworld.xgamma_counts_from_statistics(len(obj.A), len(obj.B), len(obj.edges))
    out = {"euler_characteristic": counts.chi, "negative": counts.chi < 0}
    if isinstance(obj, bigraph.ModularSpec) and obj.is_two_residue_regular():
        f = cubeworld.euler_formula_xgamma(obj.rank, obj.modulus)
        out.update({"closed_formula": f, "closed_formula_negative": f < 0,
                    "closed_formula_matches_count": f == counts.chi})
    return out


def _bnsr_theta(args) -> dict:
    if args.n is None or args.p is None:
        raise InputError("--family theta needs --n and --p")
    cov = cover.load_cover_file(args.voltage) if args.voltage else \
        cover.build_voltage_cover(args.n, args.p)
    if cov.n != args.n or cov.p != args.p:
        raise InputError("voltage table does not match --n/--p")
    engine = {"explicit": "explicit", "symbolic": "structured", "both": "both"}[args.engine]
    chambers = {}
    statuses = []
    for label, lam in _characters(args, "theta", args.n):
        rep = cover.check_theta_family(args.n, args.p, lam, cov, engine)
        sizes = [t.get("ascending_sizes") for k, t in rep.types.items() if k.startswith("type1")]
        entry = rep.to_json()
        entry["status"] = rep.status
        if sizes and all(s for s in sizes):
            entry["min_ascending_factor"] = min(min(s) for s in sizes)
        chambers[label] = entry
        statuses.append(rep.status)
    status = worst(statuses)
    out: dict = {"family": "theta", "instance": {"rank": args.n, "prime": args.p,
                                                 "voltage": "file" if args.voltage else "i*j"},
                 "m": 1, "engine": engine, "chambers": chambers, "status": status}
    if args.all_chambers and status == PASS:
        y = cubeworld.euler_formula_Y(args.n, args.p)
        chi = {"euler_characteristic": y, "negative": y < 0,
               "decomposition": cubeworld.euler_Y_from_cover(args.n, args.p)}
        out["certificate"] = _certificate("theta", args.n, len(chambers), chi)
    return out


def _certificate(family: str, n: int, chambers: int, chi: dict) -> dict:
    dim = n if family == "xgamma" else n - 1
    return {
        "claim": "the kernel of the map to Z^%d is finitely presented" % dim,
        "checked": ("living links of every dead simplex (the empty simplex included), "
                    "ascending and descending, meet the connectivity bounds for m = 1 "
                    "(Sigma^2) at every vertex type, for every chamber of the character "
                    "sphere of characters vanishing on the kernel"),
        "chambers": chambers,
        "criteria": [
            "Morse criterion for cube complexes with affine height maps: connectivity of "
            "living links of dead simplices implies membership of the character in "
            "Sigma^(m+1) (Bestvina-Brady, Bux-Gonzalez style)",
            "Bieri-Renz criterion: the kernel of a map onto a free abelian group is of type "
            "F_(m+1) iff every character vanishing on it lies in Sigma^(m+1)",
        ],
        "level": "m = 1 (Sigma^2)",
        "assumes": ("the complex is locally CAT(0): vertex links are flag, which "
                    "`complex flag-check` verifies separately"),
        "euler_characteristic": chi,
        "f3_obstruction": ("a nonzero Euler characteristic of the ambient group is what rules "
                           "out type F_3 for the kernel; that implication is not machine-checked"),
    }


# ---------------------------------------------------------------------------
# output

def _summary(report: dict) -> str:
    lines = [f"status: {report.get('status')}"]
    for key in ("family", "instance", "counts", "compare", "backends_agree", "modulus"):
        if key in report:
            lines.append(f"{key}: {json.dumps(report[key])}")
    if "chambers" in report and isinstance(report["chambers"], dict):
        for label, entry in report["chambers"].items():
            lines.append(f"chamber {label}: {entry['status']}")
    elif "chambers" in report:
        lines.append(f"chambers: {report['count']}")
    if "reports" in report:
        for b, r in report["reports"].items():
            lines.append(f"{b}: {r['status']}")
    if "flag_links" in report:
        lines.append(f"flag links: {report['flag_links']['status']}")
    if "certificate" in report:
        lines.append("certificate: " + report["certificate"]["claim"])
    if "error" in report:
        lines.append(f"error: {report['error']}")
    if "seconds" in report:
        lines.append(f"seconds: {report['seconds']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubemorse", description=__doc__.splitlines()[0])
    p.add_argument("--summary", action="store_true", help="human-readable output")
    p.add_argument("--json", action="store_true", help="JSON output (default)")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing")
    p.add_argument("--budget", type=int, default=None,
                   help="enumeration budget (default from CUBEMORSE_BUDGET)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    g = sub.add_parser("graph").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    gen = g.add_parser("gen")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=int, default=None)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_graph_gen)
    ver = g.add_parser("verify")
    ver.add_argument("file")
    ver.add_argument("--backend", choices=("explicit", "arithmetic", "both"), default="both")
    ver.set_defaults(func=cmd_graph_verify)

    c = sub.add_parser("complex").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, func in (("stats", cmd_complex_stats), ("flag-check", cmd_complex_flag_check)):
        q = c.add_parser(name)
        q.add_argument("--family", choices=("xgamma", "theta"), required=True)
        q.add_argument("--graph")
        q.add_argument("--n", type=int)
        q.set_defaults(func=func)
        if name == "stats":
            q.add_argument("--mode", choices=("enum", "closed"), default="closed")
            q.add_argument("--compare-formula", action="store_true")
            q.add_argument("--p", type=int, help="prime for the ramified-cover formula (theta)")

    b = sub.add_parser("bnsr").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    ch = b.add_parser("chambers")
    ch.add_argument("--family", choices=("xgamma", "theta"), required=True)
    ch.add_argument("--n", type=int, required=True)
    ch.set_defaults(func=cmd_bnsr_chambers)
    ck = b.add_parser("check")
    ck.add_argument("--family", choices=("xgamma", "theta"), required=True)
    ck.add_argument("--graph")
    ck.add_argument("--n", type=int)
    ck.add_argument("--p", type=int)
    ck.add_argument("--voltage", help="voltage table JSON (theta)")
    mode = ck.add_mutually_exclusive_group()
    mode.add_argument("--lambda", dest="lam")
    mode.add_argument("--all-chambers", action="store_true")
    ck.add_argument("--engine", choices=("explicit", "symbolic", "both"), default="both")
    ck.add_argument("--exhaustive", action="store_true")
    ck.set_defaults(func=cmd_bnsr_check)
    return p


def _move_global_flags(argv: list[str]) -> list[str]:
    # accept global flags anywhere on the command line
    flags = {"--summary", "--json", "--timing"}
    valued = {"--budget", "--jobs"}
    front, rest = [], []
    it = iter(argv)
    for a in it:
        if a in flags:
            front.append(a)
        elif a in valued:
            front += [a, next(it, "")]
        elif any(a.startswith(v + "=") for v in valued):
            front.append(a)
        else:
            rest.append(a)
    return front + rest


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_move_global_flags(argv))
    start = time.perf_counter()
    try:
        report = args.func(args)
        code = EXIT[report["status"]]
    except BudgetExceeded as exc:
        report = {"status": INCONCLUSIVE, "error": f"budget exceeded: {exc}",
                  "budget": exc.budget, "needed": exc.needed}
        code = 2
    except InputError as exc:
        report = {"status": "error", "error": str(exc)}
        code = EXIT_INPUT
    except OSError as exc:
        report = {"status": "error", "error": f"cannot read {exc.filename}: {exc.strerror}"}
        code = EXIT_INPUT
    # the worker count never changes the result, so keep it out of the echo
    echo = _move_global_flags(argv)
    echo = [a for i, a in enumerate(echo) if a != "--jobs" and not a.startswith("--jobs=")
            and not (i and echo[i - 1] == "--jobs")]
    report = {"command": echo, **report}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    if args.summary:
        print(_summary(report))
    else:
        print(json.dumps(report, indent=2, default=str))
    return code


if __name__ == "__main__":
    sys.exit(main())
