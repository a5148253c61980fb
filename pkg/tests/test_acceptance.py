"""Acceptance criteria.  Each test records PASS/FAIL lines shown after the run."""

import json
import random
import time
from fractions import Fraction
from itertools import product

from sympy import primerange

from cubemorse.bigraph import (ModularSpec, backends_agree, build_modular_spec,
                               complete_bipartite_blocks, random_modular_spec, realize,
                               smallest_sizeable_prime, template_edges, verify_sizeable)
from cubemorse.cli import main
from cubemorse.cover import (VoltageCover, build_voltage_cover, deck_invariant,
                             verify_cover_properties)
from cubemorse.cubeworld import (CubicalSet, build_x_gamma, cell_counts, check_flag_links,
                                 count_cells_brute_force, euler_formula_xgamma, euler_formula_Y,
                                 euler_xgamma_modular, euler_Y_from_cover)
from cubemorse.morse import (DOWN, UP, ThetaWeights, check_link, XGammaWeights, check_dead_links_full,
                             check_theorem_hypotheses, edge_weight, enumerate_chambers,
                             link_vertex_weight, living_dead_split, random_character, sign_vector)
from cubemorse.simplicial import (SimplicialComplex, connectivity, discrete, h1, join,
                                  link_of_simplex)


def cli(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


# ---------------------------------------------------------------------------
# 1. construction soundness

def test_1_construction_soundness(capsys, tmp_path, criterion):
    path = str(tmp_path / "spec.json")
    code, gen = cli(capsys, "graph", "gen", "--n", "1", "-o", path)
    code_v, ver = cli(capsys, "graph", "verify", path, "--backend", "both")
    ok_gen = code == 0 and gen["modulus"] == 397 and code_v == 0 and ver["backends_agree"]
    criterion("1a", ok_gen, f"p = {gen['modulus']}, verify exit {code_v}")

    times = {}
    for n in (2, 3):
        t = time.perf_counter()
        passed = verify_sizeable(build_modular_spec(n), "arithmetic").passed
        times[n] = time.perf_counter() - t
        ok_gen &= passed
    ok_fast = all(t < 1.0 for t in times.values())
    criterion("1b", ok_fast and ok_gen,
              ", ".join(f"n={n} arithmetic {t:.3f}s" for n, t in times.items()))

    rng = random.Random(2024)
    primes = list(primerange(2, 102))
    t = time.perf_counter()
    disagreements, statuses = 0, set()
    for _ in range(120):
        spec = random_modular_spec(1, rng.choice(primes), rng)
        agree, ex, _ = backends_agree(spec)
        disagreements += not agree
        statuses.add(ex.status)
    elapsed = time.perf_counter() - t
    ok_oracle = disagreements == 0 and elapsed < 30
    criterion("1c", ok_oracle, f"120 random specs, {disagreements} disagreements, "
                               f"verdicts seen {sorted(statuses)}, {elapsed:.1f}s")
    assert ok_gen and ok_fast and ok_oracle


# ---------------------------------------------------------------------------
# 2. Euler identities

def test_2a_mode1_mode2_counts(criterion):
    rng = random.Random(7)
    bad = 0
    for _ in range(150):
        na = rng.randint(1, 7)
        nb = rng.randint(1, 8 - na)
        A = [f"a{i}" for i in range(na)]
        B = [f"b{i}" for i in range(nb)]
        E = [(a, b) for a in A for b in B if rng.random() < rng.random()]
        X = build_x_gamma(complete_bipartite_blocks({"A1-": A}, {"B1-": B}, E))
        enum = cell_counts(X, "enum")
        bad += not (enum == cell_counts(X, "closed") == count_cells_brute_force(X))
    criterion("2a", bad == 0, f"150 graphs on <= 8 vertices, {bad} mismatches")
    assert bad == 0


def test_2b_xgamma_polynomial(criterion):
    mismatches = []
    for p in primerange(5, 102):
        counted = cell_counts(build_x_gamma(realize(build_modular_spec(1, p))), "closed").chi
        if counted != euler_formula_xgamma(1, p):
            mismatches.append((p, counted, euler_formula_xgamma(1, p)))
    # the enumeration agrees with the closed count wherever it is affordable
    enum = cell_counts(build_x_gamma(realize(build_modular_spec(1, 5))), "enum").chi
    ok = not mismatches
    detail = (f"enumerated chi(1,5) = {enum}, polynomial gives {euler_formula_xgamma(1, 5)}; "
              f"{len(mismatches)} of {len(list(primerange(5, 102)))} primes disagree")
    criterion("2b", ok, detail)
    assert ok, detail


def test_2c_cover_identity(criterion):
    pairs = list(product(range(2, 6), (5, 7, 11, 13)))
    ok = all(euler_Y_from_cover(n, p) == euler_formula_Y(n, p) for n, p in pairs)
    ok &= euler_formula_Y(2, 5) == -400
    criterion("2c", ok, f"{len(pairs)} (n, p) pairs, value at (2, 5) = {euler_formula_Y(2, 5)}")
    assert ok


def test_2d_negativity(criterion):
    xs = [euler_formula_xgamma(n, p) for n in range(1, 9) for p in primerange(2, 400)]
    ys = [euler_formula_Y(n, p) for n in range(2, 9) for p in primerange(2, 400)]
    counts = [euler_xgamma_modular(n, p) for n in range(1, 9) for p in primerange(2, 400)]
    ok = max(xs) < 0 and max(ys) < 0 and max(counts) < 0
    criterion("2d", ok, f"max values: polynomial {max(xs)}, cover {max(ys)}, "
                        f"counted modular chi {max(counts)}")
    assert ok


# ---------------------------------------------------------------------------
# 3. hypothesis certificates

def _all_pass(rep: dict) -> bool:
    for entry in rep["chambers"].values():
        for e in entry.get("engines", {}).values():
            if e["status"] != "pass" or e["homology_status"] != "pass":
                return False
            for t in e["vertex_types"].values():
                if t["homotopy"] != "pass":
                    return False
    return rep["status"] == "pass"


def test_3a_xgamma_certificate(capsys, tmp_path, criterion):
    p = smallest_sizeable_prime(1)
    path = str(tmp_path / "g.json")
    cli(capsys, "graph", "gen", "--n", "1", "--p", str(p), "-o", path)
    t = time.perf_counter()
    code, rep = cli(capsys, "bnsr", "check", "--family", "xgamma", "--graph", path,
                    "--all-chambers", "--engine", "both")
    elapsed = time.perf_counter() - t
    engines = {e for c in rep["chambers"].values() for e, r in c["engines"].items()
               if "not_applicable" not in r}
    ok = (code == 0 and _all_pass(rep) and engines == {"explicit", "symbolic"}
          and "certificate" in rep and elapsed < 60)
    # ascending and descending conditions are both checked, and all hold
    X = build_x_gamma(realize(build_modular_spec(1, p)))
    w = XGammaWeights(1)
    directions: dict = {}
    for ch in enumerate_chambers("xgamma", 1):
        for v in X.type_representatives().values():
            for c in check_link(X.vertex_link(v),
                                lambda u: link_vertex_weight(w, ch.representative, u, X.graph)):
                directions.setdefault(c.direction, set()).add(c.homotopy)
    ok &= directions == {UP: {"pass"}, DOWN: {"pass"}}
    criterion("3a", ok, f"p = {p}, {len(rep['chambers'])} chambers, engines {sorted(engines)}, "
                        f"up and down checks all pass, {elapsed:.1f}s")
    # the construction at p = 5 itself (has a 4-cycle, spans connected)
    path5 = str(tmp_path / "g5.json")
    cli(capsys, "graph", "gen", "--n", "1", "--p", "5", "-o", path5)
    code5, rep5 = cli(capsys, "bnsr", "check", "--family", "xgamma", "--graph", path5,
                      "--all-chambers", "--engine", "both")
    criterion("3a (p = 5)", code5 == 0 and _all_pass(rep5), "construction residues mod 5")
    assert ok and code5 == 0


def test_3b_theta_certificates(capsys, criterion):
    results = []
    for n, p in ((2, 5), (3, 7)):
        t = time.perf_counter()
        code, rep = cli(capsys, "bnsr", "check", "--family", "theta", "--n", str(n), "--p", str(p),
                        "--all-chambers")
        elapsed = time.perf_counter() - t
        type2 = all(sum(k.startswith("type2") and v["homotopy"] == "pass"
                        for k, v in c["vertex_types"].items()) == 6
                    for c in rep["chambers"].values())
        cover_ok = all(c["vertex_types"]["cover"]["homotopy"] == "pass"
                       for c in rep["chambers"].values())
        ok = code == 0 and type2 and cover_ok and "certificate" in rep and elapsed < 60
        criterion(f"3b (n = {n}, p = {p})", ok,
                  f"{len(rep['chambers'])} chambers, Type-2 checks at 6 vertices, {elapsed:.1f}s")
        results.append(ok)
    assert all(results)


# ---------------------------------------------------------------------------
# 4. negative controls

def test_4_negative_controls(capsys, tmp_path, criterion):
    spec = ModularSpec(2, 5, {e: {0} for e in template_edges(2)})
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(spec.to_json()))
    sizeable = verify_sizeable(spec, "arithmetic").passed or verify_sizeable(spec).passed
    code, rep = cli(capsys, "bnsr", "check", "--family", "xgamma", "--graph", str(path),
                    "--all-chambers", "--engine", "explicit")
    witnesses = [f["witness"] for c in rep["chambers"].values()
                 for f in c["engines"]["explicit"]["failures"] if f.get("witness")]
    disconnected = [w for w in witnesses if len(w.get("components", [])) > 1]
    ok_a = not sizeable and code == 1 and bool(disconnected)
    criterion("4a", ok_a, f"sigma = {{0}} at n = 2, p = 5: bnsr exit {code}, "
                          f"{sum(c['status'] == 'fail' for c in rep['chambers'].values())} of "
                          f"{len(rep['chambers'])} chambers fail, disconnected witnesses present")

    m = 4
    zero = VoltageCover(2, 5, {(i, j): 0 for i in range(1, m + 1) for j in range(1, m + 1)})
    v = verify_cover_properties(zero)
    ok_b = v.status == "fail"
    criterion("4b", ok_b, f"zero voltage: {v.detail}")

    octants = [tuple((0, 1) if s else (-1, 0) for s in signs)
               for signs in product((0, 1), repeat=3) if signs != (1, 1, 1)]
    flag = check_flag_links(CubicalSet(octants))
    ok_c = flag.status == "fail"
    criterion("4c", ok_c, f"octahedral link minus a triangle: clique {flag.witness['clique']}")
    assert ok_a and ok_b and ok_c


# ---------------------------------------------------------------------------
# 5. invariant suites

def _random_complex(rng, nverts=7, nsimp=8, maxdim=3):
    vs = list(range(nverts))
    return SimplicialComplex([rng.sample(vs, rng.randint(1, maxdim)) for _ in range(nsimp)])


def test_5_invariants(criterion):
    rng = random.Random(11)
    results = {}

    # scaling invariance of splits and negation symmetry
    spec = random_modular_spec(2, 3, rng, sizes=(2,))
    X = build_x_gamma(realize(spec))
    w = XGammaWeights(2)
    reps = list(X.type_representatives().values())
    ok = True
    for _ in range(40):
        lam = random_character(w, rng)
        mu = Fraction(rng.randint(1, 20), rng.randint(1, 20))
        L = X.vertex_link(rng.choice(reps))
        wt = lambda c: (lambda u: link_vertex_weight(w, c, u, X.graph))
        base = living_dead_split(L, wt(lam))
        neg = living_dead_split(L, wt(-lam))
        ok &= living_dead_split(L, wt(lam.scaled(mu))) == base
        ok &= (neg[0], neg[1], neg[2]) == (base[0], base[2], base[1])
    results["scaling invariance"] = ok

    # chamber completeness, 10^4 samples over four families
    fams = [("xgamma", 2), ("xgamma", 3), ("theta", 3), ("theta", 4)]
    table = {f: {c.signs: c for c in enumerate_chambers(*f)} for f in fams}
    weights = {f: (XGammaWeights if f[0] == "xgamma" else ThetaWeights)(f[1]) for f in fams}
    ok = True
    for k in range(10_000):
        f = fams[k % 4]
        ok &= sign_vector(weights[f], random_character(weights[f], rng)) in table[f]
    results["chamber completeness (10^4)"] = ok

    # chamber sufficiency: bucket random characters by chamber, compare edge-class signs
    ok, hit = True, 0
    for f in fams:
        wf = weights[f]
        buckets: dict = {}
        for _ in range(20_000):
            lam = random_character(wf, rng, zero_prob=0.35)
            bucket = buckets.setdefault(sign_vector(wf, lam), [])
            if len(bucket) < 100:
                bucket.append(lam)
        hit += len(buckets)
        for signs, lams in buckets.items():
            rep = table[f][signs].representative
            for lam in lams:
                for cls in wf.classes():
                    a, b = edge_weight(wf, cls, lam), edge_weight(wf, cls, rep)
                    ok &= (a > 0) == (b > 0) and (a < 0) == (b < 0)
    spec1 = random_modular_spec(1, 5, rng, sizes=(2,))
    X1 = build_x_gamma(realize(spec1))
    for ch in enumerate_chambers("xgamma", 1):
        ref = check_theorem_hypotheses(X1, ch.representative).to_json()
        for _ in range(5):
            lam = ch.representative.scaled(Fraction(rng.randint(1, 50), rng.randint(1, 50)))
            got = check_theorem_hypotheses(X1, lam).to_json()
            ok &= {k: v for k, v in got.items() if k != "character"} == \
                {k: v for k, v in ref.items() if k != "character"}
    results[f"chamber sufficiency ({hit} chambers sampled)"] = ok

    # link composition law
    ok = True
    for _ in range(300):
        L = _random_complex(rng)
        top = sorted(rng.choice(L.maximal_simplices()))
        cut = rng.randint(0, len(top))
        s, t = frozenset(top[:cut]), frozenset(top[cut:])
        ok &= link_of_simplex(L, s | t) == link_of_simplex(link_of_simplex(L, s), t)
    results["link composition"] = ok

    # join criterion implies vanishing H1
    ok, seen = True, 0
    for _ in range(300):
        G = _random_complex(rng, nverts=6, nsimp=7, maxdim=2)
        for L in (G, join(G, discrete([("y", i) for i in range(rng.randint(1, 3))]))):
            v = connectivity(L, 1)
            if v.method == "join_criterion":
                seen += 1
                ok &= h1(L).vanishes
    results[f"join criterion => H1 = 0 ({seen} certificates)"] = ok and seen > 0

    # deck invariance of the ascending and descending parts of the cover
    ok = True
    for n, p in ((2, 5), (3, 7)):
        cover = build_voltage_cover(n, p)
        for ch in enumerate_chambers("theta", n):
            ok &= deck_invariant(cover, ch.representative)
    results["deck invariance"] = ok

    # dead-link fullness
    ok = all(check_dead_links_full(X, ch.representative, exhaustive=False).passed
             for ch in enumerate_chambers("xgamma", 2))
    ok &= all(check_dead_links_full(X1, ch.representative).passed
              for ch in enumerate_chambers("xgamma", 1))
    results["dead-link fullness"] = ok

    for name, good in results.items():
        criterion(f"5 {name}", good)
    assert all(results.values())
