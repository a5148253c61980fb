"""Link-level model of the ramified theta family.

At an unramified (Type 1) vertex the link is F1 * F2 * F3 with each F_i the
2n edges of a theta graph.  At a ramified (Type 2) vertex two of the factors
are replaced by a connected p-fold cover Γ of the complete bipartite graph
F_P * F_Q, and the link is Γ * F_R.  Γ is realised here as a voltage graph:
vertex set (F_P ⊔ F_Q) × Z/p, with (P, i, k) joined to (Q, j, k + voltage(i, j)).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from pathlib import Path
from typing import Mapping

from sympy import isprime

from .morse import (DOWN, UP, Character, LinkCheck, ThetaWeights, VerificationReport,
                    _check_dim, check_link, edge_weight)
from .simplicial import SimplicialComplex, discrete, join
from .verdicts import FAIL, PASS, InputError, Verdict


def theta_labels(n: int) -> list[str]:
    """Base vertices of each side in their fixed order x1..xn, y1..yn (indices 1..2n)."""
    return [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]


@dataclass(frozen=True)
class CoverVertex:
    side: int       # 1 or 2: which base factor this vertex lies over
    base: int       # 1..2n
    fiber: int      # 0..p-1
    label: str = ""

    @property
    def sort_key(self) -> tuple:
        return (self.side, self.base, self.fiber)

    def __str__(self) -> str:
        return f"F{self.side}.{self.label or self.base}@{self.fiber}"


@dataclass(frozen=True)
class RamifiedVertex:
    """A vertex on the ramification locus of the theta cube.

    Coordinates P (value 0) and Q (value 1) are covered by Γ; R is the
    ramification direction and carries value `free`.
    """

    P: int
    Q: int
    R: int
    free: int

    @property
    def point(self) -> tuple[int, int, int]:
        v = [0, 0, 0]
        v[self.P], v[self.Q], v[self.R] = 0, 1, self.free
        return tuple(v)

    def value(self, coord: int) -> int:
        return self.point[coord]

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.point) + ")"


def ramified_vertices() -> list[RamifiedVertex]:
    """The six vertices of (0 x 1 x Θ) ∪ (Θ x 0 x 1) ∪ (1 x Θ x 0)."""
    out = [RamifiedVertex(i, (i + 1) % 3, (i + 2) % 3, t) for i in range(3) for t in (0, 1)]
    return sorted(out, key=lambda r: r.point)


# ---------------------------------------------------------------------------
# voltage covers

@dataclass(frozen=True)
class VoltageCover:
    n: int
    p: int
    voltage: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if self.n < 2:
            raise InputError("n must be at least 2")
        if not isprime(self.p):
            raise InputError(f"{self.p} is not prime")
        m = 2 * self.n
        vol = {}
        for i, j in product(range(1, m + 1), repeat=2):
            if (i, j) not in self.voltage:
                raise InputError(f"missing voltage for base edge ({i}, {j})")
            vol[(i, j)] = int(self.voltage[(i, j)]) % self.p
        object.__setattr__(self, "voltage", vol)

    @property
    def labels(self) -> list[str]:
        return theta_labels(self.n)

    @property
    def size(self) -> int:
        return 2 * self.n

    def vertex(self, side: int, base: int, fiber: int) -> CoverVertex:
        return CoverVertex(side, base, fiber % self.p, self.labels[base - 1])

    @cached_property
    def vertices(self) -> list[CoverVertex]:
        return [self.vertex(s, i, k) for s in (1, 2) for i in range(1, self.size + 1)
                for k in range(self.p)]

    @cached_property
    def edges(self) -> list[tuple[CoverVertex, CoverVertex]]:
        return [(self.vertex(1, i, k), self.vertex(2, j, k + self.voltage[(i, j)]))
                for (i, j) in sorted(self.voltage) for k in range(self.p)]

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: [] for v in self.vertices}
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return adj

    def net_voltage(self, i: int, j: int, i2: int, j2: int) -> int:
        v = self.voltage
        return (v[(i, j)] - v[(i2, j)] + v[(i2, j2)] - v[(i, j2)]) % self.p

    def graph_complex(self, keep=None) -> SimplicialComplex:
        """Γ (or its full subgraph on `keep`) as a 1-dimensional complex."""
        verts = self.vertices if keep is None else [v for v in self.vertices if keep(v)]
        vs = set(verts)
        return SimplicialComplex([e for e in self.edges if e[0] in vs and e[1] in vs], verts)

    def translate(self, v: CoverVertex, shift: int = 1) -> CoverVertex:
        return self.vertex(v.side, v.base, v.fiber + shift)

    def to_json(self) -> dict:
        lab = self.labels
        return {"n": self.n, "p": self.p, "base_order": lab,
                "voltage": {f"{lab[i - 1]}|{lab[j - 1]}": self.voltage[(i, j)]
                            for (i, j) in sorted(self.voltage)}}

    @classmethod
    def from_json(cls, data: dict) -> "VoltageCover":
        try:
            n, p = int(data["n"]), int(data["p"])
            index = {lab: k + 1 for k, lab in enumerate(theta_labels(n))}
            vol = {}
            for key, val in data["voltage"].items():
                a, sep, b = key.partition("|")
                if not sep or a not in index or b not in index:
                    raise InputError(f"bad voltage key {key!r}")
                vol[(index[a], index[b])] = int(val)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed voltage table: {exc}") from exc
        return cls(n, p, vol)


def build_voltage_cover(n: int, p: int) -> VoltageCover:
    """voltage(i, j) = i·j mod p; a base 4-cycle then has net voltage (i - i')(j - j')."""
    if n < 2:
        raise InputError("n must be at least 2")
    if not isprime(p):
        raise InputError(f"{p} is not prime")
    if p <= 2 * n:
        raise InputError(f"the cover needs a prime p > 2n = {2 * n}, got {p}")
    m = 2 * n
    return VoltageCover(n, p, {(i, j): i * j for i in range(1, m + 1) for j in range(1, m + 1)})


def load_cover_file(path) -> VoltageCover:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from None
    return VoltageCover.from_json(data)


def _components(vertices, adj, keep) -> list[list]:
    seen: set = set()
    comps = []
    for v in vertices:
        if v in seen or not keep(v):
            continue
        comp = [v]
        seen.add(v)
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen and keep(w):
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def verify_cover_properties(cover: VoltageCover) -> Verdict:
    """Local bijectivity, connectivity, and every base 4-cycle lifting to one 4p-cycle."""
    m, p = cover.size, cover.p
    adj = cover.adjacency
    for v in cover.vertices:
        over = {}
        for w in adj[v]:
            over[w.base] = over.get(w.base, 0) + 1
        if sorted(over) != list(range(1, m + 1)) or any(c != 1 for c in over.values()):
            return Verdict(FAIL, "not a covering map at a vertex", {"vertex": str(v)})
    comps = _components(cover.vertices, adj, lambda v: True)
    if len(comps) > 1:
        return Verdict(FAIL, "cover is disconnected",
                       {"components": len(comps), "component": sorted(str(v) for v in comps[0])})
    checked = 0
    for (i, i2), (j, j2) in product(combinations(range(1, m + 1), 2), repeat=2):
        length = _lifted_cycle_length(cover, i, j, i2, j2)
        checked += 1
        if length != 4 * p:
            lab = cover.labels
            return Verdict(FAIL, "a base 4-cycle does not lift to a single 4p-cycle",
                           {"base_cycle": [f"F1.{lab[i - 1]}", f"F2.{lab[j - 1]}",
                                           f"F1.{lab[i2 - 1]}", f"F2.{lab[j2 - 1]}"],
                            "lift_length": length,
                            "net_voltage": cover.net_voltage(i, j, i2, j2)})
    return Verdict(PASS, evidence={"vertices": len(cover.vertices), "edges": len(cover.edges),
                                   "base_4_cycles": checked})


def _lifted_cycle_length(cover: VoltageCover, i: int, j: int, i2: int, j2: int) -> int:
    """Walk the lift of i - j - i2 - j2 - i from (F1, i, 0) until it closes."""
    start = cover.vertex(1, i, 0)
    v, steps = start, 0
    route = [(2, j), (1, i2), (2, j2), (1, i)]
    while True:
        for side, base in route:
            v = next(w for w in cover.adjacency[v] if w.side == side and w.base == base)
            steps += 1
        if v == start:
            return steps


def preimage_connected(cover: VoltageCover, left: set[int], right: set[int]) -> bool:
    """Is the full preimage of the join left * right (base indices) connected?"""
    keep = lambda v: (v.side == 1 and v.base in left) or (v.side == 2 and v.base in right)
    return len(_components(cover.vertices, cover.adjacency, keep)) == 1


# ---------------------------------------------------------------------------
# weights at theta vertices

def theta_link_weights(n: int, lam: Character, at: int) -> dict[str, Fraction]:
    """label -> height change leaving the theta vertex `at` (0 or 1) along that edge."""
    weights = ThetaWeights(n)
    _check_dim(weights, lam)
    out = {}
    for lab in theta_labels(n):
        w = edge_weight(weights, lab, lam)
        tail = 0 if lab[0] == "x" else 1
        out[lab] = w if at == tail else -w
    return out


def _split(wts: dict[str, Fraction]) -> dict[str, list[str]]:
    return {UP: [k for k, w in wts.items() if w > 0],
            DOWN: [k for k, w in wts.items() if w < 0],
            "dead": [k for k, w in wts.items() if w == 0]}


def _structured(direction: str, simplex: tuple, target: int, ok: bool, level: int,
                witness: dict) -> LinkCheck:
    status = PASS if ok else FAIL
    return LinkCheck(direction, simplex, target, level, "structured", status, status,
                     None if ok else witness)


# ---------------------------------------------------------------------------
# Type 1

def type1_checks(n: int, lam: Character, point: tuple[int, int, int]) -> tuple[list[LinkCheck], dict]:
    """F1 * F2 * F3 at a vertex of the theta cube, by the join argument."""
    parts = [_split(theta_link_weights(n, lam, point[c])) for c in range(3)]
    checks = []
    for d in (UP, DOWN):
        sizes = [len(parts[c][d]) for c in range(3)]
        checks.append(_structured(d, (), 1, all(sizes), 1 if all(sizes) else -1,
                                  {"living_factor_sizes": sizes}))
        for c in range(3):
            others = [sizes[k] for k in range(3) if k != c]
            for lab in parts[c]["dead"]:
                checks.append(_structured(d, (f"f{c + 1}:{lab}",), 0, all(others),
                                          0 if all(others) else -1,
                                          {"living_factor_sizes": others}))
        for c1, c2 in combinations(range(3), 2):
            c3 = 3 - c1 - c2
            for l1, l2 in product(parts[c1]["dead"], parts[c2]["dead"]):
                checks.append(_structured(d, (f"f{c1 + 1}:{l1}", f"f{c2 + 1}:{l2}"), -1,
                                          bool(sizes[c3]), -1 if sizes[c3] else -2,
                                          {"living_factor_size": sizes[c3]}))
    evidence = {"ascending_sizes": [len(parts[c][UP]) for c in range(3)],
                "descending_sizes": [len(parts[c][DOWN]) for c in range(3)]}
    return checks, evidence


def check_type1_hypotheses(n: int, lam: Character, engine: str = "both") -> VerificationReport:
    report = VerificationReport("theta", lam, engine)
    for point in product((0, 1), repeat=3):
        name = "type1:" + "(" + ",".join(map(str, point)) + ")"
        checks, evidence = [], {}
        if engine in ("structured", "both"):
            checks, evidence = type1_checks(n, lam, point)
        if engine in ("explicit", "both"):
            L = join(*(discrete(f"f{c + 1}:{lab}" for lab in theta_labels(n)) for c in range(3)))
            wts = [theta_link_weights(n, lam, point[c]) for c in range(3)]
            explicit = check_link(L, lambda u: wts[int(u[1]) - 1][u.split(":")[1]])
            checks = _agree(checks, explicit, report, name)
        report.add_type(name, checks, evidence)
    return report


# ---------------------------------------------------------------------------
# Type 2

def type2_checks(cover: VoltageCover, lam: Character, rv: RamifiedVertex
                 ) -> tuple[list[LinkCheck], dict]:
    """Γ * F_R at a ramified vertex, following the case analysis of the join."""
    n = cover.n
    base = {c: _split(theta_link_weights(n, lam, rv.value(c))) for c in (rv.P, rv.Q, rv.R)}
    index = {lab: k + 1 for k, lab in enumerate(cover.labels)}
    checks = []
    evidence = {}
    for d in (UP, DOWN):
        left = {index[lab] for lab in base[rv.P][d]}
        right = {index[lab] for lab in base[rv.Q][d]}
        third = base[rv.R][d]
        keep = lambda v, left=left, right=right: (
            (v.side == 1 and v.base in left) or (v.side == 2 and v.base in right))
        comps = _components(cover.vertices, cover.adjacency, keep)
        living_gamma = len(comps) == 1
        evidence[f"gamma_{d}_components"] = len(comps)
        evidence[f"F_R_{d}"] = len(third)
        wit = {"gamma_components": len(comps), "F_R_living": len(third)}
        if len(comps) > 1:
            wit["component"] = sorted((str(v) for v in comps[0]), key=str)[:12]
        # σ = ∅: Γ↑ connected and F_R↑ nonempty make the join simply connected
        checks.append(_structured(d, (), 1, living_gamma and bool(third),
                                  1 if living_gamma and third else 0 if comps else -2, wit))
        # dead vertex in the ramification direction: what is left is Γ↑
        for lab in base[rv.R]["dead"]:
            checks.append(_structured(d, (f"R:{lab}",), 0, living_gamma,
                                      0 if living_gamma else -1, wit))
        # dead vertex of Γ over F_P (resp. F_Q): its living neighbours over the
        # other side, one per living base label, joined with F_R↑
        for side, own, other in ((1, rv.P, right), (2, rv.Q, left)):
            for lab in base[own]["dead"]:
                ok = bool(other) and bool(third)
                checks.append(_structured(d, (f"F{side}.{lab}@*",), 0, ok,
                                          0 if ok else -1,
                                          {"living_neighbours": len(other),
                                           "F_R_living": len(third)}))
        # dead edges
        for lp, lq in product(base[rv.P]["dead"], base[rv.Q]["dead"]):
            checks.append(_structured(d, (f"F1.{lp}@*", f"F2.{lq}@*"), -1, bool(third),
                                      -1 if third else -2, {"F_R_living": len(third)}))
        for side, own, other in ((1, rv.P, right), (2, rv.Q, left)):
            for lab, lr in product(base[own]["dead"], base[rv.R]["dead"]):
                checks.append(_structured(d, (f"F{side}.{lab}@*", f"R:{lr}"), -1, bool(other),
                                          -1 if other else -2, {"living_neighbours": len(other)}))
    return checks, evidence


def type2_link(cover: VoltageCover, lam: Character, rv: RamifiedVertex):
    """The explicit complex Γ * F_R and the height change of each of its vertices."""
    n = cover.n
    wP = theta_link_weights(n, lam, rv.value(rv.P))
    wQ = theta_link_weights(n, lam, rv.value(rv.Q))
    wR = theta_link_weights(n, lam, rv.value(rv.R))
    gamma = cover.graph_complex()
    ramif = discrete(f"R:{lab}" for lab in theta_labels(n))
    L = join(gamma, ramif)

    def weight(u):
        if isinstance(u, CoverVertex):
            return (wP if u.side == 1 else wQ)[u.label]
        return wR[u[2:]]

    return L, weight


def check_type2_hypotheses(cover: VoltageCover, lam: Character, engine: str = "both",
                           vertices: list[RamifiedVertex] | None = None) -> VerificationReport:
    _check_dim(ThetaWeights(cover.n), lam)
    report = VerificationReport("theta", lam, engine)
    for rv in vertices or ramified_vertices():
        name = f"type2:{rv}"
        checks, evidence = [], {}
        if engine in ("structured", "both"):
            checks, evidence = type2_checks(cover, lam, rv)
        if engine in ("explicit", "both"):
            L, weight = type2_link(cover, lam, rv)
            checks = _agree(checks, check_link(L, weight), report, name)
        report.add_type(name, checks, evidence)
    return report


def _agree(structured: list[LinkCheck], explicit: list[LinkCheck], report: VerificationReport,
           name: str) -> list[LinkCheck]:
    """Keep explicit checks; when both ran, note any disagreement in the overall verdict."""
    if not structured:
        return explicit
    if not explicit:
        return structured
    s = {c.direction: c.homotopy for c in structured if not c.simplex}
    e = {c.direction: c.homotopy for c in explicit if not c.simplex}
    agg_s = all(c.homotopy == PASS for c in structured)
    agg_e = all(c.homotopy == PASS for c in explicit)
    if s != e or agg_s != agg_e:
        report.notes.append(f"{name}: structured and explicit checks disagree")
        return structured + explicit + [LinkCheck("both", (), 1, -2, "agreement", FAIL, FAIL,
                                                  {"structured": agg_s, "explicit": agg_e})]
    return structured + explicit


def deck_invariant(cover: VoltageCover, lam: Character) -> bool:
    """Fibre translation k -> k+1 is an automorphism of Γ preserving Γ↑ and Γ↓ at every
    ramified vertex."""
    edge_set = {frozenset(e) for e in cover.edges}
    for u, w in cover.edges:
        if frozenset((cover.translate(u), cover.translate(w))) not in edge_set:
            return False
    for rv in ramified_vertices():
        _, weight = type2_link(cover, lam, rv)
        for v in cover.vertices:
            if (weight(v) > 0) != (weight(cover.translate(v)) > 0) or \
                    (weight(v) < 0) != (weight(cover.translate(v)) < 0):
                return False
    return True


def check_theta_family(n: int, p: int, lam: Character, cover: VoltageCover | None = None,
                       engine: str = "both") -> VerificationReport:
    """Type 1 conditions at the eight theta-cube vertices and Type 2 conditions at the
    six ramified vertices, using a verified cover."""
    cover = cover or build_voltage_cover(n, p)
    report = VerificationReport("theta", lam, engine)
    cv = verify_cover_properties(cover)
    report.merge(check_type1_hypotheses(n, lam, engine))
    if cv.status != PASS:
        report.add_type("cover", [LinkCheck("both", (), 1, -2, "cover", FAIL, FAIL,
                                            {"cover": cv.to_json()})])
    else:
        report.types["cover"] = {"homotopy": PASS, "homology": PASS, "checks": 1,
                                 "dead_simplices": 0, **cv.evidence}
    report.merge(check_type2_hypotheses(cover, lam, engine))
    return report
