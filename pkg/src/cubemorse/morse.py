"""Characters, edge weights, living/dead links and the Morse-theoretic hypothesis check.

Two families are supported:

``xgamma``
    λ = (λ_1, ..., λ_n); an edge of A*B between A_k^s and B_l^t changes the
    height by Σ w_i λ_i (going from its A end to its B end), with w_i = s·t
    for i in {k, l} and 0 otherwise.
``theta``
    λ = (λ_2, ..., λ_n); x_1 and y_1 carry Σλ_i, x_i and y_i carry λ_i, each
    measured along the edge's orientation.

Everything is exact: weights are :class:`fractions.Fraction` and a link vertex
is dead precisely when its weight is zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .bigraph import BlockId, MorseGraph, SizeabilityReport, template_edges
from .cubeworld import LinkVertexLabel, ProductCubeComplex, required_pair
from .feasibility import feasible_point
from .simplicial import (ConnectivityVerdict, SimplicialComplex, connectivity,
                         is_full_subcomplex, simplex_key,
                         sort_vertices)
from .verdicts import (FAIL, INCONCLUSIVE, PASS, BudgetExceeded, InputError, Verdict,
                       worst)

FAMILIES = ("xgamma", "theta")
UP, DOWN = "up", "down"
MAX_CHAMBER_RANK = 4


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class Character:
    """A nonzero rational vector up to positive scaling.

    ``first_index`` is 1 for the X_Γ family and 2 for the theta family, so
    ``values[0]`` is λ_1 or λ_2 respectively.
    """

    values: tuple[Fraction, ...]
    first_index: int = 1

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if not vals or all(v == 0 for v in vals):
            raise InputError("a character must be nonzero")
        object.__setattr__(self, "values", vals)

    @classmethod
    def parse(cls, text: str, first_index: int = 1) -> "Character":
        try:
            vals = tuple(Fraction(t.strip()) for t in text.split(","))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse character {text!r}") from None
        return cls(vals, first_index)

    @classmethod
    def for_family(cls, family: str, values: Sequence) -> "Character":
        return cls(tuple(values), 1 if family == "xgamma" else 2)

    def canonical(self) -> "Character":
        lead = abs(next(v for v in self.values if v != 0))
        return Character(tuple(v / lead for v in self.values), self.first_index)

    def scaled(self, mu) -> "Character":
        mu = Fraction(mu)
        if mu <= 0:
            raise ValueError("only positive scalings preserve the character class")
        return Character(tuple(v * mu for v in self.values), self.first_index)

    def __neg__(self) -> "Character":
        return Character(tuple(-v for v in self.values), self.first_index)

    def __getitem__(self, i: int) -> Fraction:
        """λ_i with the family's own indexing."""
        return self.values[i - self.first_index]

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)

    def to_json(self) -> list[str]:
        return [str(v) for v in self.values]


# ---------------------------------------------------------------------------
# weight systems

class XGammaWeights:
    family = "xgamma"
    first_index = 1

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank

    @property
    def dim(self) -> int:
        return self.rank

    def classes(self) -> list[tuple[BlockId, BlockId]]:
        return template_edges(self.rank)

    def coefficients(self, cls: tuple[BlockId, BlockId]) -> tuple[int, ...]:
        a, b = cls
        st = a.sign_value * b.sign_value
        # one coordinate is touched once even when both blocks share the index
        return tuple(st if i in (a.index, b.index) else 0 for i in range(1, self.rank + 1))

    def functionals(self) -> list[tuple[int, ...]]:
        n = self.rank
        unit = [tuple(int(i == k) for i in range(n)) for k in range(n)]
        pairs = [tuple(int(i in (j, k)) for i in range(n)) for j, k in combinations(range(n), 2)]
        return unit + pairs

    def functional_names(self) -> list[str]:
        n = self.rank
        return [f"l{i}" for i in range(1, n + 1)] + \
            [f"l{i}+l{j}" for i, j in combinations(range(1, n + 1), 2)]

    def class_name(self, cls) -> str:
        return f"{cls[0]}|{cls[1]}"


class ThetaWeights:
    family = "theta"
    first_index = 2

    def __init__(self, rank: int):
        if rank < 2:
            raise ValueError("theta weights need n >= 2")
        self.rank = rank

    @property
    def dim(self) -> int:
        return self.rank - 1

    def classes(self) -> list[str]:
        n = self.rank
        return [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]

    def coefficients(self, cls: str) -> tuple[int, ...]:
        i = int(cls[1:])
        if cls[0] not in "xy" or not 1 <= i <= self.rank:
            raise ValueError(f"not a theta edge label: {cls!r}")
        if i == 1:
            return (1,) * self.dim
        return tuple(int(k == i) for k in range(2, self.rank + 1))

    def functionals(self) -> list[tuple[int, ...]]:
        n = self.rank
        return [tuple(int(k == i) for k in range(2, n + 1)) for i in range(2, n + 1)] + \
            [(1,) * self.dim]

    def functional_names(self) -> list[str]:
        return [f"l{i}" for i in range(2, self.rank + 1)] + ["sum"]

    def class_name(self, cls) -> str:
        return str(cls)


def weights_for(family: str, rank: int):
    if family == "xgamma":
        return XGammaWeights(rank)
    if family == "theta":
        return ThetaWeights(rank)
    raise InputError(f"unknown family {family!r}")


def _check_dim(weights, lam: Character):
    if len(lam) != weights.dim or lam.first_index != weights.first_index:
        raise InputError(f"{weights.family} rank {weights.rank} needs a character with "
                         f"{weights.dim} entries starting at index {weights.first_index}")


def edge_weight(weights, cls, lam: Character) -> Fraction:
    """Signed height change along an edge of class `cls`, in its reference direction."""
    _check_dim(weights, lam)
    return sum((c * v for c, v in zip(weights.coefficients(cls), lam.values)), Fraction(0))


def compute_cmin(weights, lam: Character) -> Fraction:
    """Smallest nonzero absolute edge weight."""
    nonzero = [abs(w) for w in (edge_weight(weights, c, lam) for c in weights.classes()) if w]
    # a nonzero character always leaves some class alive in both families
    assert nonzero, "every edge class is dead"
    return min(nonzero)


# ---------------------------------------------------------------------------
# sign chambers

@dataclass(frozen=True)
class SignChamber:
    family: str
    rank: int
    signs: tuple[int, ...]
    representative: Character

    @property
    def label(self) -> str:
        return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in self.signs)

    def to_json(self) -> dict:
        return {"signs": self.label, "representative": self.representative.to_json()}


def sign_vector(weights, lam: Character) -> tuple[int, ...]:
    _check_dim(weights, lam)
    out = []
    for f in weights.functionals():
        v = sum((c * x for c, x in zip(f, lam.values)), Fraction(0))
        out.append((v > 0) - (v < 0))
    return tuple(out)


def enumerate_chambers(family: str, n: int, max_rank: int = MAX_CHAMBER_RANK) -> list[SignChamber]:
    """Every realizable nonzero sign vector of the family's functionals.

    Depth-first over the functionals in order, signs tried as +, -, 0, pruning
    partial assignments that are already infeasible.
    """
    weights = weights_for(family, n)
    if n > max_rank:
        raise BudgetExceeded("chamber enumeration rank", n, max_rank)
    funcs = weights.functionals()
    dim = weights.dim
    out: list[SignChamber] = []

    def solve(signs):
        eqs = [f for f, s in zip(funcs, signs) if s == 0]
        pos = [tuple(s * c for c in f) for f, s in zip(funcs, signs) if s != 0]
        return feasible_point(eqs, pos, dim)

    def rec(signs: tuple[int, ...]):
        if len(signs) == len(funcs):
            if all(s == 0 for s in signs):
                return
            point = solve(signs)
            if point is None:
                return
            rep = Character(point, weights.first_index).canonical()
            assert sign_vector(weights, rep) == signs
            out.append(SignChamber(family, n, signs, rep))
            return
        for s in (1, -1, 0):
            nxt = signs + (s,)
            if solve(nxt) is not None:
                rec(nxt)

    rec(())
    return out


def random_character(weights, rng: random.Random, bound: int = 6, zero_prob: float = 0.2) -> Character:
    """A random nonzero rational character; zeros and ties are sampled on purpose."""
    while True:
        vals = []
        for _ in range(weights.dim):
            if rng.random() < zero_prob:
                vals.append(Fraction(0))
            else:
                vals.append(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))
        if any(vals):
            return Character(tuple(vals), weights.first_index)


# ---------------------------------------------------------------------------
# link classification

def link_vertex_weight(weights, lam: Character, u: LinkVertexLabel, graph: MorseGraph | None = None
                       ) -> Fraction:
    """Height change from the link's centre to the far end of the edge behind `u`."""
    if weights.family == "xgamma":
        a, b = u.edge
        cls = (graph.block_of[a], graph.block_of[b])
    else:
        cls = u.edge
    w = edge_weight(weights, cls, lam)
    return w if u.outgoing else -w


def classify(vertices: Iterable, weight: Callable) -> dict:
    """vertex -> 'dead' | 'up' | 'down'."""
    out = {}
    for u in vertices:
        w = weight(u)
        out[u] = "dead" if w == 0 else UP if w > 0 else DOWN
    return out


def living_dead_split(link: SimplicialComplex, weight: Callable
                      ) -> tuple[SimplicialComplex, SimplicialComplex, SimplicialComplex]:
    """(dead, ascending, descending) full subcomplexes spanned by the three vertex classes."""
    kind = classify(link.vertices, weight)
    return tuple(link.induced([u for u, k in kind.items() if k == want])
                 for want in ("dead", UP, DOWN))


# ---------------------------------------------------------------------------
# hypothesis checks on a single link

@dataclass(frozen=True)
class LinkCheck:
    """One (direction, dead simplex) condition at one link."""

    direction: str
    simplex: tuple[str, ...]
    target: int
    level: int
    method: str
    homotopy: str
    homology: str
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"direction": self.direction, "dead_simplex": list(self.simplex),
               "target": self.target, "level": self.level, "method": self.method,
               "homotopy": self.homotopy, "homology": self.homology}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _track(verdict: ConnectivityVerdict, target: int) -> tuple[str, str]:
    if verdict.meets(target):
        homotopy = PASS
    elif verdict.refutes(target):
        homotopy = FAIL
    else:
        homotopy = INCONCLUSIVE
    if verdict.acyclic_meets(target):
        homology = PASS
    elif verdict.exact or verdict.acyclic_level == verdict.level:
        homology = FAIL
    else:
        homology = INCONCLUSIVE
    return homotopy, homology


def _living_witness(sub: SimplicialComplex, verdict: ConnectivityVerdict) -> dict:
    if sub.is_empty():
        return {"living_link": "empty"}
    w: dict = {"living_link_vertices": [str(v) for v in sort_vertices(sub.vertices)]}
    w.update(verdict.evidence)
    return w


def check_link(link: SimplicialComplex, weight: Callable, m: int = 1,
               max_dead_dim: int | None = None) -> list[LinkCheck]:
    """All conditions at one vertex: each dead simplex σ (σ = ∅ included) needs its
    ascending and descending living links to be (m - dim σ - 1)-connected."""
    kind = classify(link.vertices, weight)
    dead = link.induced([u for u, k in kind.items() if k == "dead"])
    halves = {d: link.induced([u for u, k in kind.items() if k == d]) for d in (UP, DOWN)}
    simplices = [frozenset()] + sorted(dead.faces, key=simplex_key)
    out = []
    for sigma in simplices:
        target = m - (len(sigma) - 1) - 1
        if target < -1:
            continue  # (-2)-connected holds vacuously
        if max_dead_dim is not None and len(sigma) - 1 > max_dead_dim:
            continue
        for d in (UP, DOWN):
            half = halves[d]
            # Lk_{half}(σ) = half ∩ Lk_L(σ)
            sub = SimplicialComplex._from_faces(
                t for t in half.faces if t | sigma in link.faces) if sigma else half
            verdict = connectivity(sub, target)
            homotopy, homology = _track(verdict, target)
            wit = None if homotopy == PASS and homology == PASS else _living_witness(sub, verdict)
            out.append(LinkCheck(d, tuple(str(x) for x in sort_vertices(sigma)), target,
                                 int(verdict.level), verdict.method, homotopy, homology, wit))
    return out


# ---------------------------------------------------------------------------
# reports

@dataclass
class VerificationReport:
    family: str
    character: Character
    engine: str
    m: int = 1
    types: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return worst(t["homotopy"] for t in self.types.values()) if self.types else INCONCLUSIVE

    @property
    def homology_status(self) -> str:
        return worst(t["homology"] for t in self.types.values()) if self.types else INCONCLUSIVE

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def add_type(self, name: str, checks: list[LinkCheck], extra: dict | None = None):
        homotopy = worst(c.homotopy for c in checks) if checks else PASS
        homology = worst(c.homology for c in checks) if checks else PASS
        entry = {"homotopy": homotopy, "homology": homology, "checks": len(checks),
                 "dead_simplices": len({c.simplex for c in checks}) - 1 if checks else 0}
        if extra:
            entry.update(extra)
        self.types[name] = entry
        for c in checks:
            if c.homotopy == FAIL or c.homology == FAIL:
                self.failures.append({"vertex_type": name, **c.to_json()})
            elif c.homotopy == INCONCLUSIVE or c.homology == INCONCLUSIVE:
                self.undecided.append({"vertex_type": name, **c.to_json()})

    def merge(self, other: "VerificationReport", prefix: str = ""):
        for k, v in other.types.items():
            self.types[prefix + k] = v
        self.failures += [{**f, "vertex_type": prefix + f["vertex_type"]} for f in other.failures]
        self.undecided += [{**f, "vertex_type": prefix + f["vertex_type"]} for f in other.undecided]
        self.notes += other.notes

    def to_json(self, max_witnesses: int = 20) -> dict:
        return {
            "family": self.family,
            "character": self.character.to_json(),
            "engine": self.engine,
            "m": self.m,
            "status": self.status,
            "homology_status": self.homology_status,
            "vertex_types": {k: self.types[k] for k in sorted(self.types)},
            "failures": self.failures[:max_witnesses],
            "failure_count": len(self.failures),
            "undecided": self.undecided[:max_witnesses],
            "undecided_count": len(self.undecided),
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# explicit engine

def _weights_of_complex(X: ProductCubeComplex):
    return weights_for(X.family, X.meta["rank"])


def _vertices_to_check(X: ProductCubeComplex, exhaustive: bool, budget: int | None):
    if exhaustive:
        for v in X.vertices(budget):
            yield X.vertex_type(v), v
    else:
        reps = X.type_representatives()
        for t in sorted(reps, key=str):
            yield t, reps[t]


def type_name(t) -> str:
    if isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], str):
        return f"{t[0]}:{','.join(t[1])}"
    return ",".join(str(x) for x in t)


def check_explicit(X: ProductCubeComplex, lam: Character, m: int = 1, exhaustive: bool = False,
                   budget: int | None = None) -> VerificationReport:
    weights = _weights_of_complex(X)
    _check_dim(weights, lam)
    report = VerificationReport(X.family, lam, "explicit", m)
    grouped: dict = {}
    for t, v in _vertices_to_check(X, exhaustive, budget):
        L = X.vertex_link(v)
        checks = check_link(L, lambda u: link_vertex_weight(weights, lam, u, X.graph), m)
        name = type_name(t)
        g = grouped.setdefault(name, {"checks": [], "vertices": 0, "rep": v})
        g["checks"].extend(checks)
        g["vertices"] += 1
    for name in sorted(grouped):
        g = grouped[name]
        extra = {"vertices": g["vertices"], "representative": [str(x) for x in g["rep"]]}
        # vertices of one type share a verdict; keep the witnesses of the first only
        report.add_type(name, _dedupe_checks(g["checks"]), extra)
    return report


def _dedupe_checks(checks: list[LinkCheck]) -> list[LinkCheck]:
    bad = [c for c in checks if c.homotopy != PASS or c.homology != PASS]
    good = [c for c in checks if c.homotopy == PASS and c.homology == PASS]
    return bad[:50] + good


# ---------------------------------------------------------------------------
# block-level symbolic engine (X_Γ)

@dataclass(frozen=True)
class Group:
    """Link vertices along coordinate `coord` whose far end lies in `block` and is
    Γ-adjacent to every vertex named in `nbr_of`."""

    coord: int
    block: BlockId
    nbr_of: frozenset = frozenset()

    def __str__(self) -> str:
        cond = "".join(f"&N({w})" for w in sort_vertices(self.nbr_of))
        return f"c{self.coord + 1}:{self.block}{cond}"


class Undecidable(Exception):
    """The block-level description cannot settle a relation."""


class SymbolicLink:
    """Block-level model of the link at a vertex of X_Γ.

    Groups are unions of link vertices sharing a coordinate and a target
    block; the relation between two groups is 'complete', 'empty' or 'gamma'
    (an edge exactly when the two targets are Γ-adjacent).  Relations that
    depend on finer data raise :class:`Undecidable`.
    """

    def __init__(self, graph: MorseGraph, v: tuple):
        self.graph = graph
        self.v = tuple(v)
        self.side = [graph.side(x) for x in self.v]
        self.pattern = "".join(self.side)
        self.groups = self._groups()
        self.check_flag()

    def _edge(self, x, y) -> bool:
        return self.graph.has_edge(x, y)

    def _groups(self) -> list[Group]:
        out = []
        for i in range(3):
            flipped = "B" if self.side[i] == "A" else "A"
            pat = self.pattern[:i] + flipped + self.pattern[i + 1:]
            req = required_pair(pat)
            nbr: frozenset = frozenset()
            if req is not None:
                if i in req:
                    j = req[0] if req[1] == i else req[1]
                    nbr = frozenset((self.v[j],))
                elif not self._edge(self.v[req[0]], self.v[req[1]]):
                    continue
            for b in sorted(blk for blk in self.graph.blocks if blk.side == flipped):
                out.append(Group(i, b, nbr))
        return out

    def relation(self, g1: Group, g2: Group) -> str:
        if g1.coord == g2.coord:
            return "empty"
        pat = list(self.pattern)
        for g in (g1, g2):
            pat[g.coord] = g.block.side
        req = required_pair("".join(pat))
        if req is None:
            return "complete"
        moved = {g1.coord: g1, g2.coord: g2}
        a, b = req
        if a in moved and b in moved:
            return "gamma"
        if a not in moved and b not in moved:
            return "complete" if self._edge(self.v[a], self.v[b]) else "empty"
        g, fixed = (moved[a], b) if a in moved else (moved[b], a)
        if self.v[fixed] in g.nbr_of:
            return "complete"
        raise Undecidable(f"relation {g1} ~ {g2} depends on adjacency to {self.v[fixed]}")

    def check_flag(self):
        """Raise unless every 3-cube condition follows from the pairwise ones."""
        by_coord = [[g for g in self.groups if g.coord == c] for c in range(3)]
        for g1, g2, g3 in product(*by_coord):
            pat = list(self.pattern)
            for g in (g1, g2, g3):
                pat[g.coord] = g.block.side
            req = required_pair("".join(pat))
            if req is None:
                continue
            ga, gb = ((g1, g2, g3)[req[0]], (g1, g2, g3)[req[1]])
            if self.relation(ga, gb) != "gamma":
                raise Undecidable(f"3-cube {g1}, {g2}, {g3} is not implied by its squares")

    def weight(self, weights, lam: Character, g: Group) -> Fraction:
        own = self.graph.block_of[self.v[g.coord]]
        if self.side[g.coord] == "A":
            return edge_weight(weights, (own, g.block), lam)
        return -edge_weight(weights, (g.block, own), lam)


@dataclass(frozen=True)
class _Piece:
    """A group restricted by extra adjacency conditions (symbolic vertices allowed)."""

    group: Group
    extra: tuple = ()

    @property
    def conditions(self) -> int:
        return len(self.group.nbr_of) + len(self.extra)


def _symbolic_level(sl: SymbolicLink, pieces: list[_Piece]) -> tuple[int, bool, str]:
    """Certified lower bound on the connectivity of the flag complex on `pieces`,
    whether the bound is exact, and a description of the factors."""
    if not pieces:
        return -2, True, "empty"
    # factors: pieces tied by any non-complete relation stay together
    n = len(pieces)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rel = {}
    for i, j in combinations(range(n), 2):
        r = sl.relation(pieces[i].group, pieces[j].group)
        rel[(i, j)] = r
        if r != "complete":
            parent[find(i)] = find(j)
    factors: dict = {}
    for i in range(n):
        factors.setdefault(find(i), []).append(i)
    total = 0
    desc = []
    for idx in sorted(factors.values()):
        # a block is nonempty and a single adjacency condition is met (every
        # vertex sees every opposite block); two conditions are not certified
        level = -1 if any(pieces[i].conditions <= 1 for i in idx) else -2
        coords = {pieces[i].group.coord for i in idx}
        if len(coords) == 2 and all(pieces[i].conditions == 0 for i in idx):
            cross = [rel[(i, j)] for i, j in combinations(idx, 2)
                     if pieces[i].group.coord != pieces[j].group.coord]
            sides = {pieces[i].group.block.side for i in idx}
            if all(r == "gamma" for r in cross) and sides == {"A", "B"}:
                # union of connected block-pair spans sharing blocks
                level = 0
        total += level + 2
        names = ",".join(str(pieces[i].group) + "".join(f"&N({e})" for e in pieces[i].extra)
                         for i in idx)
        desc.append(f"{{{names}}}[{level}]")
    return total - 2, False, " * ".join(desc)


def _symbolic_checks(sl: SymbolicLink, weights, lam: Character, m: int) -> list[LinkCheck]:
    kinds = {}
    for g in sl.groups:
        w = sl.weight(weights, lam, g)
        kinds[g] = "dead" if w == 0 else UP if w > 0 else DOWN
    dead = [g for g in sl.groups if kinds[g] == "dead"]
    # dead simplices up to block type: symbolic vertices d_k in pairwise adjacent dead groups
    sims: list[tuple[Group, ...]] = [()]
    sims += [(g,) for g in dead]
    for g1, g2 in combinations(dead, 2):
        r = sl.relation(g1, g2)
        if r == "complete" or (r == "gamma" and not g1.nbr_of and not g2.nbr_of):
            sims.append((g1, g2))
        elif r == "gamma":
            raise Undecidable(f"dead edge between {g1} and {g2} is not certified")
    out = []
    for sigma in sims:
        target = m - (len(sigma) - 1) - 1
        if target < -1:
            continue
        names = tuple(f"d[{g}]" for g in sigma)
        for d in (UP, DOWN):
            pieces = []
            for g in sl.groups:
                if kinds[g] != d or any(g.coord == s.coord for s in sigma):
                    continue
                extra = []
                keep = True
                for name, s in zip(names, sigma):
                    r = sl.relation(g, s)
                    if r == "empty":
                        keep = False
                    elif r == "gamma":
                        extra.append(name)
                if keep:
                    pieces.append(_Piece(g, tuple(extra)))
            level, exact, desc = _symbolic_level(sl, pieces)
            if level >= target:
                homotopy = homology = PASS
                wit = None
            elif exact:
                homotopy = homology = FAIL
                wit = {"living_link": desc}
            else:
                homotopy = homology = INCONCLUSIVE
                wit = {"living_link": desc}
            method = "block_join" if level >= 1 else "block"
            out.append(LinkCheck(d, names, target, level, method, homotopy, homology, wit))
    return out


def check_symbolic(X: ProductCubeComplex, lam: Character, certificate: SizeabilityReport | None,
                   m: int = 1) -> VerificationReport:
    """Block-level engine: one symbolic check per vertex type, using only the
    Morse-suited block structure and connectivity of every block-pair span."""
    if X.family != "xgamma":
        raise InputError("the symbolic engine handles the X_Γ family")
    if certificate is None:
        raise InputError("the symbolic engine needs a sizeability certificate")
    if certificate.morse_suited.status != PASS or any(
            v.status != PASS for v in certificate.span_connectivity.values()):
        raise InputError("the sizeability certificate does not certify Morse-suited blocks "
                         "and connected block-pair spans")
    weights = _weights_of_complex(X)
    _check_dim(weights, lam)
    report = VerificationReport("xgamma", lam, "symbolic", m)
    report.notes.append("uses Morse-suited blocks and connected block-pair spans only")
    reps = X.type_representatives()
    for t in sorted(reps, key=str):
        name = type_name(t)
        try:
            sl = SymbolicLink(X.graph, reps[t])
            checks = _symbolic_checks(sl, weights, lam, m)
            groups = [str(g) for g in sl.groups]
        except Undecidable as exc:
            checks = [LinkCheck("both", (), m, -2, "block", INCONCLUSIVE, INCONCLUSIVE,
                                {"reason": str(exc)})]
            groups = []
        report.add_type(name, checks, {"groups": groups})
    return report


# ---------------------------------------------------------------------------
# entry points

def check_theorem_hypotheses(X: ProductCubeComplex, lam: Character, m: int = 1,
                             engine: str = "explicit", exhaustive: bool = False,
                             certificate: SizeabilityReport | None = None,
                             budget: int | None = None) -> VerificationReport:
    """Check the living-link hypotheses at level m (only m = 1 is supported)."""
    if m != 1:
        raise InputError("only m = 1 is supported")
    if engine == "explicit":
        return check_explicit(X, lam, m, exhaustive, budget)
    if engine == "symbolic":
        return check_symbolic(X, lam, certificate, m)
    raise InputError(f"unknown engine {engine!r}")


def check_dead_links_full(X: ProductCubeComplex, lam: Character, exhaustive: bool = True,
                          budget: int | None = None):
    """Every dead link (flag completion on the dead vertices) is a full subcomplex."""
    weights = _weights_of_complex(X)
    count = 0
    for t, v in _vertices_to_check(X, exhaustive, budget):
        L = X.vertex_link(v)
        count += 1
        bad = dead_link_fullness_witness(L, lambda u: link_vertex_weight(weights, lam, u, X.graph))
        if bad is not None:
            return Verdict(FAIL, "dead link is not a full subcomplex",
                           {"vertex": [str(x) for x in v], "simplex": bad})
    return Verdict(PASS, evidence={"vertices_checked": count})


def dead_link_fullness_witness(L: SimplicialComplex, weight: Callable) -> list[str] | None:
    kind = classify(L.vertices, weight)
    dead = [u for u, k in kind.items() if k == "dead"]
    dagger = L.induced(dead).one_skeleton().flag_completion() if dead else SimplicialComplex()
    if is_full_subcomplex(dagger, L):
        return None
    extra = sorted(dagger.faces - L.faces, key=lambda f: (len(f), [str(x) for x in sort_vertices(f)]))
    if extra:
        return [str(x) for x in sort_vertices(extra[0])]
    missing = sorted(L.induced(dagger.vertices).faces - dagger.faces, key=len)
    return [str(x) for x in sort_vertices(missing[0])]

