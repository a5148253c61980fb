"""Cube complexes inside a product of three graphs.

A cell of the ambient product is a triple of factor cells (a vertex or an
edge of each factor); a complex is given by a vertex predicate and contains
exactly the ambient cells all of whose corners satisfy it.  Cells are never
stored: links and counts are computed on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Any, Callable, Hashable, Iterable, Mapping

from .bigraph import MorseGraph
from .simplicial import SimplicialComplex, sort_vertices, vertex_key
from .verdicts import (DEFAULT_CELL_BUDGET, FAIL, PASS, BudgetExceeded, Verdict,
                       resolve_budget)


@dataclass(frozen=True)
class FactorEdge:
    label: Hashable
    tail: Hashable
    head: Hashable


@dataclass(frozen=True)
class FactorGraph:
    """A finite graph without loops; parallel edges are allowed (the theta graphs)."""

    name: str
    vertices: tuple
    edges: tuple[FactorEdge, ...]

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if e.tail == e.head or e.tail not in vs or e.head not in vs:
                raise ValueError(f"bad factor edge {e}")

    @cached_property
    def incident(self) -> dict:
        """vertex -> [(edge, other endpoint, outgoing)] in edge order."""
        out: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.tail].append((e, e.head, True))
            out[e.head].append((e, e.tail, False))
        return out

    @cached_property
    def out_edges(self) -> dict:
        out: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.tail].append(e)
        return out

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)


def theta_graph(n: int) -> FactorGraph:
    """Two vertices 0, 1 and 2n edges: x_i oriented 0 -> 1, y_i oriented 1 -> 0."""
    if n < 2:
        raise ValueError("theta graphs need n >= 2")
    edges = tuple(FactorEdge(f"x{i}", 0, 1) for i in range(1, n + 1)) + \
        tuple(FactorEdge(f"y{i}", 1, 0) for i in range(1, n + 1))
    return FactorGraph(f"Theta{n}", (0, 1), edges)


def complete_bipartite(graph: MorseGraph) -> FactorGraph:
    """A * B with every edge oriented from its A end to its B end."""
    edges = tuple(FactorEdge((a, b), a, b) for a in graph.A for b in graph.B)
    return FactorGraph("A*B", graph.A + graph.B, edges)


def cycle_graph(k: int, name: str = "C") -> FactorGraph:
    return FactorGraph(f"{name}{k}", tuple(range(k)),
                       tuple(FactorEdge(i, i, (i + 1) % k) for i in range(k)))


def point_graph() -> FactorGraph:
    return FactorGraph("pt", (0,), ())


# ---------------------------------------------------------------------------
# membership rules

class FullProduct:
    name = "full"

    def __call__(self, v) -> bool:
        return True

    def describe(self) -> dict:
        return {"rule": "full"}


class XGammaRule:
    """Vertex rules of X_Γ: AAA, BBB, or the unique cyclic A->B transition
    (position i in A, position i+1 in B) is an edge of Γ."""

    name = "xgamma"

    def __init__(self, graph: MorseGraph):
        self.graph = graph
        self._side = {**{a: "A" for a in graph.A}, **{b: "B" for b in graph.B}}

    def __call__(self, v) -> bool:
        side = self._side
        pos = required_pair(side[v[0]] + side[v[1]] + side[v[2]])
        if pos is None:
            return True
        i, j = pos
        return (v[i], v[j]) in self.graph.edges

    def pattern(self, v) -> str:
        return "".join(self._side[x] for x in v)

    def describe(self) -> dict:
        return {"rule": "xgamma"}


@lru_cache(maxsize=None)
def required_pair(pattern: str) -> tuple[int, int] | None:
    """For a side pattern like 'ABA', the positions whose Γ-edge is required.

    Precomputed from the five vertex rules: AAA and BBB need nothing; every
    mixed pattern has exactly one cyclic position i with i in A and i+1 in B.
    """
    if pattern in ("AAA", "BBB"):
        return None
    hits = [(i, (i + 1) % 3) for i in range(3)
            if pattern[i] == "A" and pattern[(i + 1) % 3] == "B"]
    assert len(hits) == 1, pattern
    return hits[0]


MEMBERSHIP_TABLE = {"".join(p): required_pair("".join(p)) for p in product("AB", repeat=3)}


# ---------------------------------------------------------------------------
# the complexes

@dataclass(frozen=True)
class LinkVertexLabel:
    """A vertex of a vertex link: the edge leaving the centre along `factor`."""

    factor: int
    target: Hashable
    edge: Hashable
    outgoing: bool

    @cached_property
    def sort_key(self) -> tuple:
        return (self.factor, vertex_key(self.target), vertex_key(self.edge))

    @cached_property
    def _hash(self) -> int:
        return hash((self.factor, self.target, self.edge, self.outgoing))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return f"f{self.factor}:{self.target}"


@dataclass(frozen=True)
class CellCounts:
    V: int
    E: int
    F: int
    C: int

    @property
    def chi(self) -> int:
        return self.V - self.E + self.F - self.C

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.V, self.E, self.F, self.C)

    def to_json(self) -> dict:
        return {"V": self.V, "E": self.E, "F": self.F, "C": self.C, "chi": self.chi}


class ProductCubeComplex:
    """Induced subcomplex of G1 x G2 x G3 on the vertices accepted by `rule`."""

    def __init__(self, factors: Iterable[FactorGraph], rule: Callable | None = None,
                 graph: MorseGraph | None = None, family: str = "custom", meta: Mapping | None = None):
        self.factors = tuple(factors)
        if len(self.factors) != 3:
            raise ValueError("exactly three factors")
        self.rule = rule if rule is not None else FullProduct()
        self.graph = graph
        self.family = family
        self.meta = dict(meta or {})
        self._link_cache: dict = {}

    def __repr__(self) -> str:
        return f"ProductCubeComplex({self.family}, {[f.name for f in self.factors]})"

    @property
    def dimension(self) -> int:
        return 3

    @property
    def ambient_vertex_count(self) -> int:
        n = 1
        for f in self.factors:
            n *= len(f.vertices)
        return n

    def contains(self, v) -> bool:
        return all(x in set_ for x, set_ in zip(v, self._vertex_sets)) and self.rule(tuple(v))

    @cached_property
    def _vertex_sets(self):
        return tuple(frozenset(f.vertices) for f in self.factors)

    def contains_cell(self, cell) -> bool:
        """A cell (triple of factor vertices or FactorEdges) is present iff all corners are."""
        return all(self.contains(c) for c in corners(cell))

    def vertices(self, budget: int | None = None):
        budget = resolve_budget(budget, DEFAULT_CELL_BUDGET)
        if self.ambient_vertex_count > budget:
            raise BudgetExceeded("ambient vertices", self.ambient_vertex_count, budget)
        for v in product(*(f.vertices for f in self.factors)):
            if self.rule(v):
                yield v

    # -- links -------------------------------------------------------------
    def link_vertices(self, v) -> list[LinkVertexLabel]:
        out = []
        for i, f in enumerate(self.factors):
            for e, other, outgoing in f.incident[v[i]]:
                w = list(v)
                w[i] = other
                if self.rule(tuple(w)):
                    out.append(LinkVertexLabel(i + 1, other, e.label, outgoing))
        return out

    def vertex_link(self, v) -> SimplicialComplex:
        """Simplicial link at v: edges at v, squares at v, 3-cubes at v."""
        v = tuple(v)
        cached = self._link_cache.get(v)
        if cached is not None:
            return cached
        if not self.contains(v):
            raise ValueError(f"{v} is not a vertex of the complex")
        lverts = self.link_vertices(v)
        by_factor = [[u for u in lverts if u.factor == i + 1] for i in range(3)]

        def far_corner_ok(us) -> bool:
            # the remaining corners are already known to be present
            w = list(v)
            for u in us:
                w[u.factor - 1] = u.target
            return self.rule(tuple(w))

        faces = [frozenset((u,)) for u in lverts]
        pairs = {}
        for i, j in combinations(range(3), 2):
            for u1 in by_factor[i]:
                for u2 in by_factor[j]:
                    ok = far_corner_ok((u1, u2))
                    pairs[(u1, u2)] = ok
                    if ok:
                        faces.append(frozenset((u1, u2)))
        for u1 in by_factor[0]:
            for u2 in by_factor[1]:
                if not pairs[(u1, u2)]:
                    continue
                for u3 in by_factor[2]:
                    if pairs[(u1, u3)] and pairs[(u2, u3)] and far_corner_ok((u1, u2, u3)):
                        faces.append(frozenset((u1, u2, u3)))
        link = SimplicialComplex._from_faces(faces)
        if len(self._link_cache) < 4096:
            self._link_cache[v] = link
        return link

    # -- vertex types --------------------------------------------------------
    def vertex_type(self, v) -> tuple:
        """Pattern plus block triple for X_Γ; the Θ vertex itself otherwise."""
        if self.graph is None:
            return tuple(v)
        pattern = "".join(self.graph.side(x) for x in v)
        return (pattern, tuple(str(self.graph.block_of[x]) for x in v))

    def type_representatives(self) -> dict:
        """One vertex per vertex type, chosen canonically (smallest in natural order)."""
        if self.graph is None:
            return {tuple(v): tuple(v) for v in self.vertices()}
        g = self.graph
        reps: dict = {}
        blocks_by_side = {s: sorted(b for b in g.blocks if b.side == s) for s in "AB"}
        first = {b: sort_vertices(vs)[0] for b, vs in g.blocks.items() if vs}
        edges_between: dict = {}
        for a, b in g.sorted_edges():
            key = (g.block_of[a], g.block_of[b])
            edges_between.setdefault(key, (a, b))
        for pattern in MEMBERSHIP_TABLE:
            req = MEMBERSHIP_TABLE[pattern]
            for blocks in product(*(blocks_by_side[s] for s in pattern)):
                if any(b not in first for b in blocks):
                    continue
                v = [first[b] for b in blocks]
                if req is not None:
                    i, j = req
                    e = edges_between.get((blocks[i], blocks[j]))
                    if e is None:
                        continue
                    v[i], v[j] = e
                v = tuple(v)
                assert self.rule(v)
                reps[(pattern, tuple(str(b) for b in blocks))] = v
        return reps


def corners(cell) -> list[tuple]:
    choices = [(c.tail, c.head) if isinstance(c, FactorEdge) else (c,) for c in cell]
    return list(product(*choices))


def build_x_gamma(graph: MorseGraph) -> ProductCubeComplex:
    ab = complete_bipartite(graph)
    return ProductCubeComplex((ab, ab, ab), XGammaRule(graph), graph=graph, family="xgamma",
                              meta={"rank": graph.rank})


def build_theta_cube(n: int) -> ProductCubeComplex:
    if n < 2:
        raise ValueError("theta cube complexes need n >= 2")
    th = theta_graph(n)
    return ProductCubeComplex((th, th, th), FullProduct(), family="theta", meta={"rank": n})


# ---------------------------------------------------------------------------
# counting

def _count_enumerate(X: ProductCubeComplex, budget: int) -> CellCounts:
    # each k-cube is counted once from the corner where every edge coordinate
    # sits at the tail of its factor edge
    counts = [0, 0, 0, 0]
    work = 0
    verts = list(X.vertices(budget))
    vset = set(verts)
    for v in verts:
        counts[0] += 1
        ok1 = []
        for i, f in enumerate(X.factors):
            good = []
            for e in f.out_edges[v[i]]:
                w = list(v)
                w[i] = e.head
                if tuple(w) in vset:
                    good.append(e)
            counts[1] += len(good)
            ok1.append(good)
        for i, j in combinations(range(3), 2):
            for e1 in ok1[i]:
                for e2 in ok1[j]:
                    work += 1
                    w = list(v)
                    w[i], w[j] = e1.head, e2.head
                    if tuple(w) in vset:
                        counts[2] += 1
        for e1 in ok1[0]:
            for e2 in ok1[1]:
                w12 = (e1.head, e2.head, v[2])
                if w12 not in vset:
                    continue
                for e3 in ok1[2]:
                    work += 1
                    if ((e1.head, v[1], e3.head) in vset and (v[0], e2.head, e3.head) in vset
                            and (e1.head, e2.head, e3.head) in vset):
                        counts[3] += 1
        if work > budget:
            raise BudgetExceeded("cell enumeration", work, budget)
    return CellCounts(*counts)


def count_cells_brute_force(X: ProductCubeComplex) -> CellCounts:
    """Oracle: test every ambient cell.  Tiny instances only."""
    counts = [0, 0, 0, 0]
    cells_per_factor = [list(f.vertices) + list(f.edges) for f in X.factors]
    for cell in product(*cells_per_factor):
        if X.contains_cell(cell):
            counts[sum(isinstance(c, FactorEdge) for c in cell)] += 1
    return CellCounts(*counts)


def xgamma_counts_from_statistics(a: int, b: int, e: int) -> CellCounts:
    """Closed-form counts of X_Γ from |A|, |B| and |E(Γ)|.

    A cell picks, per coordinate, an A-vertex, a B-vertex or an A*B edge.  Its
    corners impose the Γ-edge condition (A-end of coordinate i, B-end of
    coordinate i+1) for every cyclic i where both ends can occur; the
    conditions involve disjoint variables, so each contributes a factor |E(Γ)|
    and every unconstrained endpoint a factor |A| or |B|.
    """
    counts = [0, 0, 0, 0]
    for shape in product("ABE", repeat=3):
        active = [i for i in range(3) if shape[i] in "AE" and shape[(i + 1) % 3] in "BE"]
        used_a = set(active)
        used_b = {(i + 1) % 3 for i in active}
        term = e ** len(active)
        for i in range(3):
            if shape[i] in "AE" and i not in used_a:
                term *= a
            if shape[i] in "BE" and i not in used_b:
                term *= b
        counts[shape.count("E")] += term
    return CellCounts(*counts)


def full_product_counts(factors: Iterable[FactorGraph]) -> CellCounts:
    counts = [0, 0, 0, 0]
    fs = list(factors)
    for mask in product((0, 1), repeat=3):
        term = 1
        for f, m in zip(fs, mask):
            term *= len(f.edges) if m else len(f.vertices)
        counts[sum(mask)] += term
    return CellCounts(*counts)


def cell_counts(X: ProductCubeComplex, mode: str = "enum", budget: int | None = None) -> CellCounts:
    """Exact cell counts.  ``enum`` enumerates; ``closed`` uses graph statistics."""
    if mode == "enum":
        return _count_enumerate(X, resolve_budget(budget, DEFAULT_CELL_BUDGET))
    if mode == "closed":
        if isinstance(X.rule, XGammaRule):
            g = X.rule.graph
            return xgamma_counts_from_statistics(len(g.A), len(g.B), len(g.edges))
        if isinstance(X.rule, FullProduct):
            return full_product_counts(X.factors)
        raise ValueError("closed-form counts need an X_Γ or a full product")
    raise ValueError(f"unknown counting mode {mode!r}")


def euler_formula_xgamma(n: int, p: int) -> int:
    """2p³(1 - 36n² + 192n⁴ - 256n⁶) + 48p²(n² - 4n⁴)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 * p**3 * (1 - 36 * n**2 + 192 * n**4 - 256 * n**6) + 48 * p**2 * (n**2 - 4 * n**4)


def euler_xgamma_modular(n: int, p: int) -> int:
    """χ(X_Γ) of a two-residue modular graph: |A| = |B| = 2np, |E(Γ)| = 8n²p."""
    return xgamma_counts_from_statistics(2 * n * p, 2 * n * p, 8 * n * n * p).chi


def euler_formula_Y(n: int, p: int) -> int:
    """p³(2 - 18n + 24n² - 8n³) - 3p²(2n - 2)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return p**3 * (2 - 18 * n + 24 * n**2 - 8 * n**3) - 3 * p**2 * (2 * n - 2)


def euler_Y_from_cover(n: int, p: int) -> int:
    """p³ χ(X) corrected along the three ramified components (each a theta graph)."""
    return p**3 * (2 - 2 * n) ** 3 - 3 * (p**3 - p**2) * (2 - 2 * n)


# ---------------------------------------------------------------------------
# flag links

def first_non_flag(links: Iterable[tuple[Any, SimplicialComplex]]):
    for v, L in links:
        w = L.non_flag_witness()
        if w is not None:
            return v, w
    return None


def check_flag_links(X, budget: int | None = None) -> Verdict:
    """Gromov's link condition: every vertex link is flag."""
    if isinstance(X, CubicalSet):
        items = ((v, X.vertex_link(v)) for v in X.vertices)
        count = len(X.vertices)
    else:
        verts = list(X.vertices(budget))
        items = ((v, X.vertex_link(v)) for v in verts)
        count = len(verts)
    hit = first_non_flag(items)
    if hit is None:
        return Verdict(PASS, evidence={"vertices_checked": count})
    v, clique = hit
    return Verdict(FAIL, "vertex link is not flag",
                   {"vertex": [str(x) for x in v], "clique": [str(u) for u in sort_vertices(clique)]})


class CubicalSet:
    """A union of elementary cubes in Z^d, for small hand-made test complexes.

    A cube is a tuple of integer intervals (lo, hi) with hi - lo in {0, 1}.
    """

    def __init__(self, cubes: Iterable[tuple[tuple[int, int], ...]]):
        cells: set = set()
        for c in cubes:
            c = tuple((int(lo), int(hi)) for lo, hi in c)
            free = [i for i, (lo, hi) in enumerate(c) if hi != lo]
            for mask in product((0, 1, 2), repeat=len(free)):
                face = list(c)
                for i, m in zip(free, mask):
                    lo, hi = c[i]
                    face[i] = (lo, hi) if m == 2 else ((lo, lo) if m == 0 else (hi, hi))
                cells.add(tuple(face))
        self.cells = frozenset(cells)
        self.vertices = sorted(tuple(lo for lo, _ in c) for c in self.cells
                               if all(lo == hi for lo, hi in c))

    def vertex_link(self, v) -> SimplicialComplex:
        faces = []
        for c in self.cells:
            if any(not (lo <= x <= hi) for x, (lo, hi) in zip(v, c)):
                continue
            free = [i for i, (lo, hi) in enumerate(c) if hi != lo]
            if not free:
                continue
            faces.append(frozenset((i, +1 if c[i][0] == v[i] else -1) for i in free))
        return SimplicialComplex._from_faces(faces)

    def counts(self) -> tuple[int, ...]:
        out = [0] * (1 + max(sum(hi != lo for lo, hi in c) for c in self.cells))
        for c in self.cells:
            out[sum(hi != lo for lo, hi in c)] += 1
        return tuple(out)
