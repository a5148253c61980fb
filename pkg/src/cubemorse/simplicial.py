"""Finite simplicial complexes for vertex links.

Complexes are immutable and store every nonempty simplex as a frozenset of
vertices.  Vertices may be any hashable, orderable-by-string object; the
links produced by :mod:`cubemorse.cubeworld` use :class:`LinkVertexLabel`.

Connectivity is certified, never guessed: simple connectivity is only ever
reported through the join criterion.  A vanishing first homology group
without a join certificate is reported as acyclic only.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property, reduce
from itertools import combinations
from typing import Hashable, Iterable

Vertex = Hashable
Simplex = frozenset

_DIGITS = re.compile(r"(\d+)")


def vertex_key(v) -> tuple:
    """Deterministic sort key for heterogeneous vertex labels (natural order)."""
    key = getattr(v, "sort_key", None)
    if key is not None:
        return (0, key)
    parts = _DIGITS.split(str(v))
    return (1, tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts))


def sort_vertices(vs: Iterable) -> list:
    return sorted(vs, key=vertex_key)


def simplex_key(s) -> tuple:
    return (len(s), tuple(vertex_key(v) for v in sort_vertices(s)))


class SimplicialComplex:
    """An abstract simplicial complex closed under taking faces."""

    def __init__(self, simplices: Iterable[Iterable] = (), vertices: Iterable = ()):
        faces: set[frozenset] = set()
        for s in simplices:
            s = frozenset(s)
            if not s or s in faces:
                continue
            # close downward; simplices here are tiny so brute force is fine
            for k in range(1, len(s) + 1):
                faces.update(frozenset(c) for c in combinations(s, k))
        for v in vertices:
            faces.add(frozenset((v,)))
        self._faces = frozenset(faces)
        self._vertices = frozenset(v for f in faces if len(f) == 1 for v in f)

    @classmethod
    def _from_faces(cls, faces: Iterable[frozenset]) -> "SimplicialComplex":
        # faces must already be downward closed
        obj = cls.__new__(cls)
        obj._faces = frozenset(faces)
        obj._vertices = frozenset(v for f in obj._faces if len(f) == 1 for v in f)
        return obj

    # -- basic structure -------------------------------------------------
    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def faces(self) -> frozenset:
        return self._faces

    def __contains__(self, simplex) -> bool:
        s = frozenset(simplex)
        return not s or s in self._faces

    def __len__(self) -> int:
        return len(self._faces)

    def __iter__(self):
        return iter(sorted(self._faces, key=simplex_key))

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._faces == other._faces

    def __hash__(self) -> int:
        return hash(self._faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"

    def is_empty(self) -> bool:
        return not self._faces

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self._faces), default=0) - 1

    def simplices(self, dim: int) -> list[frozenset]:
        return sorted((f for f in self._faces if len(f) == dim + 1), key=simplex_key)

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dimension + 1)
        for f in self._faces:
            counts[len(f) - 1] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(f) - 1) for f in self._faces)

    def maximal_simplices(self) -> list[frozenset]:
        by_size = sorted(self._faces, key=len, reverse=True)
        maximal: list[frozenset] = []
        for f in by_size:
            if not any(f < m for m in maximal):
                maximal.append(f)
        return sorted(maximal, key=simplex_key)

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self._vertices}
        for f in self._faces:
            if len(f) == 2:
                a, b = tuple(f)
                adj[a].add(b)
                adj[b].add(a)
        return {v: frozenset(n) for v, n in adj.items()}

    # -- constructions -----------------------------------------------------
    def induced(self, vertices: Iterable) -> "SimplicialComplex":
        """Full subcomplex spanned by `vertices`."""
        keep = frozenset(vertices)
        return SimplicialComplex._from_faces(f for f in self._faces if f <= keep)

    def link(self, simplex: Iterable = ()) -> "SimplicialComplex":
        return link_of_simplex(self, simplex)

    def one_skeleton(self) -> "SimplicialComplex":
        return SimplicialComplex._from_faces(f for f in self._faces if len(f) <= 2)

    def flag_completion(self) -> "SimplicialComplex":
        """Clique complex of the 1-skeleton."""
        adj = self.adjacency
        order = {v: i for i, v in enumerate(sort_vertices(self._vertices))}
        faces = set()
        frontier = [frozenset((v,)) for v in self._vertices]
        while frontier:
            faces.update(frontier)
            nxt = []
            for c in frontier:
                top = max(order[v] for v in c)
                common = reduce(frozenset.intersection, (adj[v] for v in c))
                nxt.extend(c | {u} for u in common if order[u] > top)
            frontier = nxt
        return SimplicialComplex._from_faces(faces)

    def non_flag_witness(self) -> frozenset | None:
        """A clique of the 1-skeleton that does not span a simplex, if any."""
        adj = self.adjacency

        def violations(faces):
            for f in faces:
                if len(f) < 2:
                    continue
                common = reduce(frozenset.intersection, (adj[v] for v in f))
                for u in common:
                    if (f | {u}) not in self._faces:
                        yield f | {u}

        # cheap unordered scan first; sort only to pick a canonical witness
        if next(violations(self._faces), None) is None:
            return None
        return min(violations(self._faces), key=simplex_key)

    def is_flag(self) -> bool:
        return self.non_flag_witness() is None

    def components(self) -> list[list]:
        """Connected components of the 1-skeleton, canonically ordered."""
        adj = self.adjacency
        seen: set = set()
        comps = []
        for v in sort_vertices(self._vertices):
            if v in seen:
                continue
            comp = [v]
            seen.add(v)
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sort_vertices(comp))
        return comps

    def is_connected(self) -> bool:
        return bool(self._vertices) and len(self.components()) == 1

    def to_json(self) -> list[list[str]]:
        return [[str(v) for v in sort_vertices(m)] for m in self.maximal_simplices()]


def join(*complexes: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join of complexes on pairwise disjoint vertex sets."""
    seen: set = set()
    for c in complexes:
        if seen & c.vertices:
            raise ValueError("join factors must have disjoint vertex sets")
        seen |= c.vertices
    faces: set[frozenset] = {frozenset()}
    for c in complexes:
        faces = {f | g for f in faces for g in (c.faces | {frozenset()})}
    faces.discard(frozenset())
    return SimplicialComplex._from_faces(faces)


def discrete(vertices: Iterable) -> SimplicialComplex:
    return SimplicialComplex(vertices=vertices)


def graph_complex(edges: Iterable[tuple], vertices: Iterable = ()) -> SimplicialComplex:
    return SimplicialComplex(edges, vertices)


def link_of_simplex(L: SimplicialComplex, simplex: Iterable = ()) -> SimplicialComplex:
    """Lk_L(s) = {t in L : t and s disjoint, t | s in L}.  The empty simplex gives L."""
    s = frozenset(simplex)
    if not s:
        return L
    if s not in L.faces:
        raise ValueError(f"{sort_vertices(s)} is not a simplex of the complex")
    return SimplicialComplex._from_faces(f - s for f in L.faces if s < f)


def is_full_subcomplex(M: SimplicialComplex, N: SimplicialComplex) -> bool:
    """M is a subcomplex of N containing every simplex of N spanned by its vertices."""
    return M.faces <= N.faces and N.induced(M.vertices).faces == M.faces


# ---------------------------------------------------------------------------
# joins

def _complement_components(L: SimplicialComplex) -> list[list]:
    adj = L.adjacency
    verts = sort_vertices(L.vertices)
    remaining = set(verts)
    parts = []
    for v in verts:
        if v not in remaining:
            continue
        remaining.discard(v)
        part = [v]
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in [w for w in remaining if w not in adj[u]]:
                remaining.discard(w)
                part.append(w)
                queue.append(w)
        parts.append(sort_vertices(part))
    return parts


def _splits_as_join(L: SimplicialComplex, groups: list[frozenset]) -> bool:
    # L always sits inside the join of its restrictions; equality is a count
    total = 1
    for g in groups:
        total *= sum(1 for f in L.faces if f <= g) + 1
    return total == len(L.faces) + 1


def join_decompose(L: SimplicialComplex, max_parts: int = 14) -> list[SimplicialComplex]:
    """Finest partition of the vertices exhibiting L as a join of full subcomplexes.

    Vertices that are not adjacent must share a factor, so the components of
    the complement of the 1-skeleton refine every join decomposition; valid
    decompositions are closed under common refinement, so the finest one is
    the meet of all valid two-block splits.
    """
    if L.is_empty():
        return [L]
    parts = [frozenset(p) for p in _complement_components(L)]
    if len(parts) == 1:
        return [L]
    if _splits_as_join(L, parts):
        return [L.induced(p) for p in parts]
    if len(parts) > max_parts:
        return [L]
    everything = frozenset().union(*parts)
    valid_splits = []
    rest = parts[1:]
    for r in range(0, len(rest)):
        for chosen in combinations(range(len(rest)), r):
            side = parts[0].union(*(rest[i] for i in chosen))
            if _splits_as_join(L, [side, everything - side]):
                valid_splits.append(side)
    if not valid_splits:
        return [L]
    blocks: dict[tuple, frozenset] = {}
    for p in parts:
        sig = tuple(p <= s for s in valid_splits)
        blocks[sig] = blocks.get(sig, frozenset()) | p
    groups = sorted(blocks.values(), key=lambda g: vertex_key(sort_vertices(g)[0]))
    return [L.induced(g) for g in groups]


# ---------------------------------------------------------------------------
# integer homology in degree one

def smith_invariants(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix (rows as {col: value}).

    Exact unimodular row/column elimination with Python integers, followed by
    the gcd/lcm normalisation of the diagonal.
    """
    a = {i: {c: v for c, v in r.items() if v} for i, r in enumerate(rows)}
    a = {i: r for i, r in a.items() if r}
    cols: dict[int, set[int]] = {}
    for i, r in a.items():
        for c in r:
            cols.setdefault(c, set()).add(i)

    def set_entry(i, c, v):
        if v:
            a[i][c] = v
            cols.setdefault(c, set()).add(i)
        else:
            a[i].pop(c, None)
            s = cols.get(c)
            if s is not None:
                s.discard(i)
                if not s:
                    del cols[c]

    diagonal = []
    while a:
        r, c = min(((i, cc) for i, row in a.items() for cc in row),
                   key=lambda ic: (abs(a[ic[0]][ic[1]]), ic))
        while True:
            v = a[r][c]
            changed = False
            for r2 in sorted(cols[c] - {r}):
                q = a[r2][c] // v
                for cc, val in list(a[r].items()):
                    set_entry(r2, cc, a[r2].get(cc, 0) - q * val)
                if a[r2].get(c, 0):
                    changed = True
                if not a[r2]:
                    del a[r2]
            for c2 in sorted(set(a[r]) - {c}):
                q = a[r][c2] // v
                for i in list(cols[c]):
                    set_entry(i, c2, a[i].get(c2, 0) - q * a[i][c])
                if a[r].get(c2, 0):
                    changed = True
            if not changed:
                break
            r, c = min(([(r, cc) for cc in a[r]] + [(i, c) for i in cols.get(c, ())]),
                       key=lambda ic: (abs(a[ic[0]][ic[1]]), ic))
        diagonal.append(abs(a[r][c]))
        set_entry(r, c, 0)
        del a[r]
    # normalise to invariant factors d1 | d2 | ...
    d = sorted(diagonal)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


@dataclass(frozen=True)
class H1Group:
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def vanishes(self) -> bool:
        return self.rank == 0 and not self.torsion


def h1(L: SimplicialComplex) -> H1Group:
    """First integral homology of a complex of dimension at most two."""
    if L.dimension > 2:
        raise ValueError("h1 expects a complex of dimension at most 2")
    edges = L.simplices(1)
    if not edges:
        return H1Group(0)
    index = {e: i for i, e in enumerate(edges)}
    rows: list[dict[int, int]] = [dict() for _ in edges]
    for j, t in enumerate(L.simplices(2)):
        v0, v1, v2 = sort_vertices(t)
        for face, sign in ((frozenset((v1, v2)), 1), (frozenset((v0, v2)), -1),
                           (frozenset((v0, v1)), 1)):
            rows[index[face]][j] = sign
    inv = smith_invariants(rows)
    rank_d1 = len(L.vertices) - len(L.components())
    rank = len(edges) - rank_d1 - len(inv)
    return H1Group(rank, tuple(x for x in inv if x > 1))


def h1_rank(L: SimplicialComplex) -> int:
    return h1(L).rank


# ---------------------------------------------------------------------------
# connectivity verdicts

class Level(IntEnum):
    EMPTY = -2
    NONEMPTY = -1
    CONNECTED = 0
    SIMPLY_CONNECTED = 1


@dataclass(frozen=True)
class ConnectivityVerdict:
    """`level` is a certified lower bound; `exact` says it is also an upper bound
    (up to the requested target).  `acyclic_level` is the homological analogue."""

    level: Level
    method: str
    exact: bool
    acyclic_level: Level
    evidence: dict = field(default_factory=dict)

    def meets(self, target: int) -> bool:
        return self.level >= target

    def refutes(self, target: int) -> bool:
        return self.exact and self.level < target

    def acyclic_meets(self, target: int) -> bool:
        return self.acyclic_level >= target

    @property
    def acyclic_only(self) -> bool:
        return self.acyclic_level > self.level and not self.exact


def join_connectivity_bound(L: SimplicialComplex) -> tuple[float, list[SimplicialComplex]]:
    """Lower bound on connectivity from conn(X * Y) >= conn(X) + conn(Y) + 2."""
    if L.is_empty():
        return -2, [L]
    factors = join_decompose(L)
    total = 0.0
    for f in factors:
        if len(f.vertices) == 1:
            return math.inf, factors
        total += (0 if f.is_connected() else -1) + 2
    return total - 2, factors


def connectivity(L: SimplicialComplex, target: int = 1) -> ConnectivityVerdict:
    """Certify connectivity of L up to `target` (-1, 0 or 1)."""
    if target > 1:
        raise ValueError("connectivity targets above 1 are not supported")
    if L.is_empty():
        return ConnectivityVerdict(Level.EMPTY, "bfs", True, Level.EMPTY)
    if target <= -1:
        return ConnectivityVerdict(Level.NONEMPTY, "bfs", False, Level.NONEMPTY)
    comps = L.components()
    if len(comps) > 1:
        ev = {"components": [[str(v) for v in c] for c in comps]}
        return ConnectivityVerdict(Level.NONEMPTY, "bfs", True, Level.NONEMPTY, ev)
    if target <= 0:
        return ConnectivityVerdict(Level.CONNECTED, "bfs", False, Level.CONNECTED)
    bound, factors = join_connectivity_bound(L)
    if bound >= 1:
        ev = {"join_factors": [len(f.vertices) for f in factors]}
        return ConnectivityVerdict(Level.SIMPLY_CONNECTED, "join_criterion", False,
                                   Level.SIMPLY_CONNECTED, ev)
    group = h1(L)
    ev = {"h1_rank": group.rank, "h1_torsion": list(group.torsion)}
    if group.vanishes:
        # no join certificate: homologically 1-acyclic, homotopically undecided
        return ConnectivityVerdict(Level.CONNECTED, "h1_plus_join", False,
                                   Level.SIMPLY_CONNECTED, ev)
    return ConnectivityVerdict(Level.CONNECTED, "h1_plus_join", True, Level.CONNECTED, ev)
