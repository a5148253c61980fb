"""Bipartite n-Morse-suited graphs, modular graphs and sizeability checks.

Vertices of realized graphs are named ``"A1+:k"`` / ``"B2-:l"``: the block
name followed by a residue.  Blocks are ordered A1- < A1+ < A2- < ... and the
template edges of a modular spec are ordered lexicographically on
(A-block, B-block).
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping

from sympy import isprime, nextprime

from .simplicial import sort_vertices, vertex_key
from .verdicts import (DEFAULT_VERTEX_BUDGET, FAIL, PASS, BudgetExceeded,
                       InputError, Verdict, resolve_budget, worst)

SIGNS = ("-", "+")


@dataclass(frozen=True)
class BlockId:
    side: str
    index: int
    sign: str

    def __post_init__(self):
        if self.side not in ("A", "B") or self.sign not in SIGNS or self.index < 1:
            raise ValueError(f"bad block id {self.side}{self.index}{self.sign}")

    @property
    def sort_key(self) -> tuple:
        return (self.side, self.index, SIGNS.index(self.sign))

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def sign_value(self) -> int:
        return 1 if self.sign == "+" else -1

    def __str__(self) -> str:
        return f"{self.side}{self.index}{self.sign}"

    @classmethod
    def parse(cls, text: str) -> "BlockId":
        text = text.strip()
        if len(text) < 3 or text[0] not in "AB" or text[-1] not in SIGNS:
            raise InputError(f"cannot parse block name {text!r}")
        try:
            return cls(text[0], int(text[1:-1]), text[-1])
        except ValueError:
            raise InputError(f"cannot parse block name {text!r}") from None


def blocks_of_rank(n: int, side: str) -> list[BlockId]:
    return [BlockId(side, i, s) for i in range(1, n + 1) for s in SIGNS]


def template_edges(n: int) -> list[tuple[BlockId, BlockId]]:
    """The (2n)^2 edges of the complete bipartite block template, in fixed order."""
    return [(a, b) for a in blocks_of_rank(n, "A") for b in blocks_of_rank(n, "B")]


def vertex_name(block: BlockId, k: int) -> str:
    return f"{block}:{k}"


def parse_vertex(name: str) -> tuple[BlockId, int]:
    head, sep, tail = name.partition(":")
    if not sep:
        raise InputError(f"vertex {name!r} is not of the form 'A1+:k'")
    return BlockId.parse(head), int(tail)


# ---------------------------------------------------------------------------
# explicit graphs

@dataclass(frozen=True)
class MorseGraph:
    """A bipartite graph on A ⊔ B together with its sign-indexed blocks.

    Only bipartiteness is enforced here; the block axioms are checked by
    :func:`verify_morse_suited` so that broken inputs can still be reported on.
    """

    rank: int
    blocks: Mapping[BlockId, frozenset]
    edges: frozenset

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        blocks = {b: frozenset(vs) for b, vs in self.blocks.items()}
        for b in blocks:
            if b.index > self.rank:
                raise ValueError(f"block {b} exceeds rank {self.rank}")
        object.__setattr__(self, "blocks", blocks)
        A = frozenset().union(*(vs for b, vs in blocks.items() if b.side == "A"))
        B = frozenset().union(*(vs for b, vs in blocks.items() if b.side == "B"))
        if A & B:
            raise ValueError(f"vertices on both sides: {sort_vertices(A & B)[:3]}")
        edges = set()
        for e in self.edges:
            u, v = tuple(e)
            if u in B and v in A:
                u, v = v, u
            if u not in A or v not in B:
                raise ValueError(f"edge {u}-{v} does not join side A to side B")
            edges.add((u, v))
        object.__setattr__(self, "edges", frozenset(edges))

    @cached_property
    def A(self) -> tuple:
        return tuple(sort_vertices(set().union(*(vs for b, vs in self.blocks.items()
                                                 if b.side == "A"))))

    @cached_property
    def B(self) -> tuple:
        return tuple(sort_vertices(set().union(*(vs for b, vs in self.blocks.items()
                                                 if b.side == "B"))))

    @cached_property
    def _side(self) -> dict:
        return {**{a: "A" for a in self.A}, **{b: "B" for b in self.B}}

    def side(self, v) -> str:
        return self._side[v]

    @cached_property
    def block_of(self) -> dict:
        """Vertex -> its (first, in block order) block."""
        out: dict = {}
        for b in sorted(self.blocks):
            for v in self.blocks[b]:
                out.setdefault(v, b)
        return out

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.A + self.B}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(n) for v, n in adj.items()}

    def has_edge(self, u, v) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def degree(self, v) -> int:
        return len(self.adjacency[v])

    def sorted_edges(self) -> list[tuple]:
        return sorted(self.edges, key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))

    def block_sizes(self) -> dict:
        return {b: len(vs) for b, vs in self.blocks.items()}

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "blocks": {str(b): sort_vertices(self.blocks[b]) for b in sorted(self.blocks)},
            "edges": [[a, b] for a, b in self.sorted_edges()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MorseGraph":
        try:
            blocks = {BlockId.parse(k): frozenset(v) for k, v in data["blocks"].items()}
            return cls(int(data["rank"]), blocks, frozenset(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graph: {exc}") from exc


def complete_bipartite_blocks(a_blocks: Mapping[str, Iterable], b_blocks: Mapping[str, Iterable],
                              edges: Iterable[tuple], rank: int = 1) -> MorseGraph:
    """Convenience constructor from plain block-name mappings."""
    blocks = {BlockId.parse(k): frozenset(v) for k, v in {**a_blocks, **b_blocks}.items()}
    return MorseGraph(rank, blocks, frozenset(edges))


# ---------------------------------------------------------------------------
# modular specs

@dataclass(frozen=True)
class ModularSpec:
    """Residue data of a modular graph: σ(e) ⊂ Z/p for each template edge e."""

    rank: int
    modulus: int
    sigma: Mapping[tuple[BlockId, BlockId], frozenset]
    edge_order: tuple = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if not isprime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        p = self.modulus
        order = tuple(self.edge_order) or tuple(template_edges(self.rank))
        if set(order) != set(template_edges(self.rank)) or len(order) != (2 * self.rank) ** 2:
            raise ValueError("edge order must list every template edge once")
        sigma = {}
        for e in order:
            if e not in self.sigma:
                raise ValueError(f"no residues for template edge {e[0]}|{e[1]}")
            sigma[e] = frozenset(int(r) % p for r in self.sigma[e])
        if set(self.sigma) - set(order):
            raise ValueError("residues given for an unknown block pair")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "edge_order", order)

    def residues(self, a: BlockId, b: BlockId) -> frozenset:
        return self.sigma[(a, b)]

    def is_edge(self, a: BlockId, k: int, b: BlockId, l: int) -> bool:
        """O(1) adjacency oracle: a(k) ~ b(l) iff l - k mod p lies in σ(a, b)."""
        return (l - k) % self.modulus in self.sigma[(a, b)]

    def adjacent(self, u: str, v: str) -> bool:
        (bu, k), (bv, l) = parse_vertex(u), parse_vertex(v)
        if bu.side == "B":
            (bu, k), (bv, l) = (bv, l), (bu, k)
        if bu.side != "A" or bv.side != "B":
            return False
        return self.is_edge(bu, k, bv, l)

    @property
    def vertex_count(self) -> int:
        return 4 * self.rank * self.modulus

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.sigma.values()) * self.modulus

    def is_two_residue_regular(self) -> bool:
        """Every block pair carries exactly two distinct residues."""
        return all(len(r) == 2 for r in self.sigma.values())

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "modulus": self.modulus,
            "edge_order": [f"{a}|{b}" for a, b in self.edge_order],
            "sigma": {f"{a}|{b}": sorted(self.sigma[(a, b)]) for a, b in self.edge_order},
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModularSpec":
        try:
            n, p = int(data["rank"]), int(data["modulus"])
            sigma = {}
            for key, res in data["sigma"].items():
                a, b = key.split("|")
                sigma[(BlockId.parse(a), BlockId.parse(b))] = res
            order = tuple(tuple(BlockId.parse(x) for x in key.split("|"))
                          for key in data.get("edge_order", ()))
            return cls(n, p, sigma, order)
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise InputError(f"malformed modular spec: {exc}") from exc


def construction_sigma(n: int) -> tuple[list[tuple[BlockId, BlockId]], dict, list[int]]:
    """Integer residue sets of the doubling construction, before reduction.

    σ(e1) = {0, 1}; m_i is the sum of all elements of earlier σ(e_j) and
    σ(e_i) = {2 m_i, 4 m_i}.  Returns (edge order, σ, [m_1, ..., m_N]).
    """
    if n < 1:
        raise ValueError("rank must be at least 1")
    order = template_edges(n)
    sigma: dict = {}
    ms = [0]
    running = 0
    for i, e in enumerate(order):
        if i == 0:
            sigma[e] = (0, 1)
        else:
            ms.append(running)
            sigma[e] = (2 * running, 4 * running)
        running += sum(sigma[e])
    return order, sigma, ms


def build_modular_spec(n: int, p_override: int | None = None) -> ModularSpec:
    """The sizeable modular graph of rank n; p defaults to the least prime > 8 m_last."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    order, sigma, ms = construction_sigma(n)
    if p_override is None:
        p = int(nextprime(8 * ms[-1]))
    else:
        if not isprime(p_override):
            raise ValueError(f"{p_override} is not prime")
        p = int(p_override)
    return ModularSpec(n, p, sigma, tuple(order))


def random_modular_spec(n: int, p: int, rng: random.Random, sizes=(1, 2, 3)) -> ModularSpec:
    sigma = {e: rng.sample(range(p), min(rng.choice(sizes), p)) for e in template_edges(n)}
    return ModularSpec(n, p, sigma)


def realize(spec: ModularSpec, budget: int | None = None) -> MorseGraph:
    """Explicit graph of a modular spec: blocks are copies of Z/p."""
    budget = resolve_budget(budget, DEFAULT_VERTEX_BUDGET)
    if spec.vertex_count > budget:
        raise BudgetExceeded("modular graph vertices", spec.vertex_count, budget)
    p = spec.modulus
    blocks = {b: frozenset(vertex_name(b, k) for k in range(p))
              for side in "AB" for b in blocks_of_rank(spec.rank, side)}
    edges = set()
    for (a, b), res in spec.sigma.items():
        for k in range(p):
            for r in res:
                edges.add((vertex_name(a, k), vertex_name(b, (k + r) % p)))
    return MorseGraph(spec.rank, blocks, frozenset(edges))


# ---------------------------------------------------------------------------
# verification

@dataclass(frozen=True)
class SizeabilityReport:
    backend: str
    morse_suited: Verdict
    four_cycle_free: Verdict
    span_connectivity: Mapping[tuple[BlockId, BlockId], Verdict] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return worst([self.morse_suited.status, self.four_cycle_free.status,
                      *(v.status for v in self.span_connectivity.values())])

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def failing_spans(self) -> list[tuple[BlockId, BlockId]]:
        return [e for e, v in self.span_connectivity.items() if v.status == FAIL]

    def to_json(self) -> dict:
        return {
            "backend": self.backend,
            "status": self.status,
            "morse_suited": self.morse_suited.to_json(),
            "four_cycle_free": self.four_cycle_free.to_json(),
            "span_connectivity": {f"{a}|{b}": v.to_json()
                                  for (a, b), v in sorted(self.span_connectivity.items())},
        }


def verify_morse_suited(graph: MorseGraph) -> Verdict:
    """Blocks nonempty, pairwise disjoint on each side, and covering that side."""
    n = graph.rank
    for side in "AB":
        names = blocks_of_rank(n, side)
        for b in names:
            if not graph.blocks.get(b):
                return Verdict(FAIL, f"block {b} is empty", {"empty_block": str(b)})
        for b1, b2 in combinations(names, 2):
            common = graph.blocks[b1] & graph.blocks[b2]
            if common:
                return Verdict(FAIL, f"blocks {b1} and {b2} overlap",
                               {"blocks": [str(b1), str(b2)],
                                "vertex": sort_vertices(common)[0]})
    return Verdict(PASS)


def _four_cycle_explicit(graph: MorseGraph) -> Verdict:
    # two A-vertices with two common neighbours span a 4-cycle
    first_common: dict = {}
    for b in graph.B:
        nbrs = sort_vertices(graph.adjacency[b])
        for a1, a2 in combinations(nbrs, 2):
            seen = first_common.get((a1, a2))
            if seen is None:
                first_common[(a1, a2)] = b
            else:
                return Verdict(FAIL, "embedded 4-cycle", [a1, seen, a2, b])
    return Verdict(PASS)


def _span_explicit(graph: MorseGraph, a: BlockId, b: BlockId) -> Verdict:
    verts = graph.blocks.get(a, frozenset()) | graph.blocks.get(b, frozenset())
    if not verts:
        return Verdict(FAIL, "span is empty", {"component": [], "components": 0})
    start = sort_vertices(verts)[0]
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in graph.adjacency[u]:
            if w in verts and w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) == len(verts):
        return Verdict(PASS)
    ncomp = _count_components(graph, verts)
    return Verdict(FAIL, "span is disconnected",
                   {"component": sort_vertices(seen), "components": ncomp})


def _count_components(graph: MorseGraph, verts: frozenset) -> int:
    seen: set = set()
    count = 0
    for v in verts:
        if v in seen:
            continue
        count += 1
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in graph.adjacency[u]:
                if w in verts and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def _verify_explicit(graph: MorseGraph) -> SizeabilityReport:
    n = graph.rank
    spans = {(a, b): _span_explicit(graph, a, b)
             for a in blocks_of_rank(n, "A") for b in blocks_of_rank(n, "B")}
    return SizeabilityReport("explicit", verify_morse_suited(graph),
                             _four_cycle_explicit(graph), spans)


def _span_arithmetic(spec: ModularSpec, a: BlockId, b: BlockId) -> Verdict:
    # a(k) - b(k + r1) - a(k + r1 - r2) - ...: steps of r1 - r2 generate Z/p
    res = sorted(spec.sigma[(a, b)])
    p = spec.modulus
    if len(res) >= 2:
        cycle = 2 * p if len(res) == 2 else None
        return Verdict(PASS, evidence={"cycle_length": cycle} if cycle else {})
    if not res:
        return Verdict(FAIL, "no edges between the blocks",
                       {"component": [vertex_name(a, 0)], "components": 2 * p})
    r = res[0]
    return Verdict(FAIL, "span is a perfect matching",
                   {"component": [vertex_name(a, 0), vertex_name(b, r % p)], "components": p})


def _four_cycle_arithmetic(spec: ModularSpec) -> Verdict:
    """A 4-cycle a(k) b(l) a'(k') b'(l') exists iff r1 - r2 + r3 - r4 ≡ 0 (mod p)
    for residues r1 ∈ σ(a,b), r2 ∈ σ(a',b), r3 ∈ σ(a',b'), r4 ∈ σ(a,b') with
    a ≠ a' and b ≠ b' as vertices.  Cases follow which blocks coincide."""
    n, p, sig = spec.rank, spec.modulus, spec.sigma
    A, B = blocks_of_rank(n, "A"), blocks_of_rank(n, "B")
    for al, al2 in product(A, repeat=2):
        if al2 < al:
            continue
        for be, be2 in product(B, repeat=2):
            if al == al2 and be2 < be:
                continue
            for r1, r2, r3, r4 in product(sorted(sig[(al, be)]), sorted(sig[(al2, be)]),
                                          sorted(sig[(al2, be2)]), sorted(sig[(al, be2)])):
                if (r1 - r2 + r3 - r4) % p:
                    continue
                if al == al2 and r1 == r2:
                    continue
                if be == be2 and r1 == r4:
                    continue
                case = (1 if be == be2 else 2) if al == al2 else (3 if be == be2 else 4)
                witness = [vertex_name(al, 0), vertex_name(be, r1), vertex_name(al2, (r1 - r2) % p),
                           vertex_name(be2, r4)]
                return Verdict(FAIL, f"embedded 4-cycle (case {case})", witness,
                               {"case": case, "residues": [r1, r2, r3, r4]})
    return Verdict(PASS)


def _verify_arithmetic(spec: ModularSpec) -> SizeabilityReport:
    n = spec.rank
    spans = {(a, b): _span_arithmetic(spec, a, b)
             for a in blocks_of_rank(n, "A") for b in blocks_of_rank(n, "B")}
    return SizeabilityReport("arithmetic", Verdict(PASS, "blocks are copies of Z/p"),
                             _four_cycle_arithmetic(spec), spans)


def verify_sizeable(obj: MorseGraph | ModularSpec, backend: str = "explicit",
                    budget: int | None = None) -> SizeabilityReport:
    """Check n-Morse-suitedness, 4-cycle freeness and connectivity of block-pair spans.

    ``explicit`` works on a realized graph (a spec is realized within budget);
    ``arithmetic`` needs a :class:`ModularSpec` and never materializes the graph.
    """
    if backend == "explicit":
        graph = realize(obj, budget) if isinstance(obj, ModularSpec) else obj
        return _verify_explicit(graph)
    if backend == "arithmetic":
        if not isinstance(obj, ModularSpec):
            raise InputError("the arithmetic backend needs a modular spec")
        return _verify_arithmetic(obj)
    raise InputError(f"unknown backend {backend!r}")


def backends_agree(spec: ModularSpec, budget: int | None = None) -> tuple[bool, SizeabilityReport,
                                                                          SizeabilityReport]:
    ex = verify_sizeable(spec, "explicit", budget)
    ar = verify_sizeable(spec, "arithmetic")
    agree = (ex.status == ar.status
             and ex.four_cycle_free.status == ar.four_cycle_free.status
             and all(ex.span_connectivity[e].status == ar.span_connectivity[e].status
                     for e in ex.span_connectivity))
    return agree, ex, ar


def smallest_sizeable_prime(n: int, limit: int | None = None) -> int | None:
    """Least prime p for which the construction's residues, reduced mod p, are sizeable.

    Purely empirical; the construction only guarantees primes above 8 m_last.
    """
    order, sigma, ms = construction_sigma(n)
    stop = limit if limit is not None else int(nextprime(8 * ms[-1]))
    p = 2
    while p <= stop:
        if verify_sizeable(ModularSpec(n, p, sigma, tuple(order)), "arithmetic").passed:
            return p
        p = int(nextprime(p))
    return None


def load_graph_file(path) -> MorseGraph | ModularSpec:
    """Read either JSON layout (spec with ``modulus``/``sigma`` or explicit graph)."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "sigma" in data:
        return ModularSpec.from_json(data)
    if "edges" in data:
        return MorseGraph.from_json(data)
    raise InputError(f"{path}: neither a modular spec nor an explicit graph")
