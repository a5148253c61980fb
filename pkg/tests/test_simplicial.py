import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubemorse.simplicial import (Level, SimplicialComplex, connectivity, discrete,
                                  graph_complex, h1, h1_rank, is_full_subcomplex, join,
                                  join_decompose, link_of_simplex, smith_invariants)


def octahedron():
    return join(discrete("ab"), discrete("cd"), discrete("ef"))


def cycle(k):
    return graph_complex([(i, (i + 1) % k) for i in range(k)])


def random_complex(rng, nverts=7, nsimp=8, maxdim=3):
    vs = list(range(nverts))
    return SimplicialComplex([rng.sample(vs, rng.randint(1, min(maxdim, nverts))) for _ in range(nsimp)])


complexes = st.builds(
    lambda seed, nv, ns: random_complex(random.Random(seed), nv, ns),
    st.integers(0, 10**6), st.integers(2, 8), st.integers(1, 10))
graphs = st.builds(
    lambda seed, nv, ns: random_complex(random.Random(seed), nv, ns, maxdim=2),
    st.integers(0, 10**6), st.integers(2, 7), st.integers(1, 12))


def test_faces_closed_downward():
    L = SimplicialComplex([("a", "b", "c")])
    assert L.f_vector() == (3, 3, 1)
    assert frozenset("ab") in L
    assert L.euler_characteristic() == 1


def test_octahedron_basics():
    L = octahedron()
    assert L.f_vector() == (6, 12, 8)
    assert L.euler_characteristic() == 2
    assert L.is_flag()
    assert sorted(len(f.vertices) for f in join_decompose(L)) == [2, 2, 2]


def test_path_is_cone_and_p4_is_not_a_join():
    # a-b-c is the join of {b} with {a, c}
    assert len(join_decompose(graph_complex([("a", "b"), ("b", "c")]))) == 2
    p4 = graph_complex([("a", "b"), ("b", "c"), ("c", "d")])
    assert len(join_decompose(p4)) == 1


def test_join_decompose_refactors_to_original():
    L = join(cycle(5), discrete("xyz"))
    parts = join_decompose(L)
    assert len(parts) == 2
    assert join(*parts) == L
    for f in parts:
        assert len(join_decompose(f)) == 1


def test_link_of_simplex_in_join():
    X, Y = cycle(4), discrete("pq")
    L = join(X, Y)
    assert link_of_simplex(L, {0}) == join(link_of_simplex(X, {0}), Y)
    assert link_of_simplex(L, ()) == L
    assert link_of_simplex(L, {0, 1, "p"}).is_empty()
    with pytest.raises(ValueError):
        link_of_simplex(L, {0, 2})


def test_non_flag_detection():
    hollow = graph_complex([(1, 2), (2, 3), (1, 3)])
    assert not hollow.is_flag()
    assert hollow.non_flag_witness() == frozenset({1, 2, 3})
    oct_minus = SimplicialComplex([s for s in octahedron().maximal_simplices()
                                   if s != frozenset("ace")])
    assert oct_minus.non_flag_witness() == frozenset("ace")
    assert oct_minus.flag_completion() == octahedron()


def test_full_subcomplex():
    L = octahedron()
    assert is_full_subcomplex(L.induced("abc"), L)
    assert not is_full_subcomplex(discrete("ac"), L)


def test_smith_and_h1():
    assert smith_invariants([{0: 2}, {1: 3}]) == [1, 6]
    assert h1_rank(cycle(6)) == 1
    assert h1(octahedron()).vanishes
    # hollow triangle plus filled triangle sharing an edge: still one loop
    L = SimplicialComplex([(1, 2, 3), (2, 3, 4), (4, 1)])
    assert h1_rank(L) == 1


def test_rp2_torsion():
    # six-vertex triangulation of the projective plane
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    g = h1(SimplicialComplex(tris))
    assert g.rank == 0 and list(g.torsion) == [2]
    assert not g.vanishes


@pytest.mark.parametrize("L,level,method", [
    (SimplicialComplex(), Level.EMPTY, "bfs"),
    (discrete("ab"), Level.NONEMPTY, "bfs"),
    (octahedron(), Level.SIMPLY_CONNECTED, "join_criterion"),
    (cycle(5), Level.CONNECTED, "h1_plus_join"),
    (join(discrete("a"), cycle(5)), Level.SIMPLY_CONNECTED, "join_criterion"),
])
def test_connectivity_levels(L, level, method):
    v = connectivity(L, 1)
    assert v.level == level and v.method == method


def test_acyclic_only_is_not_simply_connected():
    # a strip of four triangles: contractible, but no cone point and no join
    L = SimplicialComplex([(1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6)])
    v = connectivity(L, 1)
    assert v.method == "h1_plus_join"
    assert v.level == Level.CONNECTED
    assert v.acyclic_level == Level.SIMPLY_CONNECTED and v.acyclic_only
    assert not v.refutes(1)


def test_disconnected_is_exact_refutation():
    v = connectivity(discrete("abc"), 0)
    assert v.refutes(0) and len(v.evidence["components"]) == 3


@settings(max_examples=150, deadline=None)
@given(complexes, st.data())
def test_link_composition_law(L, data):
    top = data.draw(st.sampled_from(sorted(L.maximal_simplices(), key=sorted)))
    items = sorted(top)
    cut = data.draw(st.integers(0, len(items)))
    sigma, tau = frozenset(items[:cut]), frozenset(items[cut:])
    assert link_of_simplex(L, sigma | tau) == link_of_simplex(link_of_simplex(L, sigma), tau)


@settings(max_examples=150, deadline=None)
@given(graphs, st.integers(1, 4), st.integers(0, 3))
def test_join_criterion_implies_h1_zero(X, k, cone):
    # links are at most 2-dimensional: join a graph with a discrete set
    Y = discrete([("y", i) for i in range(k)])
    for L in (X, join(X, Y), join(X.induced(list(X.vertices)[:cone]) or X, Y)):
        v = connectivity(L, 1)
        if v.method == "join_criterion":
            assert h1_rank(L) == 0 and h1(L).vanishes


@settings(max_examples=100, deadline=None)
@given(complexes)
def test_join_decompose_idempotent(L):
    parts = join_decompose(L)
    assert join(*parts) == L
    assert all(len(join_decompose(p)) == 1 for p in parts)
