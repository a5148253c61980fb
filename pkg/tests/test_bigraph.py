import json
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubemorse.bigraph import (BlockId, ModularSpec, MorseGraph, backends_agree,
                               build_modular_spec, complete_bipartite_blocks, load_graph_file,
                               parse_vertex, random_modular_spec, realize, smallest_sizeable_prime,
                               template_edges, vertex_name, verify_morse_suited, verify_sizeable)
from cubemorse.verdicts import FAIL, PASS, InputError


def test_block_ids_and_names():
    b = BlockId.parse("A2-")
    assert (b.side, b.index, b.sign_value) == ("A", 2, -1)
    assert str(b) == "A2-"
    assert parse_vertex(vertex_name(b, 7)) == (b, 7)
    assert len(template_edges(3)) == 36
    with pytest.raises(ValueError):
        BlockId.parse("C1+")


def test_template_order_is_lexicographic_minus_first():
    edges = template_edges(1)
    assert [f"{a}|{b}" for a, b in edges] == ["A1-|B1-", "A1-|B1+", "A1+|B1-", "A1+|B1+"]


def test_construction_prime_n1():
    spec = build_modular_spec(1)
    assert spec.modulus == 397
    assert spec.is_two_residue_regular()
    assert verify_sizeable(spec, "explicit").passed
    assert verify_sizeable(spec, "arithmetic").passed


@pytest.mark.parametrize("n", [2, 3])
def test_construction_arithmetic_is_fast(n):
    t = time.perf_counter()
    spec = build_modular_spec(n)
    rep = verify_sizeable(spec, "arithmetic")
    assert rep.passed
    assert time.perf_counter() - t < 1.0
    assert spec.vertex_count > 10**6


def test_explicit_backend_respects_budget():
    from cubemorse.verdicts import BudgetExceeded
    with pytest.raises(BudgetExceeded):
        verify_sizeable(build_modular_spec(2), "explicit")


def test_overlapping_blocks_fail_morse_suited():
    g = complete_bipartite_blocks({"A1+": ["a", "x"], "A1-": ["x"]},
                                  {"B1+": ["b"], "B1-": ["c"]}, [("a", "b")])
    v = verify_morse_suited(g)
    assert v.status == FAIL and v.witness["vertex"] == "x"


def test_empty_block_fails_morse_suited():
    g = complete_bipartite_blocks({"A1+": ["a"], "A1-": ["a2"]}, {"B1+": ["b"]}, [])
    assert verify_morse_suited(g).witness == {"empty_block": "B1-"}


def test_edge_must_cross_sides():
    with pytest.raises(ValueError):
        complete_bipartite_blocks({"A1+": ["a", "a2"]}, {"B1+": ["b"]}, [("a", "a2")])


def test_four_cycle_witness_is_a_cycle():
    spec = ModularSpec(1, 5, {e: {0} for e in template_edges(1)})
    rep = verify_sizeable(spec, "explicit")
    a1, b1, a2, b2 = rep.four_cycle_free.witness
    g = realize(spec)
    assert all(g.has_edge(a, b) for a, b in [(a1, b1), (a2, b1), (a2, b2), (a1, b2)])
    assert len({a1, a2, b1, b2}) == 4


def test_zero_spec_fails_both_backends_with_matching_spans():
    spec = ModularSpec(2, 5, {e: {0} for e in template_edges(2)})
    ok, ex, ar = backends_agree(spec)
    assert ok and ex.status == ar.status == FAIL
    assert ex.failing_spans() == ar.failing_spans() == list(template_edges(2))
    assert ex.span_connectivity[template_edges(2)[0]].witness["components"] == 5


def test_construction_at_p5_has_four_cycle():
    spec = build_modular_spec(1, 5)
    rep = verify_sizeable(spec, "arithmetic")
    assert rep.four_cycle_free.status == FAIL
    assert smallest_sizeable_prime(1) == 19


def test_sizeable_graph_neighbours_in_every_block():
    g = realize(build_modular_spec(1, 19))
    assert verify_sizeable(g).passed
    for a in g.A:
        blocks = {g.block_of[b] for b in g.adjacency[a]}
        assert blocks == {BlockId.parse("B1+"), BlockId.parse("B1-")}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([5, 7, 11, 13]))
def test_translation_is_an_automorphism(seed, p):
    spec = random_modular_spec(1, p, random.Random(seed))
    g = realize(spec)

    def shift(v):
        b, k = parse_vertex(v)
        return vertex_name(b, (k + 1) % p)

    assert {(shift(a), shift(b)) for a, b in g.edges} == set(g.edges)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7, 11]), st.integers(1, 2))
def test_backends_agree_random(seed, p, n):
    spec = random_modular_spec(n, p, random.Random(seed))
    ok, ex, ar = backends_agree(spec)
    assert ok, (ex.to_json(), ar.to_json())


def test_spec_json_roundtrip(tmp_path):
    spec = build_modular_spec(1, 19)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec.to_json()))
    again = load_graph_file(path)
    assert again == spec
    g = realize(spec)
    path.write_text(json.dumps(g.to_json()))
    assert load_graph_file(path) == g


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "rank": 1,\n  oops\n}')
    with pytest.raises(InputError, match="line 3 column 3"):
        load_graph_file(path)


def test_modular_spec_validation():
    with pytest.raises(ValueError):
        ModularSpec(1, 6, {e: {0} for e in template_edges(1)})
    with pytest.raises(ValueError):
        ModularSpec(1, 5, {template_edges(1)[0]: {0}})


def test_morse_graph_json():
    g = MorseGraph.from_json(realize(build_modular_spec(1, 5)).to_json())
    assert len(g.edges) == 40 and len(g.A) == 10
