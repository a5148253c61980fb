import json
from itertools import combinations, product

import pytest

from cubemorse.cover import (RamifiedVertex, VoltageCover, build_voltage_cover,
                             check_theta_family, check_type1_hypotheses,
                             check_type2_hypotheses, deck_invariant, load_cover_file,
                             preimage_connected, ramified_vertices, theta_labels,
                             theta_link_weights, type1_checks, verify_cover_properties)
from cubemorse.morse import Character, enumerate_chambers
from cubemorse.verdicts import FAIL, PASS, InputError


def zero_cover(n=2, p=5):
    m = 2 * n
    return VoltageCover(n, p, {(i, j): 0 for i in range(1, m + 1) for j in range(1, m + 1)})


def test_labels_and_ramified_vertices():
    assert theta_labels(2) == ["x1", "x2", "y1", "y2"]
    rv = ramified_vertices()
    assert len(rv) == 6
    assert all(r.value(r.P) == 0 and r.value(r.Q) == 1 for r in rv)
    assert len({r.point for r in rv}) == 6
    assert RamifiedVertex(0, 1, 2, 1).point == (0, 1, 1)


def test_product_voltage_cover_is_verified():
    cover = build_voltage_cover(2, 5)
    v = verify_cover_properties(cover)
    assert v.status == PASS
    assert v.evidence == {"vertices": 40, "edges": 80, "base_4_cycles": 36}
    # net voltage of a base 4-cycle is (i - i')(j - j')
    assert cover.net_voltage(1, 1, 3, 4) == ((1 - 3) * (1 - 4)) % 5


def test_cover_needs_large_prime():
    with pytest.raises(InputError):
        build_voltage_cover(2, 3)
    with pytest.raises(InputError):
        build_voltage_cover(2, 9)


def test_zero_voltage_cover_fails():
    v = verify_cover_properties(zero_cover())
    assert v.status == FAIL and v.witness["components"] == 5


def test_bad_local_structure_fails():
    # a table whose lift closes early: voltage depends on i only
    m = 4
    cover = VoltageCover(2, 5, {(i, j): i for i in range(1, m + 1) for j in range(1, m + 1)})
    v = verify_cover_properties(cover)
    assert v.status == FAIL


def test_missing_voltage_is_input_error():
    with pytest.raises(InputError):
        VoltageCover(2, 5, {(1, 1): 0})


def test_cover_json_roundtrip(tmp_path):
    cover = build_voltage_cover(3, 7)
    path = tmp_path / "v.json"
    path.write_text(json.dumps(cover.to_json()))
    assert load_cover_file(path) == cover
    assert cover.to_json()["base_order"] == theta_labels(3)
    path.write_text("{oops")
    with pytest.raises(InputError, match="line 1, column 2"):
        load_cover_file(path)


@pytest.mark.parametrize("n,p", [(2, 5), (2, 7), (3, 7)])
def test_preimage_of_joins(n, p):
    cover = build_voltage_cover(n, p)
    m = 2 * n
    for left in combinations(range(1, m + 1), 2):
        for right in combinations(range(1, m + 1), 2):
            assert preimage_connected(cover, set(left), set(right))
    # a single base vertex on one side only sees p disjoint stars
    assert not preimage_connected(cover, {1}, {1, 2})


def test_type1_factor_sizes_at_least_two():
    for n in (2, 3, 4):
        for ch in enumerate_chambers("theta", n):
            for point in product((0, 1), repeat=3):
                _, ev = type1_checks(n, ch.representative, point)
                assert min(ev["ascending_sizes"]) >= 2
                assert min(ev["descending_sizes"]) >= 2


def test_theta_link_weights_at_both_vertices():
    lam = Character((1, -1), 2)
    w0, w1 = theta_link_weights(3, lam, 0), theta_link_weights(3, lam, 1)
    assert w0["x2"] == 1 and w0["y2"] == -1
    assert w1 == {k: -v for k, v in w0.items()}


@pytest.mark.parametrize("n,p", [(2, 5), (3, 7)])
def test_theta_family_all_chambers(n, p):
    cover = build_voltage_cover(n, p)
    for ch in enumerate_chambers("theta", n):
        rep = check_theta_family(n, p, ch.representative, cover)
        assert rep.status == PASS, (ch.label, rep.failures[:1])
        assert not rep.notes
        assert deck_invariant(cover, ch.representative)
        assert sum(k.startswith("type2") for k in rep.types) == 6
        assert sum(k.startswith("type1") for k in rep.types) == 8


def test_structured_and_explicit_agree_per_vertex():
    cover = build_voltage_cover(3, 7)
    for ch in enumerate_chambers("theta", 3):
        s = check_type2_hypotheses(cover, ch.representative, "structured")
        e = check_type2_hypotheses(cover, ch.representative, "explicit")
        assert {k: v["homotopy"] for k, v in s.types.items()} == \
            {k: v["homotopy"] for k, v in e.types.items()}
        s1 = check_type1_hypotheses(3, ch.representative, "structured")
        e1 = check_type1_hypotheses(3, ch.representative, "explicit")
        assert s1.status == e1.status == PASS


def test_zero_voltage_breaks_type2():
    lam = Character((1,), 2)
    rep = check_type2_hypotheses(zero_cover(), lam)
    assert rep.status == FAIL
    fam = check_theta_family(2, 5, lam, zero_cover())
    assert fam.status == FAIL and fam.types["cover"]["homotopy"] == FAIL


def test_deck_invariance_of_product_cover():
    cover = build_voltage_cover(2, 5)
    assert deck_invariant(cover, Character((1,), 2))
