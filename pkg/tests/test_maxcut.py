import json

import numpy as np
import pytest

from gadgetgraph.errors import ValidationError
from gadgetgraph.instances import random_order3_family, random_order3_unitary
from gadgetgraph.maxcut import (
    BRUTE_FORCE_LIMIT,
    OrderKUnitaryFamily,
    SimpleGraph,
    complete_graph,
    cycle_graph,
    load_simple_graph,
    max3cut_bruteforce,
    pvm_from_unitary,
    roots_identity_check,
    unitary_cut_value,
    unitary_from_pvm,
    value_bridge,
)

OMEGA = np.exp(2j * np.pi / 3)


def path_graph(k: int) -> SimpleGraph:
    return SimpleGraph(k, tuple((v, v + 1) for v in range(1, k)))


# ---------------------------------------------------------------------------
# graphs and loading


def test_simple_graph_normalizes_edges():
    g = SimpleGraph(4, ((3, 1), (4, 2), (1, 2)))
    assert g.edges == ((1, 2), (1, 3), (2, 4))
    assert g.n_edges == 3


@pytest.mark.parametrize(
    "n,edges",
    [
        (3, ((1, 1),)),          # loop
        (3, ((1, 2), (2, 1))),   # duplicate across orders
        (2, ((1, 3),)),          # endpoint out of range
        (3, ((1,),)),            # not a pair
        (3, ((1.0, 2),)),        # non-integer endpoint
        (-1, ()),                # bad vertex count
    ],
)
def test_simple_graph_rejects_malformed(n, edges):
    with pytest.raises(ValidationError):
        SimpleGraph(n, edges)


def test_load_graph_json_object():
    g = load_simple_graph('{"n": 4, "edges": [[1, 2], [3, 4]]}')
    assert g.n_vertices == 4
    assert g.edges == ((1, 2), (3, 4))


def test_load_graph_bare_list_infers_n():
    g = load_simple_graph("[[1, 2], [2, 5]]")
    assert g.n_vertices == 5


def test_load_graph_text_with_comments(tmp_path):
    target = tmp_path / "graph.txt"
    target.write_text("# a triangle\n1 2\n2 3   # closing edge\n1 3\n\n")
    g = load_simple_graph(target)
    assert g.edges == ((1, 2), (1, 3), (2, 3))


def test_load_graph_json_file(tmp_path):
    target = tmp_path / "graph.json"
    target.write_text(json.dumps({"n": 3, "edges": [[1, 3]]}))
    assert load_simple_graph(str(target)).edges == ((1, 3),)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "empty"),
        ("{", "malformed"),
        ('{"edges": []}', "lacks key"),
        ("1 2 3", "expected"),
        ("1 x", "non-integer"),
        ("[1, 2]", "not a pair"),
    ],
)
def test_load_graph_rejects_bad_input(text, fragment):
    with pytest.raises(ValidationError, match=fragment):
        load_simple_graph(text)


# ---------------------------------------------------------------------------
# exact Max-3-Cut oracle values (each checked by hand against the best
# 3-partition before being frozen here)


@pytest.mark.parametrize(
    "graph,expected",
    [
        (SimpleGraph(1, ()), 0),
        (SimpleGraph(2, ((1, 2),)), 1),
        (complete_graph(3), 3),
        (complete_graph(4), 5),
        (complete_graph(5), 8),
        (complete_graph(6), 12),
        (cycle_graph(5), 5),
        (cycle_graph(6), 6),
        (path_graph(4), 3),
    ],
)
def test_max3cut_oracles(graph, expected):
    assert max3cut_bruteforce(graph) == expected


def test_max3cut_guard():
    big = SimpleGraph(BRUTE_FORCE_LIMIT + 1, ())
    with pytest.raises(ValidationError, match="exhaustive"):
        max3cut_bruteforce(big)


def test_max3cut_at_the_limit_runs():
    # a sparse graph at the limit must still finish quickly
    g = path_graph(BRUTE_FORCE_LIMIT)
    assert max3cut_bruteforce(g) == BRUTE_FORCE_LIMIT - 1


# ---------------------------------------------------------------------------
# unitary families


def test_family_validates_order():
    with pytest.raises(ValidationError, match="order"):
        OrderKUnitaryFamily(3, 2, {1: np.diag([1.0, 1j])})


def test_family_validates_unitarity():
    with pytest.raises(ValidationError, match="unitary"):
        OrderKUnitaryFamily(3, 2, {1: np.diag([1.0, 2.0])})


def test_family_matrices_are_write_locked():
    fam = OrderKUnitaryFamily(3, 1, {1: np.eye(1)})
    with pytest.raises(ValueError):
        fam.unitaries[1][0, 0] = 0.0


def test_identity_family_scores_zero():
    g = complete_graph(3)
    fam = OrderKUnitaryFamily(3, 2, {v: np.eye(2) for v in (1, 2, 3)})
    assert unitary_cut_value(g, fam) == pytest.approx(0.0, abs=1e-12)


def test_scalar_proper_coloring_cuts_every_triangle_edge():
    g = complete_graph(3)
    fam = OrderKUnitaryFamily(
        3, 1, {v: np.array([[OMEGA ** v]]) for v in (1, 2, 3)}
    )
    assert unitary_cut_value(g, fam) == pytest.approx(3.0, abs=1e-12)


def test_unitary_cut_value_requires_cover():
    g = complete_graph(3)
    fam = OrderKUnitaryFamily(3, 1, {1: np.eye(1), 2: np.eye(1)})
    with pytest.raises(ValidationError, match="lacks unitaries"):
        unitary_cut_value(g, fam)


# ---------------------------------------------------------------------------
# spectral decomposition


def test_pvm_from_identity():
    mats = pvm_from_unitary(np.eye(3))
    assert np.allclose(mats[0], np.eye(3), atol=1e-12)
    assert np.allclose(mats[1], 0.0, atol=1e-12)
    assert np.allclose(mats[2], 0.0, atol=1e-12)


def test_pvm_from_diagonal_roots():
    u = np.diag([1.0 + 0j, OMEGA, OMEGA**2])
    mats = pvm_from_unitary(u)
    for a in range(3):
        expected = np.zeros((3, 3))
        expected[a, a] = 1.0
        assert np.allclose(mats[a], expected, atol=1e-12)


def test_pvm_unitary_round_trip(rng):
    for _ in range(5):
        u = random_order3_unitary(rng, 4)
        back = unitary_from_pvm(pvm_from_unitary(u))
        assert np.allclose(back, u, atol=1e-9)


def test_pvm_from_unitary_rejections():
    with pytest.raises(ValidationError, match="not unitary"):
        pvm_from_unitary(np.diag([1.0, 0.5]))
    with pytest.raises(ValidationError, match="order 3"):
        pvm_from_unitary(np.diag([1.0, -1.0]))


# ---------------------------------------------------------------------------
# the trace identity and the value bridge


def test_roots_identity_on_random_families(rng):
    for graph in (complete_graph(3), complete_graph(4), cycle_graph(5)):
        for _ in range(10):
            fam = random_order3_family(rng, graph, int(rng.integers(1, 5)))
            report = roots_identity_check(graph, fam)
            assert report.lhs <= 1e-10


def test_roots_identity_rejects_other_orders():
    g = SimpleGraph(2, ((1, 2),))
    fam = OrderKUnitaryFamily(2, 2, {1: np.diag([1.0, -1.0]), 2: np.eye(2)})
    with pytest.raises(ValidationError, match="order 3"):
        roots_identity_check(g, fam)


def test_roots_identity_no_edges_is_trivial():
    g = SimpleGraph(2, ())
    fam = OrderKUnitaryFamily(3, 1, {1: np.eye(1), 2: np.eye(1)})
    report = roots_identity_check(g, fam)
    assert report.lhs == 0.0


@pytest.mark.parametrize(
    "graph",
    [
        SimpleGraph(1, ()),
        complete_graph(3),
        complete_graph(4),
        cycle_graph(5),
        path_graph(4),
    ],
)
def test_value_bridge_exact(graph):
    report = value_bridge(graph)
    assert report.lhs == pytest.approx(0.0, abs=1e-9)


def test_value_bridge_guard():
    with pytest.raises(ValidationError, match="double-enumeration"):
        value_bridge(SimpleGraph(11, ()))
