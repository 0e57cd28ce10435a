import pytest

from ttkit.classify import map_order
from ttkit.covers import (CoverError, Voltage, build_cover, commutes_with_deck, cycle_basis,
                          deck_identity_holds, deck_power, h1_action, is_homologically_nontrivial,
                          lift_exists, lift_map, projects_to_base)
from ttkit.graph import Graph, rose
from ttkit.graphmap import GraphMap, mat_identity, mat_mul, power


def psi_voltage(psi_map, n):
    return Voltage.parse(psi_map.graph, "a=1,b=0,c=0", n)


def test_voltage_parsing(psi_map):
    mu = psi_voltage(psi_map, 3)
    gr = psi_map.graph
    assert mu.values == (1, 0, 0)
    assert mu.of(gr.half_edge("A")) == 2
    assert mu.of_path(gr.word("aab")) == 2
    with pytest.raises(CoverError, match="no voltage"):
        Voltage.parse(gr, "a=1", 3)
    with pytest.raises(CoverError):
        Voltage(gr, 1, (0, 0, 0))


def test_cover_structure(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    g = cov.graph
    assert (g.num_vertices, g.num_edges, g.rank) == (3, 9, 7)
    a0 = g.half_edge("a0")
    assert g.vertices[g.origin[a0]] == "v0" and g.vertices[g.terminus(a0)] == "v1"
    b2 = g.half_edge("b2")
    assert g.terminus(b2) == g.origin[b2]


def test_disconnected_cover_rejected(psi_map):
    with pytest.raises(CoverError):
        build_cover(psi_map.graph, Voltage.parse(psi_map.graph, "a=0,b=0,c=0", 3))


def test_path_lifting_projects(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    p = psi_map.graph.word("abcaCA")
    lift = cov.lift_path(p, 1)
    assert tuple(cov.edge_proj[h] for h in lift) == p
    assert cov.graph.origin[lift[0]] == cov.vertex(0, 1)


def test_lift_existence_example_two(psi_map):
    mu = psi_voltage(psi_map, 3)
    assert lift_exists(psi_map, mu) is None
    assert lift_exists(power(psi_map, 13), mu) == 1


def test_lift_example_two(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    w = lift_map(power(psi_map, 13), cov)
    assert w.map.vertex_image == (0, 1, 2)
    assert projects_to_base(w) and deck_identity_holds(w)
    assert commutes_with_deck(w)


def test_lift_example_three(psi_map):
    mu = psi_voltage(psi_map, 7)
    cov = build_cover(psi_map.graph, mu)
    assert cov.graph.rank == 15
    assert lift_exists(power(psi_map, 16), mu) == 2
    w = lift_map(power(psi_map, 16), cov)
    names = cov.graph.vertices
    assert names[w.map.vertex_image[cov.graph.vertex("v1")]] == "v2"
    assert not commutes_with_deck(w)
    assert deck_identity_holds(w)


def test_lift_refused_when_impossible(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    with pytest.raises(CoverError):
        lift_map(psi_map, cov)
    with pytest.raises(CoverError):
        lift_map(power(psi_map, 13), cov, c=2)


def test_deck_group(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    T = cov.deck
    assert map_order(T) == 3
    ident = deck_power(cov, 3)
    assert all(ident.edge_image[h] == (h,) for h in range(cov.graph.num_half_edges))


def test_h1_action_of_deck(psi_map):
    cov = build_cover(psi_map.graph, psi_voltage(psi_map, 3))
    a = h1_action(cov.deck)
    assert is_homologically_nontrivial(cov.deck)
    a3 = mat_mul(a, mat_mul(a, a))
    assert a3 == mat_identity(7)


def test_cycle_basis_sizes():
    theta = Graph.from_edges(["p", "q"], [("a", "p", "q"), ("b", "p", "q"), ("c", "p", "q")])
    tree, cycles = cycle_basis(theta)
    assert len(tree) == 1 and len(cycles) == 2


def test_h1_action_on_rose_is_abelianization():
    r = rose(2)
    f = GraphMap.from_words(r, {"a": "ab", "b": "b"})
    assert h1_action(f) == ((1, 0), (1, 1))
