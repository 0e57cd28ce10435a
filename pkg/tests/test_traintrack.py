import random

import pytest
from hypothesis import given, settings

from ttkit.graph import make_turn, rose, tighten
from ttkit.graphmap import GraphMap, derivative, iterate_function, power
from ttkit.traintrack import (Marker, TripodError, gate_structure, is_train_track, leaf_segment,
                              local_whitehead, principal_vertices, rotationless_power,
                              stable_whitehead, tripod_at, turn_closure, untightened_iterate)
from ttkit.verdict import Verdict

from conftest import positive_automorphisms, random_positive_automorphism


def test_psi_is_a_train_track(psi_map):
    res = is_train_track(psi_map)
    assert res.ok and res.witness == ()


def test_non_train_track_witness():
    r = rose(2)
    g = GraphMap.from_words(r, {"a": "ab", "b": "A"})
    res = is_train_track(g)
    assert not res.ok
    names = r.names
    chain = [f"{{{names[x]},{names[y]}}}" for x, y in res.witness]
    assert chain == ["{A,b}", "{A,B}", "{a,B}", "{a,a}"]
    # the degenerate turn shows up as backtracking in an iterate
    assert untightened_iterate(g, r.half_edge("a"), 4) == r.word("abABAaBA")
    assert tighten(r, untightened_iterate(g, 0, 4)) != untightened_iterate(g, 0, 4)


def test_psi_gates(psi_map):
    gs = gate_structure(psi_map)
    gr = psi_map.graph
    A, C = gr.half_edge("A"), gr.half_edge("C")
    # A and C are identified by Dg, every other direction is its own gate
    assert gs.gate_of[A] == gs.gate_of[C]
    assert len(set(gs.gate_of)) == 5
    assert gs.illegal_turns == (make_turn(A, C),)
    assert not gs.is_legal_turn(make_turn(A, C))
    assert gs.is_legal_turn(make_turn(gr.half_edge("a"), gr.half_edge("B")))


def test_taken_turns_are_closed_under_dg(psi_map):
    gs = gate_structure(psi_map)
    dg = derivative(psi_map)
    for x, y in gs.taken_turns:
        assert make_turn(dg[x], dg[y]) in gs.taken_turns


def test_turn_closure_parents():
    dg = (2, 3, 0, 1)
    closed, parent = turn_closure(dg, [(0, 1)])
    assert closed == frozenset({(0, 1), (2, 3)})
    # parents point back toward the seed turn
    assert parent[(0, 1)] is None and parent[(2, 3)] == (0, 1)


def test_rotationless_power(psi_map, fib_map):
    assert rotationless_power(psi_map) == 6
    assert rotationless_power(fib_map) == 2
    g6 = power(psi_map, 6)
    dg = derivative(g6)
    periodic = gate_structure(g6).periodic_directions(0)
    assert all(dg[d] == d for d in periodic)


def test_whitehead_graphs_of_psi(psi_map):
    loc = local_whitehead(psi_map, 0)
    st = stable_whitehead(psi_map, 0)
    assert len(loc.vertices) == 6 and loc.is_connected()
    # stable graph: periodic directions only; A is not periodic
    assert len(st.vertices) == 5 and st.is_connected()
    assert psi_map.graph.half_edge("A") not in st.vertices


def test_whitehead_rejects_bad_vertex(psi_map):
    with pytest.raises(ValueError):
        local_whitehead(psi_map, 3)


def test_principal_vertices_markers(psi_map):
    assert principal_vertices(psi_map, Verdict.INCONCLUSIVE) is Marker.INCONCLUSIVE
    assert principal_vertices(psi_map, Verdict.YES) is Marker.UNSUPPORTED
    assert principal_vertices(psi_map, Verdict.NO) == [0]


def test_leaf_segments_grow(psi_map):
    short = leaf_segment(psi_map, 0, 2)
    long = leaf_segment(psi_map, 0, 4)
    assert len(long.path) > len(short.path)
    assert is_train_track(psi_map)
    assert tighten(psi_map.graph, long.path) == long.path


def test_tripod(psi_map):
    g6 = power(psi_map, 6)
    tri = tripod_at(g6, 0, 3)
    assert len({ray.path[0] for ray in tri.rays}) == 3
    assert all(len(ray.path) > 3 for ray in tri.rays)
    with pytest.raises(TripodError):
        tripod_at(g6, 0, 3, pnp_status=Verdict.INCONCLUSIVE)


def test_positive_maps_are_train_tracks():
    rng = random.Random(3)
    for _ in range(200):
        assert is_train_track(random_positive_automorphism(rng, rng.randint(2, 4)))


@settings(max_examples=200)
@given(positive_automorphisms())
def test_derivative_functorial_on_train_tracks(g):
    dg = derivative(g)
    for k in (2, 3):
        dk = derivative(power(g, k))
        assert all(dk[d] == iterate_function(dg, d, k) for d in range(len(dg)))
