import pytest
from hypothesis import given, settings

from ttkit.graph import (Graph, GraphError, PathError, check_path, is_tight, make_turn, reverse_name,
                         reverse_path, rose, tighten, turns_of, validate_graph)

from conftest import rose_words


def theta():
    return Graph.from_edges(["p", "q"], [("a", "p", "q"), ("b", "p", "q"), ("c", "p", "q")], name="Theta")


def test_rose_shape():
    r = rose(3)
    assert (r.num_vertices, r.num_edges, r.rank) == (1, 3, 3)
    assert r.names == ("a", "A", "b", "B", "c", "C")
    assert r.valence(0) == 6


def test_theta_rank_and_termini():
    t = theta()
    assert t.rank == 2
    a = t.half_edge("a")
    assert t.origin[a] == t.vertex("p") and t.terminus(a) == t.vertex("q")
    assert t.terminus(t.reverse[a]) == t.vertex("p")


def test_reverse_names():
    assert reverse_name("a") == "A"
    assert reverse_name("a0") == "~a0"
    assert reverse_name("A") == "~A"   # an uppercase edge name has no letter to swap to


def test_word_parsing():
    r = rose(3)
    assert r.word("abA") == (0, 2, 1)
    assert r.format((0, 2, 1)) == "abA"


def test_validation_rejects_disconnected():
    with pytest.raises(GraphError):
        Graph.from_edges(["p", "q"], [("a", "p", "p"), ("b", "q", "q")])


def test_valence_warnings():
    g = Graph.from_edges(["p", "q"], [("a", "p", "q"), ("b", "q", "p")])
    report = validate_graph(g)
    assert len(report.warnings) == 2


def test_tighten_examples():
    r = rose(2)
    assert tighten(r, r.word("aAb")) == r.word("b")
    assert tighten(r, r.word("abBA")) == ()
    assert tighten(r, r.word("abBc".replace("c", "a"))) == r.word("aa")


def test_check_path_rejects_gaps():
    t = theta()
    a, b = t.half_edge("a"), t.half_edge("b")
    check_path(t, (a, t.reverse[b]))
    with pytest.raises(PathError):
        check_path(t, (a, b))


def test_turns_need_tight_paths():
    r = rose(2)
    assert turns_of(r, r.word("ab")) == [make_turn(r.half_edge("A"), r.half_edge("b"))]
    with pytest.raises(PathError):
        turns_of(r, r.word("aA"))


@settings(max_examples=300)
@given(rose_words())
def test_tighten_is_idempotent_and_tight(gw):
    g, w = gw
    t = tighten(g, w)
    assert tighten(g, t) == t
    assert is_tight(g, t)


@settings(max_examples=300)
@given(rose_words(), rose_words())
def test_tighten_respects_concatenation(gw1, gw2):
    g, w1 = gw1
    _, w2 = gw2
    assert tighten(g, w1 + w2) == tighten(g, tighten(g, w1) + tighten(g, w2))


@settings(max_examples=300)
@given(rose_words())
def test_reverse_is_an_inverse(gw):
    g, w = gw
    assert reverse_path(g, reverse_path(g, w)) == w
    assert tighten(g, w + reverse_path(g, w)) == ()
