import pytest
from hypothesis import given, settings

from ttkit.mapfile import ParseError, ValidationError, format_map, format_mapfile, parse

from conftest import positive_automorphisms

PSI = """
# comment line
graph R3
vertex v
edge a v v
edge b v v
edge c v v
map psi
a -> b
b -> c
c -> a b   # trailing comment
"""


def test_parse_psi():
    mf = parse(PSI)
    g = mf.get("psi")
    assert mf.graph.name == "R3" and mf.graph.rank == 3
    assert g.image_word(mf.graph.half_edge("c")) == "ab"
    assert mf.lines["psi"] == 8


def test_round_trip():
    mf = parse(PSI)
    again = parse(format_mapfile(mf))
    assert format_mapfile(again) == format_mapfile(mf)
    assert again.maps == mf.maps


def test_multi_character_names():
    text = """graph T
vertex p q
edge e1 p q
edge e2 p q
edge e3 p q
map f
e1 -> e2
e2 -> e3
e3 -> e1 ~e2 e3
"""
    mf = parse(text)
    g = mf.get()
    gr = mf.graph
    assert gr.format(g.edge_image[gr.half_edge("e3")], " ") == "e1 ~e2 e3"
    assert parse(format_mapfile(mf)).maps == mf.maps


def test_rule_for_reversed_edge():
    mf = parse("graph R\nvertex v\nedge a v v\nedge b v v\nmap f\nA -> B\nb -> ab\n")
    g = mf.get()
    assert g.image_word(mf.graph.half_edge("a")) == "b"


@pytest.mark.parametrize("text, message", [
    ("graph G\nvertex v\nedge a v v\nedge b v v\nmap f\na -> b\n", "missing image for b"),
    ("graph G\nvertex v\nedge a v v\nmap f\na -> a A\n", "collapses"),
    ("graph G\nvertex v\nedge a v v\nmap f\na -> x\n", "unknown edge in word"),
    ("graph G\nvertex v\nvertex v\nedge a v v\n", "duplicate vertex"),
    ("graph G\nvertex v\nedge a v v\nedge a v v\n", "duplicate edge"),
    ("graph G\nvertex v\nedge a v w\n", "undeclared vertex"),
    ("graph G\nvertex v\nedge a v v\nmap f\na -> a\na -> a\n", "second rule"),
    ("graph G\nvertex v\nedge a v v\nmap f\na -> a\nmap f\na -> a\n", "duplicate map"),
    ("graph G\nvertex p q\nedge a p q\nedge b p q\nmap f\na -> b\nb -> A\n", "disagree on the image of vertex"),
])
def test_semantic_errors(text, message):
    with pytest.raises(ValidationError, match=message):
        parse(text)


@pytest.mark.parametrize("text, line, col", [
    ("graph G\nvertex v\nedge a v v\nmap f\na->a\n", 5, 1),
    ("graph G\nvertex v\nedge a v\n", 3, 1),
    ("graph G\nbogus v\n", 2, 1),
    ("a -> a\n", 1, 1),
    ("graph G\nvertex v\nedge a v v\nmap f\na -> a\nvertex w\n", 6, 1),
])
def test_syntax_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert not isinstance(info.value, ValidationError)
    assert (info.value.line, info.value.col) == (line, col)


def test_unknown_word_column():
    with pytest.raises(ValidationError) as info:
        parse("graph G\nvertex v\nedge a v v\nmap f\na -> a  zz\n")
    assert (info.value.line, info.value.col) == (5, 9)


def test_missing_map_lookup():
    with pytest.raises(ValidationError):
        parse(PSI).get("nope")


@settings(max_examples=100)
@given(positive_automorphisms())
def test_round_trip_random_maps(g):
    mf = parse(format_map(g))
    assert mf.maps[0].edge_image == g.edge_image
