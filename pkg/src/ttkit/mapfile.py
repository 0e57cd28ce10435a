"""The ``.gm`` text format for graphs and graph maps.

    # the map of Example 2 style: a -> b -> c -> ab
    graph R3
    vertex v
    edge a v v
    edge b v v
    edge c v v
    map psi
    a -> b
    b -> c
    c -> a b

Words are whitespace separated edge names; runs of single-letter names may
be written together (``ab``).  Uppercase letters reverse single-letter
edges and ``~name`` reverses longer names.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, GraphError, reverse_name, validate_graph
from .graphmap import GraphMap, MapError


class ParseError(ValueError):
    """Syntax error, with 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class ValidationError(ParseError):
    """Well-formed text describing an invalid graph or map."""


@dataclass(frozen=True)
class MapFile:
    graph: Graph
    maps: tuple[GraphMap, ...]
    warnings: tuple[str, ...] = ()
    lines: dict = field(default_factory=dict, compare=False, repr=False)  # map name -> line

    def get(self, name: str | None = None) -> GraphMap:
        if not self.maps:
            raise ValidationError("file declares no map")
        if name is None:
            return self.maps[0]
        for m in self.maps:
            if m.name == name:
                return m
        raise ValidationError(f"no map named {name!r}")


def _tokens(line: str):
    """(column, token) pairs, comments removed."""
    out = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == "#":
            break
        if ch.isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace() and line[j] != "#":
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _check_name(tok: str, lineno: int, col: int, what: str) -> None:
    if not tok or "~" in tok or "->" in tok or not all(ch.isalnum() or ch in "_.^*()" for ch in tok):
        raise ParseError(f"bad {what} name {tok!r}", lineno, col)


def parse(text: str) -> MapFile:
    graph_name = "G"
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    maps: list[tuple[str, int, list]] = []  # name, line, [(lineno, col, lhs, [(col, tok)])]
    seen_graph = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        col, head = toks[0]
        if any("->" in t for _, t in toks):
            if not maps:
                raise ParseError("rule outside of a map block", lineno, col)
            if len(toks) < 2 or toks[1][1] != "->":
                raise ParseError("expected 'EDGE -> WORD'", lineno, col)
            maps[-1][2].append((lineno, col, head, toks[2:]))
            continue
        args = toks[1:]
        if head == "graph":
            if seen_graph or vertices or edges:
                raise ParseError("graph line must come first and only once", lineno, col)
            if len(args) != 1:
                raise ParseError("usage: graph NAME", lineno, col)
            _check_name(args[0][1], lineno, args[0][0], "graph")
            graph_name = args[0][1]
            seen_graph = True
        elif head == "vertex":
            if maps:
                raise ParseError("vertices must be declared before maps", lineno, col)
            if not args:
                raise ParseError("usage: vertex NAME [NAME ...]", lineno, col)
            for c, name in args:
                _check_name(name, lineno, c, "vertex")
                if name in vertices:
                    raise ValidationError(f"duplicate vertex {name!r}", lineno, c)
                vertices.append(name)
        elif head == "edge":
            if maps:
                raise ParseError("edges must be declared before maps", lineno, col)
            if len(args) != 3:
                raise ParseError("usage: edge NAME FROM TO", lineno, col)
            (c, name), (cv, v), (cw, w) = args
            _check_name(name, lineno, c, "edge")
            taken = {e for e, _, _ in edges} | {reverse_name(e) for e, _, _ in edges}
            if name in taken or reverse_name(name) in taken:
                raise ValidationError(f"duplicate edge {name!r}", lineno, c)
            for cc, vv in ((cv, v), (cw, w)):
                if vv not in vertices:
                    raise ValidationError(f"undeclared vertex {vv!r}", lineno, cc)
            edges.append((name, v, w))
        elif head == "map":
            if len(args) != 1:
                raise ParseError("usage: map NAME", lineno, col)
            _check_name(args[0][1], lineno, args[0][0], "map")
            if any(m[0] == args[0][1] for m in maps):
                raise ValidationError(f"duplicate map {args[0][1]!r}", lineno, args[0][0])
            maps.append((args[0][1], lineno, []))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, col)

    if not edges:
        raise ValidationError("file declares no edges")
    try:
        graph = Graph.from_edges(vertices, edges, name=graph_name, validate=False)
        report = validate_graph(graph)
    except GraphError as exc:
        raise ValidationError(str(exc)) from None

    built = []
    for name, line, rules in maps:
        images = {}
        for lineno, col, lhs, word in rules:
            try:
                h = graph.half_edge(lhs)
            except KeyError:
                raise ValidationError(f"rule for unknown edge {lhs!r}", lineno, col) from None
            if h in images or graph.reverse[h] in images:
                raise ValidationError(f"second rule for edge {lhs!r}", lineno, col)
            path = []
            for c, tok in word:
                try:
                    path.extend(graph.word(tok))
                except KeyError:
                    raise ValidationError(f"unknown edge in word: {tok!r}", lineno, c) from None
            if not graph.is_positive(h):
                path = [graph.reverse[x] for x in reversed(path)]
                h = graph.reverse[h]
            images[h] = path
        missing = [graph.names[h] for h in graph.edges if h not in images]
        if missing:
            raise ValidationError(f"map {name}: missing image for " + ", ".join(missing), line, 1)
        try:
            built.append(GraphMap.from_images(graph, images, name=name))
        except (MapError, ValueError) as exc:
            raise ValidationError(f"map {name}: {exc}", line, 1) from None
    return MapFile(graph, tuple(built), tuple(report.warnings), {n: l for n, l, _ in maps})


def format_mapfile(mf: MapFile) -> str:
    g = mf.graph
    out = [f"graph {g.name}"]
    out += [f"vertex {v}" for v in g.vertices]
    for h in g.edges:
        out.append(f"edge {g.names[h]} {g.vertices[g.origin[h]]} {g.vertices[g.terminus(h)]}")
    for m in mf.maps:
        out.append(f"map {m.name}")
        for h in g.edges:
            out.append(f"{g.names[h]} -> {g.format(m.edge_image[h], ' ')}")
    return "\n".join(out) + "\n"


def format_map(g: GraphMap) -> str:
    return format_mapfile(MapFile(g.graph, (g,)))


def read(path) -> MapFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
