"""Graph self-maps sending vertices to vertices and edges to tight paths."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import Graph, Path, check_path, reverse_path, tighten

Matrix = tuple[tuple[int, ...], ...]


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class GraphMap:
    graph: Graph
    vertex_image: tuple[int, ...]
    edge_image: tuple[Path, ...]  # indexed by half-edge
    name: str = "g"

    def __post_init__(self):
        g = self.graph
        if len(self.vertex_image) != g.num_vertices or len(self.edge_image) != g.num_half_edges:
            raise MapError("map tables do not match the graph")
        for h, img in enumerate(self.edge_image):
            if not img:
                raise MapError(f"edge {g.names[h]} collapses to a point")
            check_path(g, img)
            if g.origin[img[0]] != self.vertex_image[g.origin[h]]:
                raise MapError(f"image of {g.names[h]} starts at the wrong vertex")
            if g.terminus(img[-1]) != self.vertex_image[g.terminus(h)]:
                raise MapError(f"image of {g.names[h]} ends at the wrong vertex")
            if self.edge_image[g.reverse[h]] != reverse_path(g, img):
                raise MapError(f"image of {g.names[g.reverse[h]]} is not the reverse image")

    @classmethod
    def from_images(cls, graph: Graph, images: Mapping[int, Sequence[int]],
                    vertex_image: Mapping[int, int] | None = None, name: str = "g") -> "GraphMap":
        """Build a map from images of one half-edge per edge (reverses derived).

        Images are tightened; vertex images are read off the edge images and
        checked against ``vertex_image`` when it is given.
        """
        n = graph.num_half_edges
        table: list[Path | None] = [None] * n
        for h, img in images.items():
            t = tighten(graph, img)
            check_path(graph, t)
            if not t:
                raise MapError(f"edge {graph.names[h]} collapses to a point")
            for k, val in ((h, t), (graph.reverse[h], reverse_path(graph, t))):
                if table[k] is not None and table[k] != val:
                    raise MapError(f"conflicting images for {graph.names[k]}")
                table[k] = val
        missing = [graph.names[h] for h in graph.edges if table[h] is None]
        if missing:
            raise MapError("missing image for " + ", ".join(missing))
        vimg: list[int | None] = [None] * graph.num_vertices
        for h, img in enumerate(table):
            for v, w in ((graph.origin[h], graph.origin[img[0]]),
                         (graph.terminus(h), graph.terminus(img[-1]))):
                if vimg[v] is None:
                    vimg[v] = w
                elif vimg[v] != w:
                    raise MapError(f"edge images disagree on the image of vertex {graph.vertices[v]}")
        if vertex_image:
            for v, w in vertex_image.items():
                if vimg[v] is not None and vimg[v] != w:
                    raise MapError(f"declared image of {graph.vertices[v]} contradicts the edge images")
                vimg[v] = w
        if any(w is None for w in vimg):
            raise MapError("some vertex has no image")
        return cls(graph, tuple(vimg), tuple(table), name)

    @classmethod
    def from_words(cls, graph: Graph, words: Mapping[str, str], name: str = "g") -> "GraphMap":
        """``GraphMap.from_words(R3, {"a": "b", "b": "c", "c": "ab"})``"""
        return cls.from_images(graph, {graph.half_edge(k): graph.word(v) for k, v in words.items()},
                               name=name)

    def image_word(self, h: int) -> str:
        return self.graph.format(self.edge_image[h])

    def __str__(self):
        g = self.graph
        return ", ".join(f"{g.names[h]}->{self.image_word(h)}" for h in g.edges)


def identity(graph: Graph) -> GraphMap:
    return GraphMap(graph, tuple(range(graph.num_vertices)),
                    tuple((h,) for h in range(graph.num_half_edges)), "id")


def apply(g: GraphMap, p: Sequence[int]) -> Path:
    """Tightened image of a path."""
    check_path(g.graph, p)
    img = g.edge_image
    return tighten(g.graph, (x for h in p for x in img[h]))


def compose(g: GraphMap, h: GraphMap) -> GraphMap:
    """``g o h`` (apply ``h`` first)."""
    if g.graph != h.graph:
        raise MapError("maps live on different graphs")
    gr = g.graph
    images = []
    for e in range(gr.num_half_edges):
        t = tighten(gr, (x for y in h.edge_image[e] for x in g.edge_image[y]))
        if not t:
            raise MapError(f"composition collapses {gr.names[e]}")
        images.append(t)
    vimg = tuple(g.vertex_image[w] for w in h.vertex_image)
    return GraphMap(gr, vimg, tuple(images), f"{g.name}*{h.name}")


def power(g: GraphMap, k: int) -> GraphMap:
    if k < 1:
        raise MapError("power needs k >= 1; use identity() for k = 0")
    exponent = k
    result = None
    base = g
    while k:
        if k & 1:
            result = base if result is None else compose(base, result)
        k >>= 1
        if k:
            base = compose(base, base)
    return GraphMap(result.graph, result.vertex_image, result.edge_image, f"{g.name}^{exponent}")


def transition_matrix(g: GraphMap) -> Matrix:
    """Entry (i, j): times the image of edge j crosses edge i, either direction."""
    gr = g.graph
    n = gr.num_edges
    cols = []
    for h in gr.edges:
        col = [0] * n
        for x in g.edge_image[h]:
            col[gr.edge_index(x)] += 1
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def abelianization_matrix(g: GraphMap) -> Matrix:
    """Signed crossing counts; the action on the edge chain group."""
    gr = g.graph
    n = gr.num_edges
    cols = []
    for h in gr.edges:
        col = [0] * n
        for x in g.edge_image[h]:
            col[gr.edge_index(x)] += 1 if gr.is_positive(x) else -1
        cols.append(col)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def derivative(g: GraphMap) -> tuple[int, ...]:
    """Direction map: each half-edge goes to the first half-edge of its image."""
    return tuple(img[0] for img in g.edge_image)


def iterate_function(f: Sequence[int], x: int, k: int) -> int:
    for _ in range(k):
        x = f[x]
    return x


# exact integer matrices ------------------------------------------------

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative matrix power")
    result = mat_identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result
