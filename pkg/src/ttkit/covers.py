"""Cyclic voltage covers, lifts of graph maps, deck transformations, H_1 actions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .graph import Graph, GraphError, Path
from .graphmap import GraphMap, Matrix, abelianization_matrix, compose, mat_identity


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class Voltage:
    graph: Graph
    modulus: int
    values: tuple[int, ...]     # one residue per unoriented edge, declaration order

    def __post_init__(self):
        if self.modulus < 2:
            raise CoverError("voltage modulus must be at least 2")
        if len(self.values) != self.graph.num_edges:
            raise CoverError("voltage must assign every edge")
        object.__setattr__(self, "values", tuple(v % self.modulus for v in self.values))

    @classmethod
    def parse(cls, graph: Graph, text: str, modulus: int) -> "Voltage":
        """``Voltage.parse(R3, "a=1,b=0,c=0", 3)``"""
        vals: dict[int, int] = {}
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            name, _, num = part.partition("=")
            h = graph.half_edge(name.strip())
            sign = 1 if graph.is_positive(h) else -1
            vals[graph.edge_index(h)] = sign * int(num)
        missing = [graph.names[graph.edges[i]] for i in range(graph.num_edges) if i not in vals]
        if missing:
            raise CoverError("no voltage for " + ", ".join(missing))
        return cls(graph, modulus, tuple(vals[i] for i in range(graph.num_edges)))

    def of(self, h: int) -> int:
        v = self.values[self.graph.edge_index(h)]
        return v if self.graph.is_positive(h) else (-v) % self.modulus

    def of_path(self, p: Sequence[int]) -> int:
        return sum(self.of(h) for h in p) % self.modulus


@dataclass(frozen=True)
class Cover:
    base: Graph
    voltage: Voltage
    graph: Graph
    vertex_proj: tuple[int, ...]
    edge_proj: tuple[int, ...]     # cover half-edge -> base half-edge
    fiber: tuple[int, ...]         # cover vertex -> fiber index
    deck: GraphMap

    @property
    def n(self) -> int:
        return self.voltage.modulus

    def vertex(self, v: int, i: int) -> int:
        return v * self.n + i % self.n

    def lift_half_edge(self, h: int, i: int) -> int:
        """Lift of base half-edge ``h`` starting in fiber ``i``."""
        b = self.base
        j = b.edge_index(h)
        n = self.n
        if b.is_positive(h):
            return 2 * (j * n + i % n)
        return 2 * (j * n + (i - self.voltage.values[j]) % n) + 1

    def lift_path(self, p: Sequence[int], i: int) -> Path:
        out = []
        for h in p:
            out.append(self.lift_half_edge(h, i))
            i = (i + self.voltage.of(h)) % self.n
        return tuple(out)


def _sub(name: str, i: int) -> str:
    return f"{name}{i}"


def build_cover(base: Graph, mu: Voltage) -> Cover:
    if mu.graph != base:
        raise CoverError("voltage belongs to another graph")
    n = mu.modulus
    verts = [_sub(v, i) for v in base.vertices for i in range(n)]
    edges = []
    for j, h in enumerate(base.edges):
        o, t = base.origin[h], base.terminus(h)
        for i in range(n):
            edges.append((_sub(base.names[h], i), verts[o * n + i], verts[t * n + (i + mu.values[j]) % n]))
    try:
        total = Graph.from_edges(verts, edges, name=f"{base.name}~{n}")
    except GraphError as exc:
        raise CoverError(f"voltage cover is not a valid graph: {exc}") from None
    vproj = tuple(v for v in range(base.num_vertices) for _ in range(n))
    fiber = tuple(i for _ in range(base.num_vertices) for i in range(n))
    eproj = []
    for j, h in enumerate(base.edges):
        for _ in range(n):
            eproj += [h, base.reverse[h]]
    proto = Cover(base, mu, total, vproj, tuple(eproj), fiber, None)
    deck = _deck(proto, 1)
    return Cover(base, mu, total, vproj, tuple(eproj), fiber, deck)


def _deck(cover: Cover, m: int) -> GraphMap:
    n = cover.n
    g = cover.graph
    vimg = tuple(cover.vertex(cover.vertex_proj[v], cover.fiber[v] + m) for v in range(g.num_vertices))
    eimg = []
    for h in range(g.num_half_edges):
        i = cover.fiber[g.origin[h]]
        eimg.append((cover.lift_half_edge(cover.edge_proj[h], i + m),))
    return GraphMap(g, vimg, tuple(eimg), f"T^{m % n}" if m % n != 1 else "T")


def deck_power(cover: Cover, m: int) -> GraphMap:
    return _deck(cover, m)


def _spanning_tree_offsets(g: GraphMap, mu: Voltage, c: int) -> list[int] | None:
    """Solve ``mu(g(e)) = c mu(e) + tau[t(e)] - tau[o(e)]`` with ``tau[v0] = 0``."""
    gr = g.graph
    n = mu.modulus
    tau: list[int | None] = [None] * gr.num_vertices
    tau[0] = 0
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for h in gr.directions_at(v):
            w = gr.terminus(h)
            val = (tau[v] + mu.of_path(g.edge_image[h]) - c * mu.of(h)) % n
            if tau[w] is None:
                tau[w] = val
                queue.append(w)
    for h in gr.edges:
        o, t = gr.origin[h], gr.terminus(h)
        if (mu.of_path(g.edge_image[h]) - c * mu.of(h) - tau[t] + tau[o]) % n:
            return None
    return tau


def lift_exists(g: GraphMap, mu: Voltage) -> int | None:
    """Least unit c with ``mu(g(e)) = c mu(e) + coboundary``, or None."""
    n = mu.modulus
    for c in range(1, n):
        if gcd(c, n) == 1 and _spanning_tree_offsets(g, mu, c) is not None:
            return c
    return None


@dataclass(frozen=True)
class LiftWitness:
    base_map: GraphMap
    cover: Cover
    c: int
    tau: tuple[int, ...]
    map: GraphMap


def lift_map(g: GraphMap, cover: Cover, c: int | None = None) -> LiftWitness:
    """Lift of g sending ``(v, i)`` to ``(g(v), c i + tau_v)``, normalized at ``(v0, 0)``."""
    mu = cover.voltage
    if c is None:
        c = lift_exists(g, mu)
        if c is None:
            raise CoverError("map does not lift to this cover")
    tau = _spanning_tree_offsets(g, mu, c)
    if tau is None:
        raise CoverError(f"map does not lift with multiplier {c}")
    n = cover.n
    tot = cover.graph
    vimg = tuple(cover.vertex(g.vertex_image[cover.vertex_proj[v]],
                              c * cover.fiber[v] + tau[cover.vertex_proj[v]])
                 for v in range(tot.num_vertices))
    eimg = []
    for h in range(tot.num_half_edges):
        v = tot.origin[h]
        bh = cover.edge_proj[h]
        start = (c * cover.fiber[v] + tau[cover.vertex_proj[v]]) % n
        eimg.append(cover.lift_path(g.edge_image[bh], start))
    lifted = GraphMap(tot, vimg, tuple(eimg), f"lift({g.name})")
    w = LiftWitness(g, cover, c, tuple(tau), lifted)
    if not deck_identity_holds(w) or not projects_to_base(w):
        raise CoverError("constructed lift fails its invariants")
    return w


def _same(a: GraphMap, b: GraphMap) -> bool:
    return a.vertex_image == b.vertex_image and a.edge_image == b.edge_image


def deck_identity_holds(w: LiftWitness) -> bool:
    """``lift o T = T^c o lift`` exactly."""
    return _same(compose(w.map, w.cover.deck), compose(deck_power(w.cover, w.c), w.map))


def projects_to_base(w: LiftWitness) -> bool:
    cov, g = w.cover, w.base_map
    tot = cov.graph
    for h in range(tot.num_half_edges):
        if tuple(cov.edge_proj[x] for x in w.map.edge_image[h]) != g.edge_image[cov.edge_proj[h]]:
            return False
    return all(cov.vertex_proj[w.map.vertex_image[v]] == g.vertex_image[cov.vertex_proj[v]]
               for v in range(tot.num_vertices))


def commutes_with_deck(w: LiftWitness) -> bool:
    result = _same(compose(w.map, w.cover.deck), compose(w.cover.deck, w.map))
    if result != (w.c % w.cover.n == 1):
        raise CoverError("deck commutation disagrees with the multiplier")
    return result


# homology ---------------------------------------------------------------

def cycle_basis(graph: Graph) -> tuple[list[int], list[int]]:
    """Spanning-tree edge indices and the complementary (cycle) edge indices."""
    seen = {0}
    tree: list[int] = []
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for h in graph.directions_at(v):
            w = graph.terminus(h)
            if w not in seen:
                seen.add(w)
                tree.append(graph.edge_index(h))
                queue.append(w)
    ts = set(tree)
    return tree, [i for i in range(graph.num_edges) if i not in ts]


def h1_action(m: GraphMap) -> Matrix:
    """Action on H_1 in the basis of fundamental cycles of a BFS spanning tree.

    A cycle is determined by its coefficients on non-tree edges, so the
    action is the non-tree block of the chain map applied to the basis cycles.
    """
    gr = m.graph
    tree, others = cycle_basis(gr)
    a = abelianization_matrix(m)
    basis = [_fundamental_cycle(gr, tree, j) for j in others]
    rows = []
    for i in others:
        rows.append(tuple(sum(a[i][k] * z[k] for k in range(gr.num_edges)) for z in basis))
    return tuple(rows)


def _fundamental_cycle(gr: Graph, tree: list[int], j: int) -> list[int]:
    # tree path from t(e_j) back to o(e_j), closed up by e_j
    e = gr.edges[j]
    ts = set(tree)
    parent: dict[int, int | None] = {gr.terminus(e): None}
    queue = deque([gr.terminus(e)])
    while queue:
        v = queue.popleft()
        for h in gr.directions_at(v):
            if gr.edge_index(h) in ts and gr.terminus(h) not in parent:
                parent[gr.terminus(h)] = h
                queue.append(gr.terminus(h))
    z = [0] * gr.num_edges
    z[j] += 1
    v = gr.origin[e]
    while parent[v] is not None:
        h = parent[v]
        z[gr.edge_index(h)] += 1 if gr.is_positive(h) else -1
        v = gr.origin[h]
    return z


def is_homologically_nontrivial(m: GraphMap) -> bool:
    a = h1_action(m)
    return a != mat_identity(len(a))
