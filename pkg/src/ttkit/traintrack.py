"""Gates, train track checks, Whitehead graphs, principal vertices and eigenrays."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import networkx as nx

from .graph import Path, Turn, is_tight, make_turn, turns_of
from .graphmap import GraphMap, apply, derivative, power
from .verdict import Verdict


def _orbit_period(f: Sequence[int], x: int, limit: int) -> int:
    """Least p >= 1 with f^p(x) = x, or 0 when x is not periodic."""
    y = f[x]
    for p in range(1, limit + 1):
        if y == x:
            return p
        y = f[y]
    return 0


@dataclass(frozen=True)
class GateStructure:
    gates: dict[int, tuple[tuple[int, ...], ...]]  # vertex -> gates (sorted tuples)
    gate_of: tuple[int, ...]                        # direction -> global gate id
    period: tuple[int, ...]                         # direction -> period, 0 if not periodic
    vertex_period: tuple[int, ...]
    taken_turns: frozenset[Turn]
    illegal_turns: tuple[Turn, ...]

    def is_legal_turn(self, t: Turn) -> bool:
        return self.gate_of[t[0]] != self.gate_of[t[1]]

    def periodic_directions(self, v: int | None = None) -> list[int]:
        return [d for d, p in enumerate(self.period) if p and (v is None or self._origin[d] == v)]

    # populated by gate_structure; kept out of equality
    _origin: tuple[int, ...] = field(default=(), compare=False, repr=False)


def turn_closure(dg: Sequence[int], seeds) -> tuple[frozenset[Turn], dict[Turn, Turn]]:
    """Close a turn set under Dg; also return a parent map for witnesses."""
    parent: dict[Turn, Turn | None] = {}
    stack = []
    for t in seeds:
        if t not in parent:
            parent[t] = None
            stack.append(t)
    while stack:
        t = stack.pop()
        if t[0] == t[1]:
            continue
        u = make_turn(dg[t[0]], dg[t[1]])
        if u not in parent:
            parent[u] = t
            stack.append(u)
    return frozenset(parent), parent


def image_turns(g: GraphMap) -> set[Turn]:
    out: set[Turn] = set()
    for h in g.graph.edges:
        out.update(turns_of(g.graph, g.edge_image[h]))
    return out


def gate_structure(g: GraphMap) -> GateStructure:
    gr = g.graph
    dg = derivative(g)
    n = gr.num_half_edges
    # Dg^n identifies exactly the pairs that some iterate identifies
    far = list(range(n))
    for _ in range(n):
        far = [dg[x] for x in far]
    key_to_gate: dict[tuple[int, int], int] = {}
    gate_of = []
    for d in range(n):
        key = (gr.origin[d], far[d])
        gate_of.append(key_to_gate.setdefault(key, len(key_to_gate)))
    gates: dict[int, list[tuple[int, ...]]] = {}
    for (v, _), gid in sorted(key_to_gate.items(), key=lambda kv: kv[1]):
        members = tuple(d for d in range(n) if gate_of[d] == gid)
        gates.setdefault(v, []).append(members)
    period = tuple(_orbit_period(dg, d, n) for d in range(n))
    vperiod = tuple(_orbit_period(g.vertex_image, v, gr.num_vertices) for v in range(gr.num_vertices))
    taken, _ = turn_closure(dg, image_turns(g))
    illegal = []
    for v in range(gr.num_vertices):
        for gate in gates.get(v, []):
            for i, d1 in enumerate(gate):
                for d2 in gate[i + 1:]:
                    illegal.append(make_turn(d1, d2))
    return GateStructure({v: tuple(sorted(gs)) for v, gs in gates.items()}, tuple(gate_of), period,
                         vperiod, taken, tuple(sorted(illegal)), tuple(gr.origin))


@dataclass(frozen=True)
class TrainTrackResult:
    ok: bool
    # chain of turns from a turn in an edge image to a degenerate one
    witness: tuple[Turn, ...] = ()
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_train_track(g: GraphMap) -> TrainTrackResult:
    gr = g.graph
    for h in gr.edges:
        if not is_tight(gr, g.edge_image[h]):
            return TrainTrackResult(False, (), f"image of {gr.names[h]} is not tight")
    taken, parent = turn_closure(derivative(g), image_turns(g))
    bad = sorted(t for t in taken if t[0] == t[1])
    if not bad:
        return TrainTrackResult(True)
    chain = [bad[0]]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    names = " -> ".join("{%s,%s}" % (gr.names[a], gr.names[b]) for a, b in chain)
    return TrainTrackResult(False, tuple(chain), f"turn orbit {names} degenerates")


def untightened_iterate(g: GraphMap, h: int, k: int) -> Path:
    """Concatenated image of ``h`` under ``k`` letterwise applications, no cancellation."""
    word: Path = (h,)
    for _ in range(k):
        word = tuple(x for y in word for x in g.edge_image[y])
    return word


def rotationless_power(g: GraphMap, gs: GateStructure | None = None) -> int:
    """lcm of the periods of periodic directions and periodic vertices."""
    gs = gs or gate_structure(g)
    r = 1
    for p in list(gs.period) + list(gs.vertex_period):
        if p:
            r = r * p // math.gcd(r, p)
    return r


# Whitehead graphs -------------------------------------------------------

@dataclass(frozen=True)
class WhiteheadGraph:
    flavor: str                      # local | stable | ideal
    vertices: tuple                  # directions, or (vertex, direction) pairs when ideal
    edges: frozenset
    basepoint: int | None = None

    def to_networkx(self) -> nx.Graph:
        w = nx.Graph()
        w.add_nodes_from(self.vertices)
        w.add_edges_from(tuple(e) for e in self.edges)
        return w

    def is_connected(self) -> bool:
        return bool(self.vertices) and nx.is_connected(self.to_networkx())


def _check_vertex(g: GraphMap, v: int) -> None:
    if not 0 <= v < g.graph.num_vertices:
        raise ValueError(f"{v} is not a vertex of {g.graph.name}")


def local_whitehead(g: GraphMap, v: int, gs: GateStructure | None = None) -> WhiteheadGraph:
    _check_vertex(g, v)
    gs = gs or gate_structure(g)
    dirs = tuple(g.graph.directions_at(v))
    edges = frozenset(t for t in gs.taken_turns if t[0] != t[1] and g.graph.origin[t[0]] == v)
    return WhiteheadGraph("local", dirs, edges, v)


def stable_whitehead(g: GraphMap, v: int, gs: GateStructure | None = None) -> WhiteheadGraph:
    gs = gs or gate_structure(g)
    loc = local_whitehead(g, v, gs)
    keep = tuple(d for d in loc.vertices if gs.period[d])
    ks = set(keep)
    return WhiteheadGraph("stable", keep, frozenset(t for t in loc.edges if t[0] in ks and t[1] in ks), v)


def format_whitehead(g: GraphMap, w: WhiteheadGraph) -> dict:
    names = g.graph.names
    vn = g.graph.vertices

    def label(x):
        return f"{vn[x[0]]}:{names[x[1]]}" if isinstance(x, tuple) else names[x]

    return {
        "flavor": w.flavor,
        "vertices": [label(x) for x in w.vertices],
        "edges": sorted(sorted([label(a), label(b)]) for a, b in w.edges),
    }


# principal vertices -----------------------------------------------------

class Marker(str, Enum):
    UNSUPPORTED = "unsupported"
    INCONCLUSIVE = "inconclusive"


def principal_vertices(g: GraphMap, pnp_status: Verdict, gs: GateStructure | None = None):
    """Periodic vertices with at least three periodic directions (PNP-free case only)."""
    if pnp_status is Verdict.INCONCLUSIVE:
        return Marker.INCONCLUSIVE
    if pnp_status is Verdict.YES:
        return Marker.UNSUPPORTED
    gs = gs or gate_structure(g)
    return [v for v in range(g.graph.num_vertices)
            if gs.vertex_period[v] and len(gs.periodic_directions(v)) >= 3]


# eigenrays and leaf segments --------------------------------------------

@dataclass(frozen=True)
class LeafSegment:
    path: Path
    seed: int
    depth: int
    step: int = 1   # power of g applied per depth unit


def eigenray_prefix(g: GraphMap, d: int, depth: int) -> LeafSegment:
    if derivative(g)[d] != d:
        raise ValueError(f"direction {g.graph.names[d]} is not fixed")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    p: Path = (d,)
    for _ in range(depth):
        p = apply(g, p)
    return LeafSegment(p, d, depth)


def leaf_segment(g: GraphMap, e: int, depth: int, gs: GateStructure | None = None) -> LeafSegment:
    gs = gs or gate_structure(g)
    k = gs.period[e]
    if not k:
        raise ValueError(f"direction {g.graph.names[e]} is not periodic")
    hk = power(g, k) if depth else g
    p: Path = (e,)
    for _ in range(depth):
        p = apply(hk, p)
    return LeafSegment(p, e, depth, k)


class TripodError(ValueError):
    pass


@dataclass(frozen=True)
class Tripod:
    vertex: int
    rays: tuple[LeafSegment, LeafSegment, LeafSegment]


def tripod_at(g: GraphMap, v: int, depth: int, seeds: Sequence[int] | None = None,
              pnp_status: Verdict = Verdict.NO) -> Tripod:
    """Three eigenray prefixes at ``v`` leaving through three distinct gates."""
    if pnp_status is not Verdict.NO:
        raise TripodError("tripod needs a PNP-free map")
    _check_vertex(g, v)
    gs = gate_structure(g)
    dg = derivative(g)
    fixed = [d for d in g.graph.directions_at(v) if dg[d] == d]
    if g.vertex_image[v] != v or len(fixed) < 3:
        raise TripodError(f"fewer than 3 fixed directions at {g.graph.vertices[v]}")
    if seeds is None:
        seeds, used = [], set()
        for d in fixed:
            if gs.gate_of[d] not in used:
                used.add(gs.gate_of[d])
                seeds.append(d)
        if len(seeds) < 3:
            raise TripodError("fixed directions lie in fewer than 3 gates")
        seeds = seeds[:3]
    seeds = list(seeds)
    if len(seeds) != 3 or any(d not in fixed for d in seeds):
        raise TripodError("seeds must be three fixed directions at v")
    if len({gs.gate_of[d] for d in seeds}) != 3:
        raise TripodError("seeds must lie in distinct gates")
    rays = tuple(eigenray_prefix(g, d, depth) for d in seeds)
    # in the universal cover the lifted rays leave v through distinct edges,
    # so they meet only at the lift of v
    for i in range(3):
        for j in range(i + 1, 3):
            if rays[i].path[0] == rays[j].path[0]:
                raise TripodError("rays share an initial edge")
    return Tripod(v, rays)
