"""Half-edge graphs, edge paths, turns and tightening.

Half-edges are dense integers.  Graphs built with :meth:`Graph.from_edges`
use the convention that edge ``i`` has positive half-edge ``2*i`` and
reverse ``2*i + 1``; a general :class:`Graph` may carry any involution,
which :func:`validate_graph` checks.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Path = tuple[int, ...]
Turn = tuple[int, int]


class GraphError(ValueError):
    """Structural defect in a graph (fatal)."""


class PathError(ValueError):
    pass


def reverse_name(name: str) -> str:
    if len(name) == 1 and name.islower():
        return name.upper()
    return "~" + name


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    origin: tuple[int, ...]
    reverse: tuple[int, ...]
    names: tuple[str, ...]
    # one representative half-edge per unoriented edge, in declaration order
    edges: tuple[int, ...]
    name: str = "G"
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {n: h for h, n in enumerate(self.names)})

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[tuple[str, str, str]],
                   name: str = "G", validate: bool = True) -> "Graph":
        """Build a graph from ``(edge_name, origin_name, terminus_name)`` triples."""
        vid = {v: i for i, v in enumerate(vertices)}
        if len(vid) != len(vertices):
            raise GraphError("duplicate vertex name")
        origin, names = [], []
        for ename, o, t in edges:
            if o not in vid or t not in vid:
                raise GraphError(f"edge {ename!r} uses an undeclared vertex")
            origin += [vid[o], vid[t]]
            names += [ename, reverse_name(ename)]
        if len(set(names)) != len(names):
            raise GraphError("duplicate edge name")
        n = len(origin)
        g = cls(tuple(vertices), tuple(origin), tuple(h ^ 1 for h in range(n)),
                tuple(names), tuple(range(0, n, 2)), name)
        if validate:
            validate_graph(g)
        return g

    # basic incidence ------------------------------------------------------
    @property
    def num_half_edges(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def terminus(self, h: int) -> int:
        return self.origin[self.reverse[h]]

    def directions_at(self, v: int) -> list[int]:
        return [h for h, o in enumerate(self.origin) if o == v]

    def valence(self, v: int) -> int:
        return sum(1 for o in self.origin if o == v)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges

    @property
    def rank(self) -> int:
        return 1 - self.euler_characteristic

    def edge_index(self, h: int) -> int:
        """Index of the unoriented edge carrying ``h``."""
        return self._edge_of()[h]

    def is_positive(self, h: int) -> bool:
        return self.edges[self.edge_index(h)] == h

    def _edge_of(self) -> dict[int, int]:
        cache = self.__dict__.get("_edge_cache")
        if cache is None:
            cache = {}
            for i, h in enumerate(self.edges):
                cache[h] = i
                cache[self.reverse[h]] = i
            object.__setattr__(self, "_edge_cache", cache)
        return cache

    # names ----------------------------------------------------------------
    def half_edge(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown half-edge {name!r}") from None

    def vertex(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def word(self, text: str) -> Path:
        """Parse a word such as ``"abA"`` or ``"a0 ~b1"`` into a path."""
        out: list[int] = []
        for token in text.split():
            if token in self._index:
                out.append(self._index[token])
            elif all(ch in self._index for ch in token):
                out.extend(self._index[ch] for ch in token)
            else:
                raise KeyError(f"cannot read {token!r} as edges of {self.name}")
        return tuple(out)

    def format(self, path: Sequence[int], sep: str | None = None) -> str:
        if sep is None:
            sep = "" if all(len(self.names[h]) == 1 for h in path) else " "
        return sep.join(self.names[h] for h in path)


@dataclass
class ValidationReport:
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return True


def validate_graph(g: Graph) -> ValidationReport:
    """Raise :class:`GraphError` on structural defects; collect valence warnings."""
    n = len(g.origin)
    if len(g.reverse) != n or len(g.names) != n:
        raise GraphError("half-edge tables have inconsistent lengths")
    if n == 0:
        raise GraphError("graph has no edges")
    for h in range(n):
        r = g.reverse[h]
        if not 0 <= r < n:
            raise GraphError(f"reverse of half-edge {h} out of range")
        if r == h:
            raise GraphError(f"half-edge {g.names[h]!r} is its own reverse")
        if g.reverse[r] != h:
            raise GraphError(f"reverse is not an involution at {g.names[h]!r}")
        if not 0 <= g.origin[h] < g.num_vertices:
            raise GraphError(f"origin of {g.names[h]!r} is not a vertex")
    covered = set(g.edges) | {g.reverse[h] for h in g.edges}
    if len(g.edges) * 2 != n or len(covered) != n:
        raise GraphError("edge representatives do not cover each half-edge pair once")

    seen = {0}
    queue = deque([0])
    adj: dict[int, list[int]] = {v: [] for v in range(g.num_vertices)}
    for h in range(n):
        adj[g.origin[h]].append(g.terminus(h))
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != g.num_vertices:
        raise GraphError("graph is not connected")

    report = ValidationReport()
    for v in range(g.num_vertices):
        val = g.valence(v)
        if val < 3:
            report.warnings.append(f"vertex {g.vertices[v]} has valence {val}")
    return report


# paths ------------------------------------------------------------------

def check_path(g: Graph, p: Sequence[int]) -> None:
    for h in p:
        if not 0 <= h < g.num_half_edges:
            raise PathError(f"half-edge {h} not in graph {g.name}")
    for x, y in zip(p, p[1:]):
        if g.terminus(x) != g.origin[y]:
            raise PathError(f"{g.names[x]} and {g.names[y]} are not incident")


def reverse_path(g: Graph, p: Sequence[int]) -> Path:
    rev = g.reverse
    return tuple(rev[h] for h in reversed(p))


def tighten(g: Graph, p: Iterable[int]) -> Path:
    """Free reduction: cancel every ``e`` followed by ``reverse(e)``."""
    rev = g.reverse
    stack: list[int] = []
    for h in p:
        if stack and stack[-1] == rev[h]:
            stack.pop()
        else:
            stack.append(h)
    return tuple(stack)


def is_tight(g: Graph, p: Sequence[int]) -> bool:
    rev = g.reverse
    return all(rev[x] != y for x, y in zip(p, p[1:]))


def make_turn(d1: int, d2: int) -> Turn:
    return (d1, d2) if d1 <= d2 else (d2, d1)


def turns_of(g: Graph, p: Sequence[int]) -> list[Turn]:
    """Interior turns ``{reverse(e_k), e_{k+1}}`` of a tight path."""
    if not is_tight(g, p):
        raise PathError("turns_of needs a tight path")
    return [make_turn(g.reverse[x], y) for x, y in zip(p, p[1:])]


def rose(rank: int, name: str | None = None) -> Graph:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if not 1 <= rank <= len(letters):
        raise GraphError("rose rank out of range")
    return Graph.from_edges(["v"], [(letters[i], "v", "v") for i in range(rank)],
                            name=name or f"R{rank}")
