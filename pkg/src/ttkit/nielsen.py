"""Bounded cancellation and detection of indivisible periodic Nielsen paths.

An indivisible Nielsen path of ``h = g^k`` is ``rho = abar . b`` whose legs
``a`` and ``b`` leave a vertex ``w`` through an illegal turn and satisfy
``h(a) = gamma . a`` and ``h(b) = gamma . b``.  Read from the far endpoints,
each reversed leg is an initial segment of the eigenray of ``h`` at an
``h``-fixed germ, and after ``w`` the two eigenrays agree for length
``(lambda_h - 1) x`` where ``x`` is the common leg length.  The search
enumerates fixed germs, grows their eigenrays lazily up to the critical
radius and looks for such merges.  Leg lengths are bounded by the critical
constant ``2 BCC(g) / (lambda - 1)``, which also bounds every power of g.
"""
from __future__ import annotations

import os
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Path, Turn, make_turn, reverse_path, tighten
from .graphmap import GraphMap, apply, power, transition_matrix
from .pf import PFData, is_primitive, pf_eigen
from .traintrack import gate_structure, is_train_track, rotationless_power
from .verdict import Verdict

DEFAULT_BUDGET = 2_000_000
COORD_TOL = 1e-6
_EPS = 1e-9


class NielsenError(ValueError):
    pass


def default_budget() -> int:
    raw = os.environ.get("TTKIT_BUDGET")
    if raw:
        try:
            return max(0, int(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


# bounded cancellation ---------------------------------------------------

@dataclass(frozen=True)
class BCCBound:
    value: float
    method: str
    lam: float
    volume: float


def bcc_bound(g: GraphMap, pf: PFData) -> BCCBound:
    """Coarse bounded-cancellation bound ``max(lam/(lam-1), lam) * vol``.

    ``g`` stretches every edge by exactly ``lam`` in the PF metric, so the
    part of ``g(alpha)`` cancelled against ``g(beta)`` is at most ``lam`` times
    a loop-free backtrack within one edge image chain; the ``lam`` term
    covers high powers where one whole edge image can cancel.
    """
    if not pf.lam > 1.0:
        raise NielsenError("bounded cancellation needs an expanding map")
    lam = pf.lam
    vol = pf.volume
    return BCCBound(max(lam / (lam - 1.0), lam) * vol, "coarse", lam, vol)


def critical_constant(bcc: BCCBound) -> float:
    return 2.0 * bcc.value / (bcc.lam - 1.0)


def path_length(lengths: Sequence[float], graph, p: Sequence[int]) -> float:
    return float(sum(lengths[graph.edge_index(h)] for h in p))


def cancellation(g: GraphMap, lengths: Sequence[float], alpha: Path, beta: Path) -> float:
    """PF length of ``g#(alpha)`` lost when tightening ``g#(alpha) . g#(beta)``."""
    gr = g.graph
    ga, gb = apply(g, alpha), apply(g, beta)
    t = tighten(gr, ga + gb)
    la, lb, lt = (path_length(lengths, gr, p) for p in (ga, gb, t))
    return (la + lb - lt) / 2.0


# germs and eigenrays ---------------------------------------------------

@dataclass(frozen=True)
class Germ:
    """An ``h``-fixed germ.

    kind "vertex": the direction ``d`` at the fixed vertex ``origin(d)``.
    kind "edge": the interior fixed point of edge ``d`` at distance ``t`` from
    ``origin(d)``, pointing toward ``origin(d)``; it comes from the occurrence
    of ``d`` at position ``occurrence`` in ``h(d)``.
    """
    kind: str
    d: int
    occurrence: int = -1
    t: float = 0.0

    def same_point(self, other: "Germ") -> bool:
        return (self.kind == other.kind and self.d == other.d
                and abs(self.t - other.t) <= 1e-7 * max(1.0, self.t))


def fixed_germs(h: GraphMap, lengths: Sequence[float], lam_h: float) -> list[Germ]:
    gr = h.graph
    out = []
    for d in range(gr.num_half_edges):
        img = h.edge_image[d]
        if img[0] == d and h.vertex_image[gr.origin[d]] == gr.origin[d]:
            out.append(Germ("vertex", d))
    for d in range(gr.num_half_edges):
        img = h.edge_image[d]
        s = 0.0
        for i, x in enumerate(img):
            # positions 0 and len-1 are the vertex germs at the ends of d
            if 0 < i < len(img) - 1 and x == d:
                out.append(Germ("edge", d, i, s / (lam_h - 1.0)))
            s += lengths[gr.edge_index(x)]
    return out


class BudgetExceeded(Exception):
    pass


class _Counter:
    def __init__(self, budget: int):
        self.left = budget
        self.used = 0

    def spend(self, n: int) -> None:
        self.used += n
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded


@dataclass
class Ray:
    germ: Germ
    pieces: list[int]          # half-edges; the first is partial for edge germs
    first_len: float           # PF length of the first piece
    stops: list[float]         # distance from the germ point to the end of each piece


def _prefix_by_length(word: Sequence[int], lens: Sequence[float], target: float) -> list[int]:
    out, s = [], 0.0
    for x in word:
        if s >= target:
            break
        out.append(x)
        s += lens[x]
    return out


def build_ray(h: GraphMap, germ: Germ, hlens: Sequence[float], lam_h: float,
              length: float, counter: _Counter) -> Ray:
    """Eigenray of ``h`` at ``germ`` up to PF length ``length`` (lazily)."""
    gr = h.graph
    if germ.kind == "vertex":
        pieces = [germ.d]
        first = hlens[germ.d]
        block = list(h.edge_image[germ.d][1:])
    else:
        pieces = [gr.reverse[germ.d]]
        first = germ.t
        block = list(reverse_path(gr, h.edge_image[germ.d][:germ.occurrence]))
    counter.spend(len(block) + 1)
    total = first
    blocks = []
    while block and total < length:
        blen = sum(hlens[x] for x in block)
        if total + blen >= length:
            block = _prefix_by_length(block, hlens, length - total + _EPS)
            blocks.append(block)
            break
        blocks.append(block)
        total += blen
        remaining = length - total
        # the next block h(block) has length lam_h * blen; only a prefix is needed
        src = block if lam_h * blen <= remaining else _prefix_by_length(block, hlens, remaining / lam_h + _EPS)
        nxt = [x for y in src for x in h.edge_image[y]]
        counter.spend(len(nxt))
        block = nxt
    total = first
    stops = [first]
    for b in blocks:
        for x in b:
            pieces.append(x)
            total += hlens[x]
            stops.append(total)
    return Ray(germ, pieces, first, stops)


# descriptors -----------------------------------------------------------

@dataclass(frozen=True)
class Leg:
    edges: Path            # from the illegal turn toward the endpoint
    fraction: float        # position of the endpoint inside the last edge (1 = its terminus)
    occurrence: int = -1   # for interior endpoints: index of the last edge inside h(last edge)

    def key(self):
        return (self.edges, round(self.fraction, 6))


@dataclass(frozen=True)
class INPDescriptor:
    vertex: int
    turn: Turn
    legs: tuple[Leg, Leg]
    gamma: Path
    period: int
    length: float          # common PF length of the legs
    germs: tuple[Germ, Germ] = field(compare=False, default=None)

    def key(self):
        return (self.vertex, self.turn, frozenset(l.key() for l in self.legs))

    def rho(self, graph) -> Path | None:
        """The path itself when both endpoints are vertices."""
        if any(l.fraction < 1.0 - 1e-9 for l in self.legs):
            return None
        a, b = self.legs
        return reverse_path(graph, a.edges) + b.edges


@dataclass(frozen=True)
class PNPResult:
    status: Verdict
    descriptors: tuple[INPDescriptor, ...] = ()
    orbits: tuple[tuple[int, ...], ...] = ()
    periods: tuple[int, ...] = ()
    letters: int = 0
    critical: float = 0.0
    reason: str = ""

    @property
    def found(self) -> bool:
        return bool(self.descriptors)


def _leg_from_ray(gr, ray: Ray, upto: int, hlens: Sequence[float]) -> Leg:
    """Leg from the vertex at the end of piece ``upto`` back to the germ point."""
    body = ray.pieces[1:upto + 1]
    if ray.germ.kind == "vertex":
        edges = reverse_path(gr, [ray.pieces[0]] + body)
        return Leg(edges, 1.0)
    e = ray.germ.d
    frac = ray.germ.t / hlens[e]
    return Leg(reverse_path(gr, body) + (e,), frac, ray.germ.occurrence)


def _merge(gr, hlens, rp: Ray, rq: Ray, lam_h: float, crit: float, gates, k: int):
    """Yield descriptors for merges of two eigenrays."""
    xs_q = rq.stops
    for ip, x in enumerate(rp.stops):
        if x > crit + _EPS:
            break
        j = bisect_left(xs_q, x - _EPS * max(1.0, x))
        if j >= len(xs_q) or abs(xs_q[j] - x) > _EPS * max(1.0, x):
            continue
        iq = j
        w = gr.terminus(rp.pieces[ip])
        if gr.terminus(rq.pieces[iq]) != w:
            continue
        d1, d2 = gr.reverse[rp.pieces[ip]], gr.reverse[rq.pieces[iq]]
        if d1 == d2:
            continue
        # the rays must agree for length (lam_h - 1) x after w
        need = (lam_h - 1.0) * x
        s = 0.0
        a, b = ip + 1, iq + 1
        common = []
        ok = True
        while s < need - _EPS * max(1.0, need):
            if a >= len(rp.pieces) or b >= len(rq.pieces):
                ok = False
                break
            if rp.pieces[a] != rq.pieces[b]:
                ok = False
                break
            common.append(rp.pieces[a])
            s += hlens[rp.pieces[a]]
            a += 1
            b += 1
        if not ok or abs(s - need) > 1e-7 * max(1.0, need):
            continue
        if gates[d1] != gates[d2]:
            raise NielsenError("merged eigenrays meet at a legal turn")
        la = _leg_from_ray(gr, rp, ip, hlens)
        lb = _leg_from_ray(gr, rq, iq, hlens)
        legs, germs = (la, lb), (rp.germ, rq.germ)
        if lb.edges[0] < la.edges[0]:
            legs, germs = (lb, la), (rq.germ, rp.germ)
        gamma = reverse_path(gr, common)
        yield INPDescriptor(w, make_turn(d1, d2), legs, gamma, k, x, germs)


def inps_of_power(g: GraphMap, k: int, pf: PFData, crit: float, counter: _Counter,
                  hmap: GraphMap | None = None) -> list[INPDescriptor]:
    """All iNPs of ``g^k`` (both germs fixed by ``g^k``)."""
    gr = g.graph
    h = hmap or power(g, k)
    lam_h = pf.lam ** k
    hlens = [pf.lengths[gr.edge_index(x)] for x in range(gr.num_half_edges)]
    gs = gate_structure(g)
    germs = [gm for gm in fixed_germs(h, pf.lengths, lam_h) if gm.t <= crit + _EPS]
    rays = [build_ray(h, gm, hlens, lam_h, lam_h * crit + 1.0, counter) for gm in germs]
    found = []
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            found.extend(_merge(gr, hlens, rays[i], rays[j], lam_h, crit, gs.gate_of, k))
    return found


def verify_descriptor(g: GraphMap, d: INPDescriptor, pf: PFData, tol: float = COORD_TOL) -> list[str]:
    """Re-check a descriptor; returns a list of failures (empty when valid)."""
    gr = g.graph
    h = power(g, d.period)
    lam_h = pf.lam ** d.period
    gs = gate_structure(g)
    problems = []
    lens = [pf.lengths[gr.edge_index(x)] for x in range(gr.num_half_edges)]
    a, b = d.legs
    if make_turn(a.edges[0], b.edges[0]) != d.turn or a.edges[0] == b.edges[0]:
        problems.append("legs do not start at the turn")
    if gs.is_legal_turn(d.turn):
        problems.append("turn is legal")
    glen = sum(lens[x] for x in d.gamma)
    for leg in d.legs:
        if gr.origin[leg.edges[0]] != d.vertex:
            problems.append("leg does not start at the turn vertex")
        for x, y in zip(leg.edges, leg.edges[1:]):
            if not gs.is_legal_turn(make_turn(gr.reverse[x], y)):
                problems.append("leg is not legal")
        body, last = leg.edges[:-1], leg.edges[-1]
        x_len = sum(lens[e] for e in body) + leg.fraction * lens[last]
        if abs(x_len - d.length) > tol:
            problems.append("leg lengths disagree")
        if leg.fraction >= 1.0 - 1e-12:
            lhs = apply(h, leg.edges)
            if lhs != tighten(gr, d.gamma + leg.edges):
                problems.append("h(leg) != gamma . leg")
        else:
            img = h.edge_image[last]
            i = leg.occurrence
            if not 0 < i < len(img) or img[i] != last:
                problems.append("bad occurrence for interior endpoint")
            else:
                lhs = tighten(gr, apply(h, body) + img[:i])
                if lhs != tighten(gr, d.gamma + body):
                    problems.append("h(leg) != gamma . leg")
        if abs(lam_h * x_len - (x_len + glen)) > tol:
            problems.append("affine endpoint equation fails")
    rho = d.rho(gr)
    if rho is not None and apply(h, rho) != rho:
        problems.append("h(rho) does not tighten to rho")
    return problems


def _germ_image(g: GraphMap, lengths, lam: float, germ: Germ) -> Germ:
    """Image of an h-fixed germ under g (as a point and direction)."""
    gr = g.graph
    if germ.kind == "vertex":
        return Germ("vertex", g.edge_image[germ.d][0])
    # g is affine of slope lam on d; interior h-fixed points stay interior
    target = germ.t * lam
    s = 0.0
    for x in g.edge_image[germ.d]:
        ell = lengths[gr.edge_index(x)]
        if s + ell > target:
            # the germ pointed toward origin(d), so it now points back along g(d)
            return Germ("edge", x, -1, target - s)
        s += ell
    raise NielsenError("germ image fell off the edge image")


def _orbits(g: GraphMap, pf: PFData, descs: list[INPDescriptor]) -> list[tuple[int, ...]]:
    parent = list(range(len(descs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, d in enumerate(descs):
        img = tuple(_germ_image(g, pf.lengths, pf.lam, gm) for gm in d.germs)
        for j, e in enumerate(descs):
            if e.period == d.period and _same_pair(img, e.germs):
                parent[find(i)] = find(j)
                break
        else:
            raise NielsenError("image of an iNP was not found among the iNPs")
    groups: dict[int, list[int]] = {}
    for i in range(len(descs)):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(v) for v in groups.values())


def _same_pair(p, q) -> bool:
    return ((p[0].same_point(q[0]) and p[1].same_point(q[1]))
            or (p[0].same_point(q[1]) and p[1].same_point(q[0])))


def _germ_geometry(gm: Germ):
    return (gm.kind, gm.d, round(gm.t, 7))


def find_inps(g: GraphMap, budget: int | None = None, pf: PFData | None = None,
              max_period: int | None = None) -> PNPResult:
    """iNPs of g, g^2, ..., g^R with their minimal periods, grouped into g#-orbits."""
    budget = default_budget() if budget is None else budget
    tt = is_train_track(g)
    if not tt:
        raise NielsenError("PNP search needs a train track map: " + tt.reason)
    m = transition_matrix(g)
    if not is_primitive(m):
        raise NielsenError("PNP search needs a primitive transition matrix")
    pf = pf or pf_eigen(m)
    if not pf.lam > 1.0:
        raise NielsenError("PNP search needs an expanding map")
    crit = critical_constant(bcc_bound(g, pf))
    R = max_period or rotationless_power(g)
    if budget <= 0:
        return PNPResult(Verdict.INCONCLUSIVE, critical=crit, reason="zero budget")
    counter = _Counter(budget)
    best: dict = {}
    searched = []
    try:
        h = g
        for k in range(1, R + 1):
            if k > 1:
                h = GraphMap(g.graph, *_compose_tables(g, h))
            counter.spend(sum(len(x) for x in h.edge_image))
            for d in inps_of_power(g, k, pf, crit, counter, hmap=h):
                key = frozenset(_germ_geometry(gm) for gm in d.germs) | {("w", d.vertex, d.turn)}
                if key not in best:
                    best[key] = d
            searched.append(k)
    except BudgetExceeded:
        return PNPResult(Verdict.INCONCLUSIVE, periods=tuple(searched), letters=counter.used,
                         critical=crit, reason=f"budget of {budget} letters exhausted at period "
                                               f"{len(searched) + 1}")
    descs = sorted(best.values(), key=lambda d: (d.period, d.vertex, d.turn, d.legs[0].edges,
                                                  d.legs[1].edges))
    for d in descs:
        bad = verify_descriptor(g, d, pf)
        if bad:
            raise NielsenError("descriptor failed re-verification: " + "; ".join(bad))
    orbits = _orbits(g, pf, descs) if descs else []
    status = Verdict.YES if descs else Verdict.NO
    return PNPResult(status, tuple(descs), tuple(orbits), tuple(searched), counter.used, crit)


def _compose_tables(g: GraphMap, h: GraphMap):
    # g o h without re-validation overhead beyond GraphMap's own checks
    gr = g.graph
    imgs = tuple(tighten(gr, (x for y in h.edge_image[e] for x in g.edge_image[y]))
                 for e in range(gr.num_half_edges))
    vimg = tuple(g.vertex_image[w] for w in h.vertex_image)
    return vimg, imgs


def has_pnp(g: GraphMap, budget: int | None = None, pf: PFData | None = None) -> Verdict:
    return find_inps(g, budget, pf).status
