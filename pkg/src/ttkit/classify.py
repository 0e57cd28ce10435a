"""Certification pipeline: ageometric full irreducibility, index, lone axis.

The index formula ``sum(1 - p(v)/2)`` over principal vertices and the lone
axis criterion (index ``3/2 - r`` plus an ideal Whitehead graph without cut
vertices) are imported results about ageometric fully irreducible outer
automorphisms; this module evaluates them, it does not prove them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .graph import Graph, Path, reverse_path, tighten
from .graphmap import GraphMap, compose, derivative, iterate_function, transition_matrix
from .nielsen import PNPResult, find_inps
from .pf import PFData, PFError, is_primitive, pf_eigen
from .traintrack import (GateStructure, Marker, WhiteheadGraph, gate_structure, is_train_track,
                         local_whitehead, principal_vertices, rotationless_power, stable_whitehead)
from .verdict import Verdict, all_of


class ClassifyError(ValueError):
    pass


# index and ideal Whitehead graph ---------------------------------------

def rotationless_index(g: GraphMap, pnp: Verdict = Verdict.NO,
                       gs: GateStructure | None = None) -> Fraction:
    """Sum of ``1 - p(v)/2`` over principal vertices, read off the rotationless power.

    Periodic data of ``g`` and of its rotationless power coincide, so no
    power is formed explicitly.
    """
    gs = gs or gate_structure(g)
    pv = principal_vertices(g, pnp, gs)
    if pv is Marker.UNSUPPORTED:
        raise ClassifyError("index refused: periodic Nielsen paths present")
    if pv is Marker.INCONCLUSIVE:
        raise ClassifyError("index refused: PNP status inconclusive")
    return sum((1 - Fraction(len(gs.periodic_directions(v)), 2) for v in pv), Fraction(0))


def ideal_whitehead_graph(g: GraphMap, pnp: Verdict = Verdict.NO,
                          gs: GateStructure | None = None) -> WhiteheadGraph:
    """Disjoint union of stable Whitehead graphs over principal vertices."""
    gs = gs or gate_structure(g)
    pv = principal_vertices(g, pnp, gs)
    if not isinstance(pv, list):
        raise ClassifyError("ideal Whitehead graph needs a PNP-free map")
    verts, edges = [], set()
    for v in pv:
        sw = stable_whitehead(g, v, gs)
        verts.extend((v, d) for d in sw.vertices)
        edges.update(((v, a), (v, b)) for a, b in sw.edges)
    return WhiteheadGraph("ideal", tuple(verts), frozenset(edges))


def has_cut_vertex(w: WhiteheadGraph | nx.Graph) -> bool:
    gx = w.to_networkx() if isinstance(w, WhiteheadGraph) else w
    return any(True for _ in nx.articulation_points(gx))


# structural corroboration ----------------------------------------------

@dataclass(frozen=True)
class StructureCheck:
    all_principal: bool
    all_fixed: bool
    non_fixed_directions: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.all_principal and self.all_fixed and len(self.non_fixed_directions) == 1


def structure_on_rotationless_power(g: GraphMap, gs: GateStructure | None = None) -> StructureCheck:
    """Vertex and direction data of ``g^R``, computed from orbits of ``g`` and ``Dg``."""
    gs = gs or gate_structure(g)
    R = rotationless_power(g, gs)
    dg = derivative(g)
    gr = g.graph
    fixed_v = [iterate_function(g.vertex_image, v, R) == v for v in range(gr.num_vertices)]
    fixed_d = [iterate_function(dg, d, R) == d for d in range(gr.num_half_edges)]
    principal = all(fixed_v[v] and sum(fixed_d[d] for d in gr.directions_at(v)) >= 3
                    for v in range(gr.num_vertices))
    return StructureCheck(principal, all(fixed_v),
                          tuple(d for d in range(gr.num_half_edges) if not fixed_d[d]))


# isometries ------------------------------------------------------------

def graph_automorphisms(graph: Graph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All (vertex permutation, half-edge permutation) pairs preserving incidence."""
    n = graph.num_half_edges
    reps = list(graph.edges)
    rev = graph.reverse
    org = graph.origin
    out = []
    sigma = [-1] * n
    pi: list[int] = [-1] * graph.num_vertices
    used = [False] * n
    vused = [False] * graph.num_vertices

    def bind(v, w, undo):
        if pi[v] == -1:
            if vused[w]:
                return False
            pi[v] = w
            vused[w] = True
            undo.append(v)
            return True
        return pi[v] == w

    def rec(i):
        if i == len(reps):
            out.append((tuple(pi), tuple(sigma)))
            return
        h = reps[i]
        for t in range(n):
            if used[t] or used[rev[t]]:
                continue
            undo: list[int] = []
            if bind(org[h], org[t], undo) and bind(org[rev[h]], org[rev[t]], undo):
                sigma[h], sigma[rev[h]] = t, rev[t]
                used[t] = used[rev[t]] = True
                rec(i + 1)
                used[t] = used[rev[t]] = False
                sigma[h] = sigma[rev[h]] = -1
            for v in undo:
                vused[pi[v]] = False
                pi[v] = -1

    rec(0)
    return out


def isometry_map(graph: Graph, pi, sigma, name: str = "h") -> GraphMap:
    return GraphMap(graph, tuple(pi), tuple((s,) for s in sigma), name)


def commuting_isometries(g: GraphMap) -> list[GraphMap]:
    """Graph isometries h with h o g = g o h exactly as edge maps."""
    out = []
    for pi, sigma in graph_automorphisms(g.graph):
        h = isometry_map(g.graph, pi, sigma)
        a, b = compose(h, g), compose(g, h)
        if a.vertex_image == b.vertex_image and a.edge_image == b.edge_image:
            out.append(h)
    return out


def map_order(h: GraphMap, limit: int = 10_000) -> int:
    x = h
    for k in range(1, limit + 1):
        if x.vertex_image == tuple(range(h.graph.num_vertices)) and \
                all(img == (i,) for i, img in enumerate(x.edge_image)):
            return k
        x = compose(h, x)
    raise ClassifyError("order exceeds limit")


# reverser witnesses ----------------------------------------------------

@dataclass(frozen=True)
class ReverserWitness:
    """``h o g`` agrees with ``inverse o h`` after twisting by ``twist``.

    ``twist[v]`` runs from ``(h o g)(v)`` to ``(inverse o h)(v)``.  For
    single-vertex graphs a plain path may be given.  ``inverse`` must be a
    homotopy inverse of ``g`` up to an inner twist, which is checked too.
    """
    h: GraphMap
    inverse: GraphMap
    twist: Path | dict
    inverse_twist: Path | dict | None = None


def _twists(graph: Graph, twist) -> dict[int, Path]:
    if isinstance(twist, dict):
        return {v: tuple(p) for v, p in twist.items()}
    return {v: tuple(twist) for v in range(graph.num_vertices)}


def _twisted_equal(f: GraphMap, target: GraphMap, twist: dict[int, Path]) -> bool:
    gr = f.graph
    for e in gr.edges:
        wo, wt = twist.get(gr.origin[e], ()), twist.get(gr.terminus(e), ())
        lhs = tighten(gr, reverse_path(gr, wo) + f.edge_image[e] + wt)
        if lhs != target.edge_image[e]:
            return False
    return True


def _inner_twist_for_rose(f: GraphMap):
    """A path w with ``f(e) = w . e . wbar`` for every edge, or None.

    A reduced w cannot end in both letters of two different edges, so it is
    a prefix of f(e) for some edge e; those prefixes are all tried.
    """
    gr = f.graph
    ident = GraphMap(gr, (0,) * gr.num_vertices, tuple((h,) for h in range(gr.num_half_edges)))
    for e in gr.edges:
        img = f.edge_image[e]
        for cut in range(len(img) + 1):
            if _twisted_equal(f, ident, {0: img[:cut]}):
                return img[:cut]
    return None


def verify_reverser(g: GraphMap, w: ReverserWitness) -> tuple[bool, str]:
    gr = g.graph
    if w.h.graph != gr or w.inverse.graph != gr:
        return False, "witness maps live on a different graph"
    if any(len(x) != 1 for x in w.h.edge_image):
        return False, "h is not a graph isometry"
    if not _twisted_equal(compose(w.h, g), compose(w.inverse, w.h), _twists(gr, w.twist)):
        return False, "h o g and inverse o h differ after the twist"
    ig = compose(w.inverse, g)
    ident = GraphMap(gr, tuple(range(gr.num_vertices)), tuple((h,) for h in range(gr.num_half_edges)))
    if w.inverse_twist is not None:
        ok = _twisted_equal(ig, ident, _twists(gr, w.inverse_twist))
    elif gr.num_vertices == 1:
        ok = _inner_twist_for_rose(ig) is not None
    else:
        return False, "inverse twist required on graphs with several vertices"
    if not ok:
        return False, "inverse o g is not inner"
    return True, "verified"


# certificate -----------------------------------------------------------

@dataclass
class Certificate:
    map: GraphMap
    rank: int
    train_track: bool
    train_track_reason: str = ""
    primitive: bool = False
    local_wh_connected: bool = False
    pnp: Verdict = Verdict.INCONCLUSIVE
    pnp_result: PNPResult | None = None
    pnp_source: str = ""
    ageometric_fi: Verdict = Verdict.INCONCLUSIVE
    rotationless_power: int = 1
    pf: PFData | None = None
    index: Fraction | None = None
    ideal_wg: WhiteheadGraph | None = None
    ideal_cut_vertex: bool | None = None
    lone_axis: Verdict = Verdict.INCONCLUSIVE
    structure: StructureCheck | None = None
    consistent: bool = True
    report: "TheoremReport | None" = None
    warnings: list[str] = field(default_factory=list)


def certify_ageometric_fi(g: GraphMap, budget: int | None = None,
                          pnp_source: GraphMap | None = None) -> Certificate:
    """Train track, primitive matrix, connected local Whitehead graphs, no PNPs.

    When ``pnp_source`` is given (a base map, some power of which this map
    lifts), its PNP verdict is used: a PNP of a lift projects to one of
    the base map.
    """
    gr = g.graph
    tt = is_train_track(g)
    cert = Certificate(g, gr.rank, bool(tt), tt.reason)
    if not tt:
        cert.ageometric_fi = Verdict.NO
        cert.lone_axis = Verdict.NO
        cert.pnp = Verdict.INCONCLUSIVE
        return cert
    gs = gate_structure(g)
    m = transition_matrix(g)
    cert.primitive = is_primitive(m)
    cert.rotationless_power = rotationless_power(g, gs)
    cert.local_wh_connected = all(local_whitehead(g, v, gs).is_connected()
                                  for v in range(gr.num_vertices))
    if cert.primitive:
        try:
            cert.pf = pf_eigen(m)
        except PFError as exc:
            cert.warnings.append(f"PF data unavailable: {exc}")
    expanding = cert.pf is not None and cert.pf.lam > 1.0
    if cert.primitive and expanding:
        src = pnp_source or g
        res = find_inps(src, budget, None if pnp_source is not None else cert.pf)
        cert.pnp_result = res
        cert.pnp = res.status
        cert.pnp_source = src.name
        if pnp_source is not None:
            cert.warnings.append(f"PNP status inherited from base map {src.name}")
        if res.status is Verdict.INCONCLUSIVE:
            cert.warnings.append("PNP search inconclusive: " + res.reason)
    else:
        cert.pnp = Verdict.INCONCLUSIVE
        cert.warnings.append("PNP search skipped: map is not an expanding primitive train track")
    cert.ageometric_fi = all_of([cert.train_track, cert.primitive, cert.local_wh_connected,
                                 _negate(cert.pnp)])
    return cert


def _negate(v: Verdict) -> Verdict:
    return {Verdict.YES: Verdict.NO, Verdict.NO: Verdict.YES}.get(v, Verdict.INCONCLUSIVE)


def check_lone_axis(cert: Certificate) -> tuple[Verdict, StructureCheck | None, bool]:
    """Criterion verdict, structural data (when ageometric) and their agreement."""
    if cert.ageometric_fi is not Verdict.YES:
        return cert.ageometric_fi if cert.ageometric_fi is Verdict.INCONCLUSIVE else Verdict.NO, None, True
    r = cert.rank
    crit = (cert.index == Fraction(3, 2) - r) and cert.ideal_cut_vertex is False
    verdict = Verdict.of(crit)
    structure = structure_on_rotationless_power(cert.map)
    return verdict, structure, structure.holds == crit


def classify(g: GraphMap, budget: int | None = None, pnp_source: GraphMap | None = None,
             reverser: ReverserWitness | None = None) -> Certificate:
    cert = certify_ageometric_fi(g, budget, pnp_source)
    if cert.train_track and cert.pnp is Verdict.NO:
        gs = gate_structure(g)
        cert.index = rotationless_index(g, cert.pnp, gs)
        cert.ideal_wg = ideal_whitehead_graph(g, cert.pnp, gs)
        cert.ideal_cut_vertex = has_cut_vertex(cert.ideal_wg)
    cert.lone_axis, cert.structure, cert.consistent = check_lone_axis(cert)
    if not cert.consistent:
        cert.warnings.append("internal inconsistency: lone-axis criterion and vertex structure disagree")
    cert.report = theorem_report(cert, reverser)
    return cert


# theorem report --------------------------------------------------------

@dataclass(frozen=True)
class TheoremReport:
    lines: tuple[str, ...]
    case: str                  # "undetermined", "two-ended", or "declined"
    reverser: str | None = None


def theorem_report(cert: Certificate, reverser: ReverserWitness | None = None) -> TheoremReport:
    if cert.lone_axis is not Verdict.YES:
        why = "inconclusive" if cert.lone_axis is Verdict.INCONCLUSIVE else "not satisfied"
        return TheoremReport((f"lone axis {why}: no centralizer or normalizer conclusion drawn",),
                             "declined")
    lines = [
        "Cen(<phi>) = Stab(Lambda+_phi), infinite cyclic",
        "Stab(Lambda+_phi) has index at most 2 in Comm(<phi>) = N(<phi>)",
    ]
    if reverser is None:
        lines.append("N(<phi>) is infinite cyclic or Z/2 * Z/2; case undetermined by this toolkit")
        return TheoremReport(tuple(lines), "undetermined")
    ok, why = verify_reverser(cert.map, reverser)
    if not ok:
        lines.append(f"reverser witness rejected ({why}); case undetermined")
        return TheoremReport(tuple(lines), "undetermined", why)
    lines += [
        "reverser verified: phi is conjugate to its inverse, N(<phi>) = Z/2 * Z/2",
        "phi^-1 is then ageometric fully irreducible with a lone axis as well",
    ]
    return TheoremReport(tuple(lines), "two-ended", why)
