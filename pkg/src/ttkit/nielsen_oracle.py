"""Exhaustive enumeration of iNP leg pairs, independent of the eigenray search.

For every illegal turn of ``h = g^k`` the two legs are grown edge by edge as
legal paths.  Until the ``h``-images of the legs disagree, the leg whose
image is exhausted is extended.  Once they disagree after a common prefix
``P``, the leg length is forced to ``x = |P| / (lambda_h - 1)`` and each leg
must reappear in its own image right after ``P``.  Only meant for small
fixtures; cost grows quickly with the critical constant.
"""
from __future__ import annotations

from typing import Sequence

from .graph import make_turn
from .graphmap import GraphMap, power
from .pf import PFData
from .traintrack import gate_structure

_EPS = 1e-9


def _lcp(u: Sequence[int], v: Sequence[int]) -> int:
    n = min(len(u), len(v))
    i = 0
    while i < n and u[i] == v[i]:
        i += 1
    return i


def oracle_inps(g: GraphMap, pf: PFData, crit: float, k: int, node_limit: int = 2_000_000):
    """Set of ``(vertex, turn, frozenset{(leg_edges, fraction)})`` for iNPs of g^k."""
    gr = g.graph
    h = power(g, k)
    lam = pf.lam ** k
    ell = [pf.lengths[gr.edge_index(x)] for x in range(gr.num_half_edges)]
    gs = gate_structure(h)
    gate = gs.gate_of
    img = h.edge_image
    out = set()
    nodes = 0

    def L(p):
        return sum(ell[x] for x in p)

    def legal_next(leg):
        last = gr.reverse[leg[-1]]
        w = gr.terminus(leg[-1])
        return [e for e in gr.directions_at(w) if gate[e] != gate[last]]

    for d1, d2 in gs.illegal_turns:
        if d1 == d2:
            continue
        w = gr.origin[d1]
        stack = [((d1,), (d2,))]
        while stack:
            nodes += 1
            if nodes > node_limit:
                raise RuntimeError("oracle node limit reached")
            E, F = stack.pop()
            if L(E[:-1]) > crit + _EPS or L(F[:-1]) > crit + _EPS:
                continue
            hE = [x for y in E for x in img[y]]
            hF = [x for y in F for x in img[y]]
            p = _lcp(hE, hF)
            if p == min(len(hE), len(hF)):
                # images have not separated yet: extend the exhausted one
                if L(hE[:p]) > crit * (lam - 1.0) + _EPS:
                    continue
                if len(hE) <= len(hF):
                    stack.extend((E + (e,), F) for e in legal_next(E))
                else:
                    stack.extend((E, F + (e,)) for e in legal_next(F))
                continue
            x = L(hE[:p]) / (lam - 1.0)
            if x > crit + _EPS:
                continue
            status = []
            for leg, W in ((E, hE), (F, hF)):
                tail = W[p:p + len(leg)]
                if list(leg[:len(tail)]) != list(tail):
                    status.append("dead")
                elif L(leg[:-1]) >= x - _EPS:
                    status.append("dead")
                elif L(leg) < x - _EPS:
                    status.append("short")
                else:
                    status.append("covered" if len(tail) == len(leg) else "dead")
            if "dead" in status:
                continue
            if status == ["covered", "covered"]:
                legs = frozenset(
                    (leg, round((x - L(leg[:-1])) / ell[leg[-1]], 6)) for leg in (E, F))
                out.add((w, make_turn(d1, d2), legs))
                continue
            if status[0] == "short":
                stack.extend((E + (e,), F) for e in legal_next(E))
            else:
                stack.extend((E, F + (e,)) for e in legal_next(F))
    return out


def oracle_with_periods(g: GraphMap, pf: PFData, crit: float, max_period: int):
    """Map from iNP key to its minimal period over k = 1..max_period."""
    best = {}
    for k in range(1, max_period + 1):
        for key in oracle_inps(g, pf, crit, k):
            best.setdefault(key, k)
    return best


def descriptor_keys(result) -> dict:
    """Primary-route results in the oracle's key format."""
    return {(d.vertex, d.turn, frozenset((l.edges, round(l.fraction, 6)) for l in d.legs)): d.period
            for d in result.descriptors}
