"""Replays of the three worked examples as lists of named checks."""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from . import gl2
from .classify import classify, commuting_isometries, map_order
from .covers import (Voltage, build_cover, commutes_with_deck, deck_identity_holds, deck_power,
                     h1_action, is_homologically_nontrivial, lift_exists, lift_map)
from .graphmap import GraphMap, mat_pow, power, transition_matrix
from .mapfile import MapFile, parse
from .verdict import Verdict

PSI_A13 = ((7, 9, 12), (12, 16, 21), (9, 12, 16))
PSI_A16 = ((16, 21, 28), (28, 37, 49), (21, 28, 37))


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def load_data(name: str) -> MapFile:
    fname = name if name.endswith(".gm") else name + ".gm"
    return parse(resources.files("ttkit.data").joinpath(fname).read_text(encoding="utf-8"))


def psi() -> GraphMap:
    return load_data("psi").get("psi")


def fibonacci() -> GraphMap:
    return load_data("fibonacci").get("fib")


def _same(a: GraphMap, b: GraphMap) -> bool:
    return a.vertex_image == b.vertex_image and a.edge_image == b.edge_image


def example1() -> list[Check]:
    A, B, P = gl2.A, gl2.B, gl2.P
    out = [Check("A^2 = B", A ** 2 == B, str(A ** 2))]
    cpa = gl2.conj(P, A)
    out.append(Check("P A P^-1 = -A^-1", cpa == -A.inv(), str(cpa)))
    out.append(Check("P not in N(<A>)", gl2.normalizes(P, A).verdict is Verdict.NO))
    cpa2 = gl2.conj(P, A ** 2)
    out.append(Check("P A^2 P^-1 = A^-2", cpa2 == A ** -2, str(cpa2)))
    out.append(Check("P in N(<A^2>)", gl2.normalizes(P, A, 2).verdict is Verdict.YES))
    res = gl2.commensurates(P, A)
    out.append(Check("P commensurates <A> with (n, m) = (2, -2)", res.witness == (2, -2), str(res.witness)))
    rep = gl2.enumerate_box()
    out.append(Check("centralizing set = <A, -I> in the box", rep.centralizer_matches,
                     f"{len(rep.centralizing)} elements"))
    out.append(Check("commensurating set is at most 2 cosets", rep.cosets <= 2 and not rep.inconclusive,
                     f"{len(rep.commensurating)} elements, {rep.cosets} cosets"))
    out.append(Check("commensurating elements normalize <A^2>", rep.normalizes_square))
    return out


def example2() -> list[Check]:
    g = psi()
    m = transition_matrix(g)
    out = [Check("M(psi)^13 matches the printed matrix", mat_pow(m, 13) == PSI_A13, str(mat_pow(m, 13)))]
    g13 = power(g, 13)
    out.append(Check("M(psi^13) = M(psi)^13", transition_matrix(g13) == PSI_A13))
    mu = Voltage.parse(g.graph, "a=1,b=0,c=0", 3)
    cover = build_cover(g.graph, mu)
    out.append(Check("cover has 3 vertices, 9 edges, rank 7",
                     (cover.graph.num_vertices, cover.graph.num_edges, cover.graph.rank) == (3, 9, 7)))
    c = lift_exists(g13, mu)
    out.append(Check("psi^13 lifts with multiplier 1", c == 1, str(c)))
    out.append(Check("psi itself does not lift", lift_exists(g, mu) is None))
    w = lift_map(g13, cover, c)
    out.append(Check("lift fixes every fiber vertex", w.map.vertex_image == (0, 1, 2),
                     str([cover.graph.vertices[v] for v in w.map.vertex_image])))
    out.append(Check("lift commutes with T", commutes_with_deck(w)))
    T = cover.deck
    out.append(Check("T has order 3", map_order(T) == 3))
    out.append(Check("T^3 = id", _same(deck_power(cover, 3), deck_power(cover, 0))))
    out.append(Check("T acts nontrivially on H_1", is_homologically_nontrivial(T),
                     str(h1_action(T))))
    cert = classify(w.map, pnp_source=g)
    out.append(Check("lifted map is not lone axis", cert.lone_axis is not Verdict.YES,
                     f"lone_axis={cert.lone_axis}, index={cert.index}, rank={cert.rank}"))
    iso = commuting_isometries(w.map)
    orders = sorted(map_order(h) for h in iso)
    out.append(Check("commuting isometries contain T (order 3)",
                     any(_same(h, T) for h in iso) and 3 in orders, f"orders {orders}"))
    return out


def example3() -> list[Check]:
    g = psi()
    m = transition_matrix(g)
    out = [Check("M(psi)^16 matches the printed matrix", mat_pow(m, 16) == PSI_A16, str(mat_pow(m, 16)))]
    g16 = power(g, 16)
    mu = Voltage.parse(g.graph, "a=1,b=0,c=0", 7)
    cover = build_cover(g.graph, mu)
    out.append(Check("cover has rank 15", cover.graph.rank == 15))
    c = lift_exists(g16, mu)
    out.append(Check("psi^16 lifts with multiplier 2", c == 2, str(c)))
    w = lift_map(g16, cover, c)
    v1 = cover.graph.vertex("v1")
    img = cover.graph.vertices[w.map.vertex_image[v1]]
    out.append(Check("lift sends v1 to v2", img == "v2", img))
    out.append(Check("lift does not commute with T", not commutes_with_deck(w)))
    out.append(Check("lift o T = T^2 o lift", deck_identity_holds(w) and w.c == 2))
    return out


SCENARIOS = {1: example1, 2: example2, 3: example3}

