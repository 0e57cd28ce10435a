"""Command line interface: ``ttkit COMMAND FILE [options]``.

Exit codes: 0 success, 1 parse error, 2 validation or usage error,
3 inconclusive verdict under ``--strict``, 4 a replayed example failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from typing import Sequence, TextIO

from . import gl2
from .classify import Certificate, ReverserWitness, classify, ideal_whitehead_graph
from .covers import (CoverError, Voltage, build_cover, commutes_with_deck, deck_identity_holds,
                     h1_action, is_homologically_nontrivial, lift_exists, lift_map)
from .graph import GraphError
from .graphmap import GraphMap, MapError, mat_pow, power, transition_matrix
from .mapfile import MapFile, ParseError, ValidationError, format_mapfile, parse
from .nielsen import find_inps, verify_descriptor
from .pf import PFError, pf_eigen
from .scenarios import SCENARIOS
from .traintrack import format_whitehead, gate_structure, is_train_track, local_whitehead, stable_whitehead
from .verdict import Verdict

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_FAILED = 0, 1, 2, 3, 4

JSON_KEYS = ("graph", "map", "train_track", "primitive", "lambda", "char_poly", "rotationless_power",
             "pnp", "ageometric_fully_irreducible", "index", "ideal_whitehead_graph", "lone_axis",
             "theorem_report", "warnings")


class UsageError(Exception):
    pass


# input ------------------------------------------------------------------

def load_mapfile(path: str) -> MapFile:
    """Read ``path``, falling back to the packaged examples (``psi``, ``fibonacci``)."""
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    base = os.path.basename(path)
    name = base if base.endswith(".gm") else base + ".gm"
    data = resources.files("ttkit.data").joinpath(name)
    if data.is_file():
        return parse(data.read_text(encoding="utf-8"))
    raise ValidationError(f"no such file: {path}")


# formatting -------------------------------------------------------------

def _num(x: float | None):
    return None if x is None else float(f"{x:.12g}")


def _verdict(v) -> str:
    if isinstance(v, Verdict):
        return v.value
    return Verdict.of(bool(v)).value


def _matrix_text(m) -> str:
    width = max(len(str(x)) for row in m for x in row)
    return "\n".join("[" + " ".join(str(x).rjust(width) for x in row) + "]" for row in m)


def _graph_json(g: GraphMap) -> dict:
    gr = g.graph
    return {
        "name": gr.name,
        "vertices": list(gr.vertices),
        "edges": [[gr.names[h], gr.vertices[gr.origin[h]], gr.vertices[gr.terminus(h)]] for h in gr.edges],
        "rank": gr.rank,
    }


def _map_json(g: GraphMap) -> dict:
    gr = g.graph
    return {
        "name": g.name,
        "vertices": {gr.vertices[v]: gr.vertices[w] for v, w in enumerate(g.vertex_image)},
        "edges": {gr.names[h]: gr.format(g.edge_image[h], " ") for h in gr.edges},
    }


def _descriptor_json(g: GraphMap, d) -> dict:
    gr = g.graph
    rho = d.rho(gr)
    return {
        "vertex": gr.vertices[d.vertex],
        "turn": [gr.names[x] for x in d.turn],
        "legs": [{"edges": gr.format(l.edges, " "), "fraction": _num(l.fraction)} for l in d.legs],
        "gamma": gr.format(d.gamma, " "),
        "period": d.period,
        "length": _num(d.length),
        "path": None if rho is None else gr.format(rho, " "),
    }


def _pnp_json(cert: Certificate) -> dict:
    res = cert.pnp_result
    out = {"status": cert.pnp.value, "source": cert.pnp_source or None}
    if res is None:
        out.update(descriptors=[], orbits=0, periods=[], letters=0, reason="")
        return out
    src = cert.map if not cert.pnp_source or cert.pnp_source == cert.map.name else None
    out.update(
        descriptors=[_descriptor_json(src, d) for d in res.descriptors] if src else len(res.descriptors),
        orbits=len(res.orbits),
        periods=list(res.periods),
        letters=res.letters,
        reason=res.reason,
    )
    return out


def certificate_json(cert: Certificate) -> dict:
    g = cert.map
    pf = cert.pf
    wg = None
    if cert.ideal_wg is not None:
        wg = format_whitehead(g, cert.ideal_wg)
        wg["cut_vertex"] = cert.ideal_cut_vertex
    rep = cert.report
    out = {
        "graph": _graph_json(g),
        "map": _map_json(g),
        "train_track": {"verdict": _verdict(cert.train_track), "reason": cert.train_track_reason},
        "primitive": _verdict(cert.primitive),
        "lambda": None if pf is None else {
            "value": _num(pf.lam), "residual": _num(pf.residual), "root_certified": pf.root_certified,
            "min_poly": list(pf.min_poly), "lengths": [_num(x) for x in pf.lengths]},
        "char_poly": None if pf is None else list(pf.char_poly),
        "rotationless_power": cert.rotationless_power,
        "pnp": _pnp_json(cert),
        "ageometric_fully_irreducible": cert.ageometric_fi.value,
        "index": None if cert.index is None else str(cert.index),
        "ideal_whitehead_graph": wg,
        "lone_axis": cert.lone_axis.value,
        "theorem_report": None if rep is None else {"case": rep.case, "lines": list(rep.lines),
                                                    "reverser": rep.reverser},
        "warnings": list(cert.warnings),
    }
    assert tuple(out) == JSON_KEYS
    return out


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# commands ---------------------------------------------------------------

def cmd_check(args, out: TextIO) -> int:
    g = load_mapfile(args.file).get(args.map)
    tt = is_train_track(g)
    m = transition_matrix(g)
    rows = {"map": g.name, "train_track": _verdict(bool(tt)), "reason": tt.reason}
    pf = None
    try:
        pf = pf_eigen(m)
    except PFError as exc:
        rows["pf_warning"] = str(exc)
    if pf is not None:
        rows.update({"lambda": _num(pf.lam), "char_poly": list(pf.char_poly), "min_poly": list(pf.min_poly),
                     "root_certified": pf.root_certified, "residual": _num(pf.residual),
                     "lengths": [_num(x) for x in pf.lengths]})
    if args.json:
        _dump(rows, out)
    else:
        for k, v in rows.items():
            out.write(f"{k}: {v}\n")
        out.write("transition matrix:\n" + _matrix_text(m) + "\n")
    return EXIT_OK


def _reverser(mf: MapFile, g: GraphMap, args) -> ReverserWitness | None:
    if args.reverser is None:
        if args.inverse is not None or args.twist is not None:
            raise UsageError("--inverse and --twist need --reverser")
        return None
    if args.inverse is None:
        raise UsageError("--reverser needs --inverse")
    h, inv = mf.get(args.reverser), mf.get(args.inverse)
    try:
        twist = g.graph.word(args.twist or "")
    except KeyError as exc:
        raise ValidationError(str(exc.args[0])) from None
    return ReverserWitness(h, inv, twist)


def cmd_classify(args, out: TextIO) -> int:
    mf = load_mapfile(args.file)
    g = mf.get(args.map)
    rev = _reverser(mf, g, args)
    cert = classify(g, budget=args.budget, reverser=rev)
    if args.json:
        _dump(certificate_json(cert), out)
    else:
        out.write(f"map {g.name} on {g.graph.name} (rank {cert.rank})\n")
        out.write(f"train track: {_verdict(cert.train_track)}  {cert.train_track_reason}\n")
        out.write(f"primitive: {_verdict(cert.primitive)}\n")
        if cert.pf is not None:
            out.write(f"lambda: {cert.pf.lam:.12g}  char poly: {list(cert.pf.char_poly)}\n")
        out.write(f"rotationless power: {cert.rotationless_power}\n")
        out.write(f"local Whitehead graphs connected: {_verdict(cert.local_wh_connected)}\n")
        out.write(f"PNP: {cert.pnp.value}\n")
        out.write(f"ageometric fully irreducible: {cert.ageometric_fi.value}\n")
        if cert.index is not None:
            out.write(f"index: {cert.index}\n")
        if cert.ideal_wg is not None:
            w = format_whitehead(g, cert.ideal_wg)
            out.write(f"ideal Whitehead graph: {len(w['vertices'])} vertices, {len(w['edges'])} edges, "
                      f"cut vertex: {_verdict(cert.ideal_cut_vertex)}\n")
        out.write(f"lone axis: {cert.lone_axis.value}\n")
        for line in cert.report.lines:
            out.write(f"  {line}\n")
        for w in cert.warnings:
            out.write(f"warning: {w}\n")
    verdicts = (cert.pnp, cert.ageometric_fi, cert.lone_axis)
    if args.strict and Verdict.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_pnp(args, out: TextIO) -> int:
    g = load_mapfile(args.file).get(args.map)
    pf = pf_eigen(transition_matrix(g))
    res = find_inps(g, args.budget, pf, args.max_period)
    if args.json:
        _dump({"status": res.status.value, "orbits": [list(o) for o in res.orbits],
               "periods": list(res.periods), "letters": res.letters, "critical": _num(res.critical),
               "reason": res.reason, "descriptors": [_descriptor_json(g, d) for d in res.descriptors]}, out)
    else:
        out.write(f"PNP: {res.status.value}")
        out.write(f"  ({res.reason})\n" if res.reason else "\n")
        out.write(f"periods searched: {list(res.periods)}  letters: {res.letters}  "
                  f"critical constant: {res.critical:.6g}\n")
        gr = g.graph
        for i, d in enumerate(res.descriptors):
            a, b = d.legs
            ok = not verify_descriptor(g, d, pf)
            out.write(f"iNP {i}: period {d.period} at {gr.vertices[d.vertex]}, turn "
                      f"{{{gr.names[d.turn[0]]},{gr.names[d.turn[1]]}}}, legs {gr.format(a.edges, ' ')} | "
                      f"{gr.format(b.edges, ' ')}, verified: {_verdict(ok)}\n")
        out.write(f"orbits: {len(res.orbits)}\n")
    if args.strict and res.status is Verdict.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_whitehead(args, out: TextIO) -> int:
    g = load_mapfile(args.file).get(args.map)
    if not is_train_track(g):
        raise ValidationError("Whitehead graphs need a train track map")
    try:
        v = g.graph.vertex(args.vertex)
    except KeyError as exc:
        raise ValidationError(str(exc.args[0])) from None
    gs = gate_structure(g)
    if args.ideal:
        res = find_inps(g, args.budget)
        if res.status is not Verdict.NO:
            out.write(f"ideal Whitehead graph unavailable: PNP status {res.status.value}\n")
            return EXIT_INCONCLUSIVE if args.strict and res.status is Verdict.INCONCLUSIVE else EXIT_OK
        w = ideal_whitehead_graph(g, res.status, gs)
    elif args.stable:
        w = stable_whitehead(g, v, gs)
    else:
        w = local_whitehead(g, v, gs)
    data = format_whitehead(g, w)
    data["connected"] = w.is_connected()
    if args.json:
        _dump(data, out)
    else:
        out.write(f"{data['flavor']} Whitehead graph: {len(data['vertices'])} vertices, "
                  f"connected: {_verdict(data['connected'])}\n")
        out.write("vertices: " + " ".join(data["vertices"]) + "\n")
        for a, b in data["edges"]:
            out.write(f"  {a} -- {b}\n")
    return EXIT_OK


def cmd_power(args, out: TextIO) -> int:
    g = load_mapfile(args.file).get(args.map)
    if args.k < 0:
        raise UsageError("-k must be non-negative")
    show_matrix = args.matrix or not args.images
    if show_matrix:
        # M(g^k) = M(g)^k holds for train tracks; otherwise compose and tighten
        if is_train_track(g):
            m = mat_pow(transition_matrix(g), args.k)
        else:
            m = transition_matrix(power(g, args.k))
        out.write(f"M({g.name})^{args.k} =\n{_matrix_text(m)}\n")
    if args.images:
        out.write(format_mapfile(MapFile(g.graph, (power(g, args.k),))))
    return EXIT_OK


def cmd_cover(args, out: TextIO) -> int:
    g = load_mapfile(args.file).get(args.map)
    try:
        mu = Voltage.parse(g.graph, args.voltage, args.modulus)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad voltage: {exc}") from None
    cover = build_cover(g.graph, mu)
    tot = cover.graph
    out.write(f"cover {tot.name}: {tot.num_vertices} vertices, {tot.num_edges} edges, rank {tot.rank}\n")
    if args.h1:
        a = h1_action(cover.deck)
        out.write(f"H_1 action of T (nontrivial: {_verdict(is_homologically_nontrivial(cover.deck))}):\n")
        out.write(_matrix_text(a) + "\n")
    if args.lift or args.check_commute:
        gk = power(g, args.power) if args.power != 1 else g
        c = lift_exists(gk, mu)
        if c is None:
            out.write(f"{g.name}^{args.power} does not lift\n")
            return EXIT_OK
        w = lift_map(gk, cover, c)
        out.write(f"{g.name}^{args.power} lifts with multiplier c = {c}\n")
        moves = [f"{tot.vertices[v]}->{tot.vertices[x]}" for v, x in enumerate(w.map.vertex_image)]
        out.write("vertices: " + " ".join(moves) + "\n")
        out.write(f"lift o T = T^{c} o lift: {_verdict(deck_identity_holds(w))}\n")
        if args.check_commute:
            out.write(f"commutes with T: {_verdict(commutes_with_deck(w))}\n")
    return EXIT_OK


def cmd_gl2(args, out: TextIO) -> int:
    for line in gl2.example1_narrative():
        out.write(line + "\n")
    return EXIT_OK


def cmd_examples(args, out: TextIO) -> int:
    failed = 0
    for check in SCENARIOS[args.number]():
        failed += not check.ok
        tail = f"  [{check.detail}]" if check.detail else ""
        out.write(f"{'PASS' if check.ok else 'FAIL'} {check.name}{tail}\n")
    out.write(f"example {args.number}: {'all checks passed' if not failed else f'{failed} check(s) failed'}\n")
    return EXIT_FAILED if failed else EXIT_OK


# parser -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ttkit", description="Train track and lone-axis certificates for graph maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help=".gm file, or a packaged example name (psi, fibonacci)")
        sp.add_argument("--map", help="map name inside the file (default: first)")
        return sp

    sp = with_file("check", "train track test and Perron-Frobenius data")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = with_file("classify", "full certificate and theorem report")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--strict", action="store_true", help="exit 3 on any inconclusive verdict")
    sp.add_argument("--budget", type=int, help="letter budget for the PNP search")
    sp.add_argument("--reverser", metavar="H", help="isometry map conjugating the map to its inverse")
    sp.add_argument("--inverse", metavar="G", help="map name of a homotopy inverse")
    sp.add_argument("--twist", metavar="WORD", help="twisting path for the reverser witness")
    sp.set_defaults(func=cmd_classify)

    sp = with_file("pnp", "search for periodic Nielsen paths")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--max-period", type=int)
    sp.set_defaults(func=cmd_pnp)

    sp = with_file("whitehead", "local, stable or ideal Whitehead graph")
    sp.add_argument("--vertex", required=True)
    flavor = sp.add_mutually_exclusive_group()
    flavor.add_argument("--stable", action="store_true")
    flavor.add_argument("--ideal", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--strict", action="store_true")
    sp.add_argument("--budget", type=int)
    sp.set_defaults(func=cmd_whitehead)

    sp = with_file("power", "transition matrix or edge images of a power")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--matrix", action="store_true")
    sp.add_argument("--images", action="store_true")
    sp.set_defaults(func=cmd_power)

    sp = with_file("cover", "cyclic voltage cover, lifts and deck transformation")
    sp.add_argument("--voltage", required=True, help="e.g. a=1,b=0,c=0")
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--power", type=int, default=1, help="lift this power of the map")
    sp.add_argument("--lift", action="store_true")
    sp.add_argument("--check-commute", action="store_true")
    sp.add_argument("--h1", action="store_true")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("gl2", help="GL(2,Z) demonstrations")
    sp.add_argument("--demo", choices=["example1"], required=True)
    sp.set_defaults(func=cmd_gl2)

    sp = sub.add_parser("examples", help="replay the worked examples")
    sp.add_argument("action", choices=["run"])
    sp.add_argument("number", type=int, choices=sorted(SCENARIOS))
    sp.set_defaults(func=cmd_examples)
    return p


def run_command(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_INVALID
    except SystemExit as exc:   # --help
        return int(exc.code or 0)
    if args.command == "cover" and args.power < 1:
        err.write("usage error: --power must be positive\n")
        return EXIT_INVALID
    try:
        return args.func(args, out)
    except ValidationError as exc:
        err.write(f"validation error: {exc}\n")
        return EXIT_INVALID
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_INVALID
    except (GraphError, MapError, CoverError, PFError) as exc:
        err.write(f"validation error: {exc}\n")
        return EXIT_INVALID


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
