"""Command line front end.

Exit status: 0 success (or a positive answer), 1 negative answer (no
classical solution, invalid picture, hypothesis not met, reduction stuck),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from math import gcd
from typing import Optional

from . import export, jsonio
from .gallery import NAMES, gallery
from .graphs import CoverMap, Graph, GraphError, cover_to_picture, incidence_solvable, incidence_system
from .hypergraph import Hypergraph, berge_girth, from_matrix, min_degree, theorem_hypothesis
from .order import (Closure, OrderError, SystemRef, b_scale_facts, deduce, entries_are_units,
                    exact_from_theorem, fmt_order, lower_from_operator_solution, ref_of, upper_from_picture)
from .pauli import OperatorAssignment, verify_operator_solution
from .picture import InvalidPicture, LinearSystem, Picture, certify, phase, reduce, verify
from .planemap import from_neighbor_rotation
from .zmod import INF, Modulus, solve_mod

VERBS = ("solve", "girth", "check-theorem", "verify-picture", "phase", "reduce", "cover2picture",
         "order", "gallery", "export-dot", "export-tikz")


class CliError(Exception):
    pass


def modulus_arg(s: str) -> Modulus:
    try:
        return Modulus.of(s)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"modulus must be an integer >= 2 or 'inf', got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solgroup", description="Certificates for linear system games over Z_p.")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(verb, help, input=True):
        sp = sub.add_parser(verb, help=help)
        if input:
            sp.add_argument("input", nargs="?", help="instance JSON file")
            sp.add_argument("--instance", choices=NAMES, type=str.upper, help="built-in instance")
        sp.add_argument("-p", type=modulus_arg, default=None, help="modulus: integer >= 2 or 'inf'")
        sp.add_argument("--b", dest="colouring", help="colouring: JSON file or inline JSON {vertex: int}")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("-o", "--output", help="write the main result here")
        return sp

    add("solve", "classical solvability of A x = b over Z_p")
    add("girth", "minimum degree and Berge girth of H(A)")
    add("check-theorem", "does H(A) meet the (4,4) or (3,6) hypothesis")
    add("verify-picture", "check a closed picture")
    add("phase", "phase of a picture")
    sp = add("reduce", "apply reduction moves until empty or stuck")
    sp.add_argument("--check", action="store_true", help="re-verify after every move")
    sp = add("cover2picture", "picture from a plane cover")
    sp = add("order", "deduce facts about the order of J")
    sp.add_argument("--assignment", help="operator assignment JSON to add as a lower bound")
    sp = sub.add_parser("gallery", help="describe a built-in instance")
    sp.add_argument("name", type=str.upper, choices=NAMES)
    sp.add_argument("-p", type=modulus_arg, default=None)
    sp.add_argument("--b", dest="colouring")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("-o", "--output")
    add("export-dot", "Graphviz DOT of a picture or graph")
    add("export-tikz", "TikZ of a picture or graph")
    return ap


# --- input helpers -------------------------------------------------------------------

def _colouring(args, G: Graph, default: Optional[dict] = None) -> dict:
    if args.colouring is None:
        if default is not None:
            return default
        return {v: int(i == 0) for i, v in enumerate(G.vertices)}
    text = args.colouring
    data = jsonio.loads(text) if text.lstrip().startswith("{") else jsonio.load(text)
    if isinstance(data, dict) and "b" in data and isinstance(data["b"], dict):
        data = data["b"]
    b = {}
    for v in G.vertices:
        if str(v) not in data:
            raise CliError(f"colouring misses vertex {v}")
        b[v] = int(data[str(v)])
    return b


def _p(args, fallback="inf") -> Modulus:
    return args.p if args.p is not None else Modulus.of(fallback)


def _load_input(args):
    """(kind, object, name) from --instance or the positional file."""
    if getattr(args, "instance", None):
        return "bundle", gallery(args.instance), args.instance
    if not getattr(args, "input", None):
        raise CliError("give an input file or --instance NAME")
    data = jsonio.load(args.input)
    kind = jsonio.kind_of(data)
    try:
        if kind == "picture":
            P = Picture.from_json(data)
            if args.p is not None and args.p != P.system.p:
                P = Picture.from_json({**data, "system": {**data["system"], "p": args.p.to_json()}})
            return "picture", P, args.input
        if kind == "system":
            S = LinearSystem.from_json(data)
            if args.p is not None:
                S = S.with_p(args.p)
            return "system", S, args.input
        if kind == "graph":
            G = Graph.from_json(data)
            return "graph", G, args.input
        if kind == "hypergraph":
            H = Hypergraph(tuple(data["vertices"]), tuple(data["edges"]),
                           frozenset(tuple(x) for x in data["incidence"]))
            return "hypergraph", H, args.input
        if kind == "cover":
            return "cover", _load_cover(data, args.input), args.input
        if kind == "assignment":
            return "assignment", OperatorAssignment.from_json(data), args.input
    except (KeyError, TypeError) as exc:
        raise CliError(f"{args.input}: missing or malformed field {exc}") from None
    raise CliError(f"{args.input}: a {kind} document cannot be used here")


def _load_cover(data: dict, path: str) -> CoverMap:
    from pathlib import Path

    def graph(ref):
        if isinstance(ref, dict):
            return Graph.from_json(ref)
        return Graph.from_json(jsonio.load(Path(path).parent / ref))

    H, G = graph(data["H"]), graph(data["G"])
    M = None
    if "rotation" in data:
        M, _ = from_neighbor_rotation(data["rotation"])
    return CoverMap(H, G, data["phi"], M)


def _system(args, kind, obj) -> tuple[LinearSystem, Optional[Graph]]:
    if kind == "system":
        return obj, None
    if kind == "bundle":
        G = obj.graph
        return incidence_system(G, _colouring(args, G), _p(args)), G
    if kind == "graph":
        return incidence_system(obj, _colouring(args, obj), _p(args)), obj
    if kind == "picture":
        return obj.system, None
    raise CliError(f"a {kind} has no linear system")


def _emit(args, text: str, payload=None):
    out = jsonio.dumps(payload) if args.json and payload is not None else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out if out.endswith("\n") else out + "\n")
    else:
        sys.stdout.write(out if out.endswith("\n") else out + "\n")


# --- verbs ---------------------------------------------------------------------------------

def cmd_solve(args) -> int:
    kind, obj, _ = _load_input(args)
    S, G = _system(args, kind, obj)
    x = solve_mod(S.A, S.b, S.p, S.n)
    if G is not None:
        ok, _ = incidence_solvable(G, _colouring(args, G), S.p)
        assert ok == (x is not None)
    if x is None:
        _emit(args, f"no classical solution over Z_{S.p}", {"solvable": False, "p": S.p.to_json()})
        return 1
    names = [S.col_name(j) for j in range(S.n)]
    text = f"classical solution over Z_{S.p}:\n" + "\n".join(f"  x[{n}] = {v}" for n, v in zip(names, x))
    _emit(args, text, {"solvable": True, "p": S.p.to_json(), "x": dict(zip(names, x))})
    return 0


def _hypergraph(args, kind, obj) -> Hypergraph:
    if kind == "hypergraph":
        return obj
    if kind in ("graph", "bundle"):
        G = obj if kind == "graph" else obj.graph
        return G.hypergraph()
    S, _ = _system(args, kind, obj)
    return from_matrix(S.A, S.n)


def cmd_girth(args) -> int:
    kind, obj, _ = _load_input(args)
    H = _hypergraph(args, kind, obj)
    rep = berge_girth(H)
    d = min_degree(H)
    g = "inf" if not rep.is_finite else rep.girth
    text = f"min degree {d}\ngirth {g}"
    if rep.witness:
        text += "\nwitness " + " ".join(map(str, rep.witness))
    _emit(args, text, {"min_degree": d, "girth": g, "witness": list(rep.witness) if rep.witness else None})
    return 0


def cmd_check_theorem(args) -> int:
    kind, obj, _ = _load_input(args)
    H = _hypergraph(args, kind, obj)
    verdict = theorem_hypothesis(H)
    rep = berge_girth(H)
    payload = {"verdict": verdict.value, "min_degree": min_degree(H),
               "girth": rep.girth if rep.is_finite else "inf"}
    if not verdict.qualifies:
        _emit(args, f"NO: min degree {payload['min_degree']}, girth {payload['girth']}", payload)
        return 1
    text = f"{verdict.value}, |J|=p for all b, p"
    if kind in ("system", "picture"):
        S, _ = _system(args, kind, obj)
        if not entries_are_units(S.A, S.p):
            text += f" (not for p = {S.p}: some entries of A are not units mod {S.p})"
            payload["units_mod_p"] = False
    _emit(args, text, payload)
    return 0


def _picture(args, kind, obj) -> Picture:
    if kind == "picture":
        return obj
    if kind == "bundle":
        return obj.picture(_colouring(args, obj.graph), _p(args))
    if kind == "cover":
        return cover_to_picture(obj, _colouring(args, obj.G), _p(args))
    raise CliError(f"a {kind} is not a picture")


def cmd_verify_picture(args) -> int:
    kind, obj, _ = _load_input(args)
    P = _picture(args, kind, obj)
    bad = verify(P)
    if bad:
        text = "INVALID\n" + "\n".join(f"  {v.kind.value}: {v.detail}" for v in bad)
        _emit(args, text, {"valid": False, "violations": [{"kind": v.kind.value, "detail": v.detail} for v in bad]})
        return 1
    c = certify(P)
    _emit(args, f"valid, phase {c.phase}: {c.conclusion}", {"valid": True, **c.to_json()})
    return 0


def cmd_phase(args) -> int:
    kind, obj, _ = _load_input(args)
    P = _picture(args, kind, obj)
    k = phase(P)
    _emit(args, str(k), {"phase": k, "p": P.system.p.to_json()})
    return 0


def cmd_reduce(args) -> int:
    kind, obj, _ = _load_input(args)
    P = _picture(args, kind, obj)
    T = reduce(P, check=args.check)
    lines = [f"{T.outcome.value} after {len(T.steps)} moves"]
    lines += [f"  {s.kind.value} -> size {s.size_after}" for s in T.steps]
    if T.blocked:
        lines += [f"  blocked {v.kind.value}: {v.detail}" for v in T.blocked]
    _emit(args, "\n".join(lines), T.to_json())
    return 0 if T.outcome.value == "EMPTY" else 1


def cmd_cover2picture(args) -> int:
    kind, obj, _ = _load_input(args)
    if kind == "bundle":
        c = obj.cover()
        if c is None:
            raise CliError(f"{obj.name} has no shipped cover")
    elif kind == "cover":
        c = obj
    else:
        raise CliError("cover2picture needs a cover file or an instance with a cover")
    P = cover_to_picture(c, _colouring(args, c.G), _p(args))
    out = jsonio.dumps(P.to_json())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _prime_power_factors(p: Modulus) -> list[Modulus]:
    if not p.is_finite:
        return [p]
    out, n, d = [], p.value, 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(Modulus(q))
        d += 1
    if n > 1:
        out.append(Modulus(n))
    return out if len(out) > 1 else [p]


def order_facts(bundle, b: dict, p: Modulus, extra=()) -> tuple[list, SystemRef]:
    """Facts available for a gallery instance at p and its prime-power factors."""
    G = bundle.graph
    facts = list(extra)
    target = ref_of(incidence_system(G, b, p), bundle.name)
    for q in dict.fromkeys([p] + _prime_powers_or_self(p)):
        S = incidence_system(G, b, q)
        if bundle.drawing is not None:
            facts.append(upper_from_picture(certify(bundle.picture(b, q)), bundle.name))
        try:
            facts.append(exact_from_theorem(S.A, q, bundle.name))
        except OrderError:
            pass
        if bundle.name == "K33" and q == Modulus(2):
            rep = verify_operator_solution(_mermin_peres(S))
            if rep.passed:
                facts.append(lower_from_operator_solution(rep, bundle.name))
    return facts, target


def _prime_powers_or_self(p):
    return _prime_power_factors(p)


def _mermin_peres(S: LinearSystem) -> OperatorAssignment:
    from .pauli import mermin_peres_assignment
    return mermin_peres_assignment(S)


def _closure_table(cl: Closure, highlight: Optional[SystemRef]) -> str:
    rows = []
    for f in cl.facts():
        mark = "*" if highlight is not None and f.ref == highlight else " "
        rows.append((mark, str(f.ref.p), f.kind.value, fmt_order(f.n), str(f.ref), "; ".join(f.provenance)))
    w = [max([len(r[i]) for r in rows] + [len(h)]) for i, h in enumerate(("", "p", "kind", "n", "group", "provenance"))]
    head = ("", "p", "kind", "n", "group", "provenance")
    lines = ["  ".join(h.ljust(w[i]) for i, h in enumerate(head))]
    lines += ["  ".join(c.ljust(w[i]) for i, c in enumerate(r)) for r in rows]
    for bad in cl.inconsistencies:
        lines.append(f"INCONSISTENT {bad}")
    return "\n".join(lines)


def cmd_order(args) -> int:
    kind, obj, _ = _load_input(args)
    p = _p(args)
    extra = []
    if args.assignment:
        a = OperatorAssignment.from_json(jsonio.load(args.assignment))
        rep = verify_operator_solution(a)
        if not rep.passed:
            raise CliError("assignment fails verification: " + "; ".join(f.detail for f in rep.failures[:3]))
        extra.append(lower_from_operator_solution(rep, obj.name if kind == "bundle" else ""))
    if kind == "bundle":
        facts, target = order_facts(obj, _colouring(args, obj.graph), p, extra)
    elif kind in ("picture", "system", "graph"):
        S, _ = _system(args, kind, obj)
        target = ref_of(S)
        facts = list(extra)
        if kind == "picture":
            facts.append(upper_from_picture(certify(obj)))
        try:
            facts.append(exact_from_theorem(S.A, S.p))
        except OrderError:
            pass
        if not any(S.b):
            facts.append(b_scale_facts("ZERO_B", 0, S.p, family=target.family))
    else:
        raise CliError(f"order does not accept a {kind}")
    cl = deduce(facts, [target])
    best = cl.about(target)
    payload = {"target": str(target), "conclusion": best.to_json() if best else None,
               "consistent": cl.consistent, "facts": [f.to_json() for f in cl.facts()],
               "inconsistencies": [str(x) for x in cl.inconsistencies]}
    text = f"{best.kind.value}({fmt_order(best.n)}) for {target}\n\n" + _closure_table(cl, target)
    _emit(args, text, payload)
    return 0 if cl.consistent else 1


def cmd_gallery(args) -> int:
    B = gallery(args.name)
    G = B.graph
    p = _p(args)
    b = _colouring(args, G)
    payload = {"name": B.name, "graph": G.to_json(), "colouring": {str(v): x for v, x in b.items()},
               "notes": B.notes}
    lines = [f"{B.name}: {len(G.vertices)} vertices, {len(G.edges)} edges", *("  " + n for n in B.notes)]
    if B.drawing is not None:
        P = B.picture(b, p)
        payload["picture"] = P.to_json()
        lines.append(f"picture: {len(P.vertices)} vertices, {len(P.edges)} edges, phase {phase(P)} mod {p}")
    _emit(args, "\n".join(lines), payload)
    return 0


def _export(args, to_pic, to_graph) -> int:
    kind, obj, name = _load_input(args)
    if kind == "graph":
        text = to_graph(obj)
    elif kind == "bundle" and obj.drawing is None:
        text = to_graph(obj.graph)
    else:
        text = to_pic(_picture(args, kind, obj))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_export_dot(args) -> int:
    return _export(args, export.picture_to_dot, export.graph_to_dot)


def cmd_export_tikz(args) -> int:
    return _export(args, export.picture_to_tikz, export.graph_to_tikz)


COMMANDS = {
    "solve": cmd_solve, "girth": cmd_girth, "check-theorem": cmd_check_theorem,
    "verify-picture": cmd_verify_picture, "phase": cmd_phase, "reduce": cmd_reduce,
    "cover2picture": cmd_cover2picture, "order": cmd_order, "gallery": cmd_gallery,
    "export-dot": cmd_export_dot, "export-tikz": cmd_export_tikz,
}


def parse(argv):
    return build_parser().parse_args(argv)


def main(argv=None) -> int:
    try:
        args = parse(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.verb](args)
    except (CliError, jsonio.InputError, GraphError, InvalidPicture, OrderError, ValueError, KeyError) as exc:
        print(f"solgroup {args.verb}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
