"""Command-line front end.

Exit status: 0 on success, 1 when an input cannot be parsed, 2 when an
input violates a precondition of the requested computation.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import graph as gr
from .classify import RingFlags, classify_pair, graded_hom_obstruction
from .homology import CoefficientData, MissingDegree, kh_ends, uct_ends
from .intlin import SearchTooLarge, UnsupportedInfiniteGroup
from .invariants import NotRegular, bf, bf_dual, bf_twisted, bf_twisted_dual, invariant_report
from .lifting import (
    KernelNonzero,
    NotAnIsomorphism,
    NotEquivariant,
    RankMismatch,
    kk_iso_exists,
    kk_iso_exists_twisted,
)
from .lpa_terms import (
    COHN,
    LEAVITT,
    AmbientMismatch,
    TermSyntaxError,
    UnknownGenerator,
    bar,
    grade,
    grade_mod2,
    parse,
    star,
)

PARSE_ERRORS = (gr.GraphFormatError, TermSyntaxError, UnknownGenerator, json.JSONDecodeError,
                OSError)
PRECONDITION_ERRORS = (NotRegular, gr.NotAnEliminableSource, gr.UnknownVertex, KernelNonzero,
                       NotEquivariant, RankMismatch, NotAnIsomorphism, MissingDegree,
                       UnsupportedInfiniteGroup, SearchTooLarge, AmbientMismatch)


def _emit(args, data: dict, text: str | None = None):
    if args.json or text is None:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _group_line(label, data) -> str:
    g = data.group
    return f"{label}: {g}  unit class {list(data.unit_class)}"


def cmd_info(args):
    G = gr.load_graph(args.graph)
    rep = invariant_report(G)
    vc = gr.classify_vertices(G)
    rep["vertices"] = {"sinks": sorted(vc.sinks), "sources": sorted(vc.sources),
                       "regular": list(G.regular_vertices)}
    pis = gr.is_purely_infinite_simple(G)
    rep["pis"] = {"holds": pis.holds, "failed": pis.failed, "witness": pis.witness}
    text = "\n".join([
        f"graph {G.name}: {len(G.vertices)} vertices, {len(G.edges)} edges",
        f"sinks {sorted(vc.sinks)}  sources {sorted(vc.sources)}",
        f"BF: {bf(G).group}",
        f"twisted BF: {bf_twisted(G).group}",
        "purely infinite simple: " + ("yes" if pis.holds else f"no ({pis.failed})"),
    ])
    _emit(args, rep, text)


def cmd_bf(args):
    G = gr.load_graph(args.graph)
    data = bf_dual(G) if args.dual else bf(G)
    _emit(args, data.to_json(), _group_line("BF" + ("^dual" if args.dual else ""), data))


def cmd_bf_twisted(args):
    G = gr.load_graph(args.graph)
    data = bf_twisted_dual(G) if args.dual else bf_twisted(G)
    text = _group_line("twisted BF", data) + f"  s acts by {data.module.action.tolist()}"
    _emit(args, data.to_json(), text)


MOVES = {
    "splice": lambda G, v: gr.cuntz_splice(G, v),
    "outsplit": lambda G, v: gr.out_split_graph(G),
    "dual": lambda G, v: gr.dual_graph(G),
    "cover": lambda G, v: gr.double_cover(G),
    "square": lambda G, v: gr.square_graph(G),
    "elim": lambda G, v: gr.source_eliminate(G, v),
}


def cmd_moves(args):
    G = gr.load_graph(args.graph)
    if args.op in ("splice", "elim") and args.vertex is None:
        raise gr.UnknownVertex(f"--op {args.op} needs --vertex")
    out = gr.format_graph(MOVES[args.op](G, args.vertex), args.format)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def _coeff(args) -> CoefficientData:
    if args.coeff is None:
        return CoefficientData.field_like()
    return CoefficientData.from_json(json.loads(Path(args.coeff).read_text(encoding="utf-8")))


def _ends_text(e) -> str:
    mid = e.middle if e.middle is not None else "?"
    return f"0 -> {e.left} -> {mid} -> {e.right} -> 0   ({e.split_reason})"


def cmd_kh(args):
    G = gr.load_graph(args.graph)
    e = kh_ends(G, _coeff(args), args.degree, twisted=args.twisted)
    _emit(args, e.to_json(), _ends_text(e))


def cmd_uct(args):
    G = gr.load_graph(args.graph)
    e = uct_ends(G, _coeff(args), twisted=args.twisted, via_dual_graph=args.via_dual_graph)
    _emit(args, e.to_json(), _ends_text(e))


def cmd_lift(args):
    E, F = gr.load_graph(args.graph_e), gr.load_graph(args.graph_f)
    if args.twisted:
        res = kk_iso_exists_twisted(E, F)
    else:
        res = kk_iso_exists(E, F, with_inverse=args.homotopy)
    data = {"found": bool(res), "reason": res.reason,
            "certificate": res.certificate.to_json() if res else None}
    text = f"{'certificate verified' if res else 'no certificate'}: {res.reason}"
    if res and not args.twisted:
        c = res.certificate
        text += f"\nf0 =\n{c.f0}\nf1 =\n{c.f1}"
    _emit(args, data, text)


def cmd_classify(args):
    E, F = gr.load_graph(args.graph_e), gr.load_graph(args.graph_f)
    flags = RingFlags(args.regular_supercoherent, args.two_invertible,
                      args.minus_one_positive, args.lambda_assumption)
    rep = classify_pair(E, F, flags)
    names = [t.name + (" (unital)" if t.unital else "") for t in rep.applicable_theorems]
    text = "\n".join([
        f"purely infinite simple: {rep.pis_e.holds} / {rep.pis_f.holds}",
        f"BF: {rep.bf_e.group} / {rep.bf_f.group}",
        f"isomorphic BF: {rep.bf_iso is not None}",
        f"unit classes: {rep.unital_reason}",
        f"graph-side hypotheses met: {', '.join(names) or 'none'}",
    ])
    _emit(args, rep.to_json(), text)


def cmd_obstruct(args):
    E, F = gr.load_graph(args.graph_e), gr.load_graph(args.graph_f)
    ob = graded_hom_obstruction(E, F)
    _emit(args, ob.to_json(), f"possible={str(ob.possible).lower()}: {ob.reason}")


def cmd_term(args):
    G = gr.load_graph(args.graph)
    t = parse(args.expr, G, COHN if args.cohn else LEAVITT)
    if args.op == "star":
        t = star(t)
    elif args.op == "bar":
        t = bar(t)
    data = {"ambient": t.ambient, "normal_form": str(t), "grade": grade(t),
            "grade_mod2": grade_mod2(t)}
    _emit(args, data, str(t))


def cmd_selftest(args):
    from . import selftest

    t0 = time.perf_counter()
    results = selftest.run(random.Random(args.seed), args.count)
    ok = all(results.values())
    data = {"seed": args.seed, "count": args.count, "results": results,
            "seconds": round(time.perf_counter() - t0, 3)}
    text = "\n".join(f"{'PASS' if v else 'FAIL'} {k}" for k, v in results.items())
    _emit(args, data, text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lpakit", description="Bowen-Franks invariants, graph "
                                "moves and path-algebra arithmetic for finite graphs.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help, graphs=1):
        sp = sub.add_parser(name, help=help)
        if graphs == 1:
            sp.add_argument("graph")
        elif graphs == 2:
            sp.add_argument("graph_e")
            sp.add_argument("graph_f")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.set_defaults(func=func)
        return sp

    add("info", cmd_info, "summary of invariants and predicates")
    add("bf", cmd_bf, "Bowen-Franks group").add_argument("--dual", action="store_true")
    add("bf-twisted", cmd_bf_twisted, "twisted Bowen-Franks module").add_argument(
        "--dual", action="store_true")
    mv = add("moves", cmd_moves, "apply a graph move and print the result")
    mv.add_argument("--op", choices=sorted(MOVES), required=True)
    mv.add_argument("--vertex")
    mv.add_argument("-o", "--output")
    mv.add_argument("--format", choices=["text", "json"], default="text")
    kh = add("kh", cmd_kh, "end terms of the K-theory sequence")
    kh.add_argument("--degree", type=int, default=0)
    kh.add_argument("--coeff", help="JSON coefficient data (default: field-like)")
    kh.add_argument("--twisted", action="store_true")
    uc = add("uct", cmd_uct, "end terms of the universal coefficient sequence")
    uc.add_argument("--coeff")
    uc.add_argument("--twisted", action="store_true")
    uc.add_argument("--via-dual-graph", action="store_true")
    lf = add("lift", cmd_lift, "chain-level certificate for a BF isomorphism", graphs=2)
    lf.add_argument("--twisted", action="store_true")
    lf.add_argument("--homotopy", action="store_true", help="also build inverse and homotopy")
    cl = add("classify", cmd_classify, "check classification hypotheses", graphs=2)
    for flag in ("regular-supercoherent", "two-invertible", "minus-one-positive",
                 "lambda-assumption"):
        cl.add_argument(f"--{flag}", action="store_true")
    add("obstruct", cmd_obstruct, "unital graded homomorphism obstruction", graphs=2)
    tm = add("term", cmd_term, "normal form of a path-algebra expression")
    tm.add_argument("expr")
    tm.add_argument("--cohn", action="store_true", help="work in the Cohn algebra")
    tm.add_argument("--op", choices=["none", "star", "bar"], default="none")
    st = sub.add_parser("selftest")  # hidden from the command summary below
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--count", type=int, default=20)
    st.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    st.set_defaults(func=cmd_selftest)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "selftest"]
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PRECONDITION_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return code or 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
