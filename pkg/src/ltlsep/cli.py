"""Command-line frontend.

Exit codes: 0 affirmative answer, 1 negative answer, 2 usage or parse
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import sys

from . import oracle
from .containment import bounded_refute, diamond_contains, path_contains
from .evaluation import holds, normalize
from .frontiers import Direction, frontier, minimize
from .model import (
    BudgetExceeded,
    DiamondQuery,
    ExampleSet,
    ParseError,
    QueryClass,
    Signature,
    canonical_text,
    classify,
    parse_example_set,
    parse_instances,
    parse_query,
    to_diamond,
    to_path,
)
from .separation import (
    Kind,
    climb,
    interval_exists,
    separates,
    unique_mgs_qdiamond,
    verify_extremal,
)
from .sepgraphs import (
    DEFAULT_NODE_CAP,
    Extremum,
    Mode,
    build_order_graph,
    build_product,
    extremal_length,
    separating_path,
    unique_mgs_pdiamond,
    unique_mss,
)

OK, NO, USAGE, BUDGET = 0, 1, 2, 3
CLASS_NAMES = [c.value for c in QueryClass]


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _examples(args) -> ExampleSet:
    return parse_example_set(_read(args.examples))


def _query(text: str, cls: QueryClass | None = None):
    f = parse_query(text)
    if cls is None:
        return normalize(f)
    if cls not in classify(f):
        raise UsageError(f"{canonical_text(f)} is not in class {cls.value}")
    if cls is QueryClass.Q_D:
        return normalize(to_diamond(f))
    if cls is QueryClass.Q_ND:
        return normalize(f)
    return normalize(to_path(f))


def _budget(args) -> oracle.EnumBudget:
    return oracle.EnumBudget(max_queries=args.max_queries)


def _mode(cls: QueryClass) -> Mode:
    if cls is QueryClass.QP_D:
        return Mode.DIAMOND
    if cls is QueryClass.QP_ND:
        return Mode.NEXT_DIAMOND
    raise UsageError(f"no product graph for class {cls.value}")


def _emit(out, q) -> int:
    if q is None:
        print("NONE", file=out)
        return NO
    print(canonical_text(q), file=out)
    return OK


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args, out) -> int:
    q = _query(args.query)
    for D in parse_instances(_read(args.data)):
        print("true" if holds(D, q) else "false", file=out)
    return OK


def cmd_normalize(args, out) -> int:
    print(canonical_text(_query(args.query, args.cls)), file=out)
    return OK


def cmd_contains(args, out) -> int:
    cls = args.cls
    if cls is QueryClass.Q_ND:
        raise UsageError("containment for general next/eventually conjunctions is not supported")
    a, b = _query(args.a, cls), _query(args.b, cls)
    if cls is QueryClass.Q_D:
        ok = diamond_contains(a, b)
        witness = "contained" if ok else None
    else:
        h = path_contains(a, b)
        ok = h is not None
        witness = "witness h=" + ",".join(map(str, h)) if ok else None
    if ok:
        print(witness, file=out)
        return OK
    sig = _sig(a) | _sig(b)
    bound = args.bound if args.bound is not None else _tdp(a) + _tdp(b) + 2
    D = bounded_refute(a, b, sig, bound)
    print(f"counter {D}" if D is not None else "not contained", file=out)
    return NO


def _sig(q) -> frozenset:
    if isinstance(q, DiamondQuery):
        return q.rho.union(*(c.sig for c in q.conjuncts))
    return q.sig


def _tdp(q) -> int:
    if isinstance(q, DiamondQuery):
        return max((c.tdp for c in q.conjuncts), default=0)
    return q.tdp


def cmd_frontier(args, out) -> int:
    q = _query(args.query, args.cls)
    f = frontier(q, args.cls, args.direction, Signature.parse(args.sig), args.bound)
    if args.minimal:
        f = minimize(f)
    for text in f.texts():
        print(text, file=out)
    return OK


def cmd_separate(args, out) -> int:
    E, cls = _examples(args), args.cls
    if args.oracle or cls is QueryClass.Q_ND:
        if cls is QueryClass.Q_ND:
            raise UsageError("no separator search for general next/eventually conjunctions")
        seps = oracle.enumerate_separators(E, cls, _budget(args))
        return _emit(out, seps[0] if seps else None)
    if cls is QueryClass.Q_IN:
        return _emit(out, interval_exists(E))
    if cls is QueryClass.Q_D:
        return _emit(out, _diamond_separator(E, args.node_cap))
    sp = separating_path(build_product(E, _mode(cls), args.node_cap))
    return _emit(out, sp.query if sp else None)


def _diamond_separator(E: ExampleSet, cap: int):
    """Conjunction of one eventually-only path separator per negative."""
    parts = []
    for D in E.negatives:
        sp = separating_path(build_product(ExampleSet(E.positives, (D,)), Mode.DIAMOND, cap))
        if sp is None:
            return None
        parts.append(to_diamond(sp.query))
    rho = frozenset().union(*(p.rho for p in parts)) if parts else frozenset()
    return normalize(DiamondQuery(rho, tuple(c for p in parts for c in p.conjuncts)))


def _oracle_extremal(E, cls, kind, budget, out) -> int:
    if kind in ("mss", "mgs"):
        mss, mgs = oracle.extremal_sets(E, cls, budget)
        items = mss if kind == "mss" else mgs
        if not items:
            print("NONE", file=out)
            return NO
        for text in sorted(canonical_text(q) for q in items):
            print(text, file=out)
        return OK
    if kind in ("unique-mss", "unique-mgs"):
        return _emit(out, oracle.unique_extremal(E, cls, kind[-3:], budget))
    seps = oracle.enumerate_separators(E, cls, budget)
    if not seps:
        return _emit(out, None)
    pick = min if kind == "shortest" else max
    # seps are sorted by canonical text, so ties go to the first one
    return _emit(out, pick(seps, key=_tdp))


def cmd_extremal(args, out) -> int:
    E, cls, kind = _examples(args), args.cls, args.kind
    if cls is QueryClass.Q_ND:
        raise UsageError("no extremal separators for general next/eventually conjunctions")
    graph_ok = cls in (QueryClass.QP_D, QueryClass.QP_ND)
    if args.oracle or cls is QueryClass.Q_IN and kind not in ("mss", "mgs"):
        return _oracle_extremal(E, cls, kind, _budget(args), out)
    if kind in ("shortest", "longest"):
        if not graph_ok:
            return _oracle_extremal(E, cls, kind, _budget(args), out)
        prod = build_product(E, _mode(cls), args.node_cap)
        return _emit(out, extremal_length(prod, Extremum(kind)))
    if kind == "unique-mss":
        if cls is QueryClass.Q_D:
            return _emit(out, oracle.diamond_mss(E, _budget(args)))
        return _emit(out, unique_mss(build_product(E, _mode(cls), args.node_cap)))
    if kind == "unique-mgs":
        if cls is QueryClass.QP_D:
            return _emit(out, unique_mgs_pdiamond(E, args.node_cap))
        if cls is QueryClass.Q_D:
            return _emit(out, unique_mgs_qdiamond(E, args.node_cap))
        return _emit(out, oracle.unique_extremal(E, cls, "mgs", _budget(args)))
    # a single most specific / most general separator by climbing
    if kind == "mss" and cls is QueryClass.Q_D:
        return _emit(out, oracle.diamond_mss(E, _budget(args)))
    if cls is QueryClass.Q_D:
        seed = _diamond_separator(E, args.node_cap)
    elif cls is QueryClass.Q_IN:
        seed = interval_exists(E)
    else:
        prod = build_product(E, _mode(cls), args.node_cap)
        seed = extremal_length(prod, Extremum.LONGEST if kind == "mss" else Extremum.SHORTEST)
    if seed is None:
        return _emit(out, None)
    direction = Direction.STRENGTHEN if kind == "mss" else Direction.WEAKEN
    return _emit(out, climb(seed, E, cls, direction))


def cmd_verify(args, out) -> int:
    E, cls = _examples(args), args.cls
    q = _query(args.query, cls)
    if args.kind == "separator":
        rep = separates(q, E)
        if rep.is_separator:
            print("yes", file=out)
            return OK
        which = (f"positive {rep.failing_positive} is not satisfied" if rep.failing_positive is not None
                 else f"negative {rep.failing_negative} is satisfied")
        print(f"no: {which}", file=out)
        return NO
    kind = Kind(args.kind)
    if args.oracle or (cls is QueryClass.Q_D and kind is Kind.MSS) or cls is QueryClass.Q_ND:
        if cls is QueryClass.Q_ND:
            raise UsageError("no verification for general next/eventually conjunctions")
        mss, mgs = oracle.extremal_sets(E, cls, _budget(args))
        from .containment import contains

        items = mss if kind is Kind.MSS else mgs
        ok = any(contains(q, r) and contains(r, q) for r in items)
    else:
        ok = verify_extremal(q, E, cls, kind)
    print("yes" if ok else "no", file=out)
    return OK if ok else NO


def cmd_count(args, out) -> int:
    E, cls = _examples(args), args.cls
    if args.kind == "separators":
        n = len(oracle.enumerate_separators(E, cls, _budget(args)))
    else:
        mss, mgs = oracle.extremal_sets(E, cls, _budget(args))
        n = len(mss if args.kind == "mss" else mgs)
    print(n, file=out)
    return OK


def cmd_gen_cnf(args, out) -> int:
    phi = oracle.parse_dimacs(_read(args.dimacs))
    out.write(str(oracle.cnf_examples(phi, merge_negatives=args.merge_negatives)))
    return OK


def cmd_dump_graph(args, out) -> int:
    E = _examples(args)
    if args.graph == "order":
        g = build_order_graph(E, args.node_cap)
    else:
        g = build_product(E, Mode(args.mode), args.node_cap)
    out.write(g.dump())
    if args.plot:
        from . import report

        if args.graph == "order":
            report.plot_order(g, args.plot)
        else:
            report.plot_product(g, args.plot)
    return OK


# ---------------------------------------------------------------------------


def _class(text: str) -> QueryClass:
    try:
        return QueryClass.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _direction(text: str) -> Direction:
    try:
        return Direction.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlsep", description="Separate temporal data examples with LTL queries.")
    p.add_argument("--max-queries", type=int, default=oracle.DEFAULT_BUDGET.max_queries,
                   help="oracle enumeration cap")
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP, help="graph size cap")
    sub = p.add_subparsers(dest="command", required=True)

    def cls_opt(sp, required=True):
        sp.add_argument("--class", dest="cls", type=_class, required=required,
                        metavar="{" + ",".join(CLASS_NAMES) + "}")

    sp = sub.add_parser("eval", help="evaluate a query at time 0 of each instance")
    sp.add_argument("-q", "--query", required=True)
    sp.add_argument("-d", "--data", required=True, help="file with one instance per line")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("normalize", help="print the normal form")
    sp.add_argument("-q", "--query", required=True)
    cls_opt(sp, required=False)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("contains", help="decide whether query a implies query b")
    sp.add_argument("-a", required=True)
    sp.add_argument("-b", required=True)
    cls_opt(sp)
    sp.add_argument("--bound", type=int, help="instance length for the counter-example search")
    sp.set_defaults(func=cmd_contains)

    sp = sub.add_parser("frontier", help="list a strengthening or weakening frontier")
    sp.add_argument("-q", "--query", required=True)
    sp.add_argument("--direction", type=_direction, required=True, metavar="{s,w}")
    cls_opt(sp)
    sp.add_argument("--sig", default="", help="comma-separated atoms")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--minimal", action="store_true", help="drop dominated members")
    sp.set_defaults(func=cmd_frontier)

    for name, func, kinds, text in (
        ("separate", cmd_separate, None, "find some separator"),
        ("extremal", cmd_extremal, ["mss", "mgs", "shortest", "longest", "unique-mss", "unique-mgs"],
         "most specific, most general or extremal-length separators"),
        ("verify", cmd_verify, ["separator", "mss", "mgs"], "check a candidate separator"),
        ("count", cmd_count, ["separators", "mss", "mgs"], "count separators modulo equivalence"),
    ):
        sp = sub.add_parser(name, help=text)
        cls_opt(sp)
        sp.add_argument("-e", "--examples", required=True, help="example-set file ('-' for stdin)")
        if kinds:
            sp.add_argument("--kind", choices=kinds, required=True)
        if name == "verify":
            sp.add_argument("-q", "--query", required=True)
        if name != "count":
            sp.add_argument("--oracle", action="store_true", help="use brute-force enumeration")
        sp.set_defaults(func=func)

    sp = sub.add_parser("gen-cnf", help="example set whose separators count satisfying assignments")
    sp.add_argument("dimacs")
    sp.add_argument("--merge-negatives", action="store_true")
    sp.set_defaults(func=cmd_gen_cnf)

    sp = sub.add_parser("dump-graph", help="print a product or order graph")
    sp.add_argument("-e", "--examples", required=True)
    sp.add_argument("--graph", choices=["product", "order"], default="product")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.DIAMOND.value)
    sp.add_argument("--plot", metavar="PNG", help="also render the graph to an image")
    sp.set_defaults(func=cmd_dump_graph)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (ParseError, UsageError, ValueError, NotImplementedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
