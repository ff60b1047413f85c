"""Command-line front end.

Exit codes: 0 satisfied / constructed / verified, 1 violated / absent,
2 inapplicable or not amenable, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import construct as cons
from .criterion import (CriterionReport, Verdict, check_conditional_adjustment,
                        check_conditional_backdoor, check_unconditional_adjustment,
                        exists_conditional_adjustment)
from .errors import CadjustError, PreconditionError
from .graph import NODE_RE, MixedGraph, parse_graph, serialize_graph
from .oracle import DEFAULT_CAP, enumerate_dag_extensions, verify_criterion_across_class
from .paths import PathFilter, PathWitness, enumerate_proper_definite_status_paths, m_separated
from .reachability import RELATIONS, forbidden_set, possible_mediators, relation
from .sem import verify_over_class

EXIT_OK, EXIT_NO, EXIT_INAPPLICABLE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def node_list(text: str) -> list[str]:
    """Parse ``A,B,C``; the empty string is the empty set."""
    names = [t.strip() for t in text.split(",")] if text.strip() else []
    for n in names:
        if not NODE_RE.match(n):
            raise argparse.ArgumentTypeError(f"malformed node name {n!r}")
    if len(set(names)) != len(names):
        raise argparse.ArgumentTypeError("repeated node name")
    return names


def _query_args(p: argparse.ArgumentParser, z: bool = True, s: bool = False) -> None:
    p.add_argument("--x", type=node_list, required=True, help="treatment nodes, comma separated")
    p.add_argument("--y", type=node_list, required=True, help="outcome nodes, comma separated")
    if z:
        p.add_argument("--z", type=node_list, default=[], help="conditioning nodes")
    if s:
        p.add_argument("--s", type=node_list, default=[], help="candidate adjustment set")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cadjust", description="Conditional covariate adjustment in causal graphs.")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("-g", "--graph", required=True, help="graph file ('-' for stdin)")
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
        return p

    p = add("check", "test a candidate set against an adjustment criterion")
    _query_args(p, s=True)
    p.add_argument("--criterion", choices=("conditional", "unconditional", "backdoor"),
                   default="conditional")

    p = add("exists", "decide whether any conditional adjustment set exists")
    _query_args(p)

    p = add("construct", "build an explicit conditional adjustment set")
    _query_args(p)
    p.add_argument("--method", choices=cons.METHODS, default="adjust")
    p.add_argument("--exclude", type=node_list, default=[], help="unmeasured nodes to drop")

    p = add("relate", "compute a node relation")
    p.add_argument("--relation", choices=RELATIONS + ("Med", "Forb"), required=True)
    p.add_argument("--w", type=node_list, default=[], help="source nodes")
    p.add_argument("--x", type=node_list, default=[])
    p.add_argument("--y", type=node_list, default=[])

    p = add("paths", "list proper definite-status paths from X to Y")
    _query_args(p, z=False)
    p.add_argument("--filter", choices=[f.value for f in PathFilter], default="all")

    p = add("sep", "test m-separation of A and B given C")
    p.add_argument("--a", type=node_list, required=True)
    p.add_argument("--b", type=node_list, required=True)
    p.add_argument("--c", type=node_list, default=[])

    p = add("verify", "compare the graph verdict with every represented DAG")
    _query_args(p, s=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = add("enumerate", "list the DAGs represented by an MPDAG")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--literal", action="store_true",
                   help="keep orientations that add unshielded colliders")

    p = add("sem", "check the adjustment identity in random linear-Gaussian models")
    _query_args(p, s=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    return parser


def load_graph(path: str) -> MixedGraph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text)


# -- rendering -------------------------------------------------------------

def _witness_json(w):
    return w.to_dict() if isinstance(w, PathWitness) else w


def _report_text(g: MixedGraph, rep: CriterionReport) -> list[str]:
    lines = [f"verdict: {rep.verdict.value}"]
    if rep.clause:
        lines.append(f"clause: {rep.clause.value}")
    if isinstance(rep.witness, PathWitness):
        lines.append(f"witness: {rep.witness.render(g)}")
    elif rep.witness is not None:
        lines.append(f"witness: {rep.witness}")
    return lines


def _exit_for(rep: CriterionReport) -> int:
    if rep.verdict is Verdict.SATISFIED:
        return EXIT_OK
    if rep.verdict is Verdict.INAPPLICABLE or rep.clause.value == "not-amenable":
        return EXIT_INAPPLICABLE
    return EXIT_NO


def _fmt_set(s) -> str:
    return "{" + ", ".join(sorted(s)) + "}"


# -- subcommands -------------------------------------------------------------

def cmd_check(g, a):
    if a.criterion == "conditional":
        rep = check_conditional_adjustment(g, a.x, a.y, a.z, a.s)
    elif a.criterion == "unconditional":
        if a.z:
            raise InputError("--z is not used by the unconditional criterion")
        rep = check_unconditional_adjustment(g, a.x, a.y, a.s)
    else:
        rep = check_conditional_backdoor(g, a.x, a.y, a.z, a.s)
    data = {"command": "check", "criterion": a.criterion, **rep.to_dict()}
    return _exit_for(rep), data, _report_text(g, rep)


def cmd_exists(g, a):
    res = exists_conditional_adjustment(g, a.x, a.y, a.z)
    data = {
        "command": "exists",
        "exists": res.exists,
        "adjustment_set": list(res.adjustment_set) if res.exists else None,
        "candidate": list(res.candidate) if res.candidate is not None else None,
        "blocking_path": _witness_json(res.blocking_path),
        **res.report.to_dict(),
    }
    if res.exists:
        text = ["exists: yes", f"adjustment set: {_fmt_set(res.adjustment_set)}"]
        return EXIT_OK, data, text
    text = ["exists: no"] + _report_text(g, res.report)
    if res.blocking_path is not None:
        text.append(f"open path: {res.blocking_path.render(g)}")
    return _exit_for(res.report), data, text


def cmd_construct(g, a):
    try:
        cs = cons.construct(g, a.method, a.x, a.y, a.z)
    except PreconditionError as exc:
        code = EXIT_INAPPLICABLE if exc.name in ("z-in-possde", "not-amenable") else EXIT_INPUT
        data = {"command": "construct", "method": a.method, "members": None,
                "preconditions_met": False, "reasons": [exc.name, str(exc)]}
        return code, data, [f"precondition failed ({exc.name}): {exc}"]
    if a.exclude:
        cs = cons.exclude_nodes(g, cs, a.x, a.y, a.z, a.exclude)
    data = {"command": "construct", "method": a.method, **cs.to_dict()}
    text = [f"{cs.kind.value}: {_fmt_set(cs.members)}"] + [f"note: {r}" for r in cs.reasons]
    return (EXIT_OK if cs.preconditions_met else EXIT_NO), data, text


def cmd_relate(g, a):
    if a.relation in ("Med", "Forb"):
        if not a.x or not a.y:
            raise InputError(f"--x and --y are required for {a.relation}")
        fn = possible_mediators if a.relation == "Med" else forbidden_set
        out = fn(g, a.x, a.y)
    else:
        out = relation(g, a.relation, a.w)
    data = {"command": "relate", "relation": a.relation, "result": list(out)}
    return EXIT_OK, data, [_fmt_set(out)]


def cmd_paths(g, a):
    found = enumerate_proper_definite_status_paths(g, a.x, a.y, a.filter)
    data = {"command": "paths", "filter": a.filter, "paths": [p.to_dict() for p in found]}
    return EXIT_OK, data, [p.render(g) for p in found]


def cmd_sep(g, a):
    v = m_separated(g, a.a, a.b, a.c)
    data = {"command": "sep", "separated": v.separated, "witness": _witness_json(v.witness)}
    text = [f"separated: {'yes' if v.separated else 'no'}"]
    if v.witness is not None:
        text.append(f"open path: {v.witness.render(g)}")
    return (EXIT_OK if v.separated else EXIT_NO), data, text


def cmd_verify(g, a):
    try:
        ok = verify_criterion_across_class(g, a.x, a.y, a.z, a.s, a.cap)
    except PreconditionError as exc:
        data = {"command": "verify", "agrees": None, "reason": exc.name}
        return EXIT_INAPPLICABLE, data, [f"precondition failed ({exc.name}): {exc}"]
    n = len(enumerate_dag_extensions(g, a.cap))
    data = {"command": "verify", "agrees": ok, "dags": n}
    return (EXIT_OK if ok else EXIT_NO), data, [f"agrees across {n} DAGs: {'yes' if ok else 'no'}"]


def cmd_enumerate(g, a):
    cls = enumerate_dag_extensions(g, a.cap, a.literal)
    texts = [serialize_graph(d) for d in cls]
    data = {"command": "enumerate", "count": len(texts), "dags": texts}
    return EXIT_OK, data, ["---\n".join(texts).rstrip("\n")]


def cmd_sem(g, a):
    if a.trials < 1:
        raise InputError("--trials must be positive")
    rep = verify_over_class(g, a.x, a.y, a.z, a.s, a.trials, a.seed)
    ok = rep.holds(a.tol)
    data = {"verdict": "holds" if ok else "fails", "max_mean_gap": rep.max_mean_gap,
            "max_cov_gap": rep.max_cov_gap, "trials": rep.trials, "seed": rep.seed}
    text = [f"verdict: {data['verdict']}", f"max mean gap: {rep.max_mean_gap:.3g}",
            f"max cov gap: {rep.max_cov_gap:.3g}", f"trials: {rep.trials}, seed: {rep.seed}"]
    return (EXIT_OK if ok else EXIT_NO), data, text


COMMANDS = {
    "check": cmd_check, "exists": cmd_exists, "construct": cmd_construct,
    "relate": cmd_relate, "paths": cmd_paths, "sep": cmd_sep, "verify": cmd_verify,
    "enumerate": cmd_enumerate, "sem": cmd_sem,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        g = load_graph(args.graph)
        code, data, text = COMMANDS[args.command](g, args)
    except PreconditionError as exc:
        _fail(args, exc)
        return EXIT_INAPPLICABLE if exc.name in _INAPPLICABLE_TAGS else EXIT_INPUT
    except (CadjustError, InputError, ValueError) as exc:
        return _fail(args, exc)
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print("\n".join(text))
    return code


_INAPPLICABLE_TAGS = {"z-in-possde", "not-amenable", "z-in-descendants", "amenable"}


def _fail(args, exc) -> int:
    if args.format == "json":
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
    else:
        print(f"cadjust: error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
