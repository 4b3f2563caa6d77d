"""Command line front end.

Exit codes: 0 ok, 1 validation failure, 2 relation violation (check commands),
3 parse error.  Input files are JSON; "-" reads standard input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, clusters, exprio
from .galgebra import NotInvertible
from .grassmannian import ChartError, ChartIndex, dimension, normalize_to_chart
from .plucker_algebraic import (
    format_tuple,
    is_simple,
    k2_family_check,
    khudaverdian_check,
    plucker_relations_check,
    wedge_rows,
)
from .plucker_general import essential_coordinates, inverse_plucker, relations_check
from .smatrix import BerezinianUndefined, ber, ber_star

OK, INVALID, VIOLATION, PARSE = 0, 1, 2, 3


class Failure(Exception):
    def __init__(self, message: str, code: int = INVALID):
        super().__init__(message)
        self.code = code


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise Failure(f"cannot read {path}: {exc.strerror}", INVALID) from None
    except json.JSONDecodeError as exc:
        raise Failure(f"{path}: invalid JSON: {exc}", PARSE) from None


def _chart(text: str) -> ChartIndex:
    try:
        return ChartIndex.parse(text)
    except ValueError as exc:
        raise Failure(str(exc), PARSE) from None


def _emit(out, data, as_json: bool, text=None):
    if as_json or text is None:
        out.write(json.dumps(data, indent=2) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _steps(text: str):
    try:
        return clusters.parse_walk(text)
    except ValueError as exc:
        raise Failure(str(exc), PARSE) from None


def _matrix(args):
    return exprio.parse_matrix(_load(args.input), strict=getattr(args, "strict", False))


# handlers


def cmd_ber(args, out):
    M = _matrix(args)
    try:
        value = (ber_star if args.star else ber)(M, cross_check=args.cross_check)
    except (BerezinianUndefined, NotInvertible) as exc:
        raise Failure(f"Berezinian undefined: {exc}") from None
    except ValueError as exc:
        raise Failure(str(exc)) from None
    _emit(out, {"ber_star" if args.star else "ber": str(value)}, args.json, str(value))
    return OK


def cmd_dim(args, out):
    shape, ambient = exprio.parse_shape(args.shape), exprio.parse_shape(args.ambient)
    try:
        d = dimension(shape, ambient)
    except ValueError as exc:
        raise Failure(str(exc)) from None
    _emit(out, {"shape": str(shape), "ambient": str(ambient), "dimension": str(d)}, args.json, str(d))
    return OK


def cmd_normalize(args, out):
    M = _matrix(args)
    try:
        W = normalize_to_chart(M, _chart(args.chart))
    except ValueError as exc:
        raise Failure(str(exc)) from None
    _emit(out, exprio.matrix_to_json(W), True)
    return OK


def cmd_pluck_coords(args, out):
    _emit(out, exprio.coords_to_json(essential_coordinates(_matrix(args))), True)
    return OK


def cmd_pluck_invert(args, out):
    coords = exprio.parse_coords(_load(args.input))
    try:
        W = inverse_plucker(coords, _chart(args.chart))
    except (ChartError, ValueError) as exc:
        raise Failure(str(exc)) from None
    _emit(out, exprio.matrix_to_json(W), True)
    return OK


def cmd_pluck_check(args, out):
    coords = exprio.parse_coords(_load(args.input))
    try:
        rep = relations_check(coords, args.family)
    except ValueError as exc:
        raise Failure(str(exc)) from None
    viol = rep.violations()
    data = {"family": args.family, "holds": rep.holds, "families": rep.summary(), "violations": [f"{f}: {v}" for f, v in viol]}
    lines = [f"{name}: checked {s['checked']}, violations {s['violations']}, inconclusive {s['inconclusive']}" for name, s in rep.summary().items()]
    lines += [f"violated {f}: {v}" for f, v in viol[: args.limit]]
    lines.append("relations hold" if rep.holds else f"{len(viol)} violations")
    _emit(out, data, args.json, "\n".join(lines))
    return OK if rep.holds else VIOLATION


def cmd_mv_wedge(args, out):
    U = _matrix(args)
    try:
        T = wedge_rows(U)
    except ValueError as exc:
        raise Failure(str(exc)) from None
    _emit(out, exprio.multivector_to_json(T), True)
    return OK


def cmd_mv_simple(args, out):
    T = exprio.parse_multivector(_load(args.input))
    res = is_simple(T)
    data = {"simple": res.simple, "reason": res.reason}
    if res.witness is not None:
        data["factor"] = exprio.matrix_to_json(res.witness)
    _emit(out, data, args.json, ("simple" if res.simple else "not simple") + f": {res.reason}")
    return OK if res.simple else VIOLATION


def cmd_mv_check(args, out):
    T = exprio.parse_multivector(_load(args.input))
    bad = [" ".join(format_tuple(x) for x in (a, (b,), c)) for a, b, c in plucker_relations_check(T)]
    data = {"degree": T.degree, "violations": bad}
    lines = [f"relation violations: {len(bad)}"] + bad[: args.limit]
    if T.degree == 2:
        fam = {f: len(v) for f, v in k2_family_check(T).items()}
        data["families"] = fam
        lines.append("families: " + ", ".join(f"{f}={v}" for f, v in fam.items()))
    if args.khudaverdian and T.degree in (2, 3):
        rep = khudaverdian_check(T)
        data["khudaverdian"] = {"violations": len(rep.violations), "disagreements": len(rep.disagreements)}
        lines.append(f"khudaverdian: violations {len(rep.violations)}, disagreements with relations {len(rep.disagreements)}")
    failed = bool(bad) or any(data.get("families", {}).values())
    _emit(out, data, args.json, "\n".join(lines))
    return VIOLATION if failed else OK


def _graph_and_state(args):
    graph = clusters.build_case(args.case)
    state = None
    if getattr(args, "state", None):
        state = exprio.parse_cluster_state(_load(args.state), graph)
    elif getattr(args, "seed_plane", None):
        U = exprio.parse_matrix(_load(args.seed_plane))
        try:
            values = clusters.values_from_plane(U)
        except ValueError as exc:
            raise Failure(str(exc)) from None
        label = exprio.parse_cluster_label(args.cluster) if args.cluster else graph.vertices[0]
        state = clusters.make_cluster(graph, label, values)
    return graph, state


def cmd_cluster_build(args, out):
    graph, state = _graph_and_state(args)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(clusters.export_dot(graph))
    data = {
        "case": args.case,
        "clusters": [str(v) for v in graph.vertices],
        "stable": list(graph.stable),
        "mutations": [str(e) for e in graph.edges],
    }
    lines = [f"{len(graph.vertices)} clusters, {len(graph.pairs())} mutation pairs"]
    lines += [f"  {v}" for v in graph.vertices]
    lines += [f"  {e}" for e in graph.edges]
    code = OK
    if state is not None:
        gen = clusters.generate_all(state, graph, strict=False)
        data["seed"] = str(state.label)
        data["values"] = {k: str(v) for k, v in gen.values.items()}
        data["derivations"] = gen.derivations
        data["conflicts"] = sorted(set(gen.conflicts))
        lines.append(f"generated from {state.label}:")
        lines += [f"  {k} = {v}    [{gen.derivations[k]}]" for k, v in gen.values.items()]
        if gen.conflicts:
            lines.append("conflicts: " + ", ".join(sorted(set(gen.conflicts))))
            code = VIOLATION
    if args.walk:
        if state is None:
            raise Failure("--walk needs --seed-plane or --state")
        states = clusters.walk(graph, state, _steps(args.walk))
        data["walk"] = [exprio.cluster_to_json(s) for s in states]
        lines.append("walk: " + " -> ".join(str(s.label) for s in states))
    _emit(out, data, args.json, "\n".join(lines))
    return code


def cmd_cluster_mutate(args, out):
    graph, state = _graph_and_state(args)
    if state is None:
        raise Failure("mutate needs --state or --seed-plane")
    steps = _steps(args.step)
    if len(steps) != 1:
        raise Failure(f"expected one step, got {len(steps)}", PARSE)
    ((kind, key),) = steps
    m = graph.find(state.label, kind, key)
    new = clusters.mutate(state, m)
    doc = exprio.cluster_to_json(new, args.case)
    doc["mutation"] = str(m)
    _emit(out, doc, True)
    return OK


def cmd_cluster_walk(args, out):
    graph, state = _graph_and_state(args)
    if state is None:
        raise Failure("walk needs --state or --seed-plane")
    states = clusters.walk(graph, state, _steps(args.walk))
    data = [exprio.cluster_to_json(s, args.case) for s in states]
    text = "\n".join(
        f"{s.label}: " + ", ".join(f"{k}={s.assignment[k]}" for k in clusters.sort_symbols(s.assignment)) for s in states
    )
    _emit(out, data, args.json, text)
    return OK


def cmd_selftest(args, out):
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise Failure(f"bad --only {args.only!r}", PARSE) from None
    results = acceptance.run(quick=args.quick, only=only, echo=None if args.json else lambda l: (out.write(l + "\n"), out.flush()))
    passed = sum(r.passed for r in results)
    if args.json:
        _emit(out, [r.__dict__ for r in results], True)
    else:
        out.write(f"{passed}/{len(results)} criteria passed\n")
    return OK if passed == len(results) else INVALID


# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superplucker", description="Exact super linear algebra and super Pluecker coordinates.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, fn, help_, inp=True):
        q = parent.add_parser(name, help=help_)
        q.set_defaults(fn=fn)
        q.add_argument("--json", action="store_true", help="machine-readable output")
        if inp:
            q.add_argument("--in", dest="input", required=True, help="input JSON file, or - for stdin")
        return q

    q = add(sub, "ber", cmd_ber, "Berezinian of an even square supermatrix")
    q.add_argument("--star", action="store_true", help="inverse Berezinian (of the parity-reversed matrix)")
    q.add_argument("--cross-check", action="store_true", help="evaluate both Schur formulas and compare")
    q.add_argument("--strict", action="store_true", help="reject entries of the wrong parity")

    def dim_args(q):
        q.add_argument("--shape", required=True, help="r|s")
        q.add_argument("--ambient", required=True, help="n|m")

    dim_args(add(sub, "dim", cmd_dim, "dimension of a super Grassmannian", inp=False))

    g = sub.add_parser("grassmannian", help="charts and dimensions").add_subparsers(dest="action", required=True)
    dim_args(add(g, "dim", cmd_dim, "dimension of a super Grassmannian", inp=False))
    for name in ("normalize", "change-chart"):
        add(g, name, cmd_normalize, "representative that is the identity on the chart columns").add_argument(
            "--chart", required=True, help="a1,...,ar|mu1,...,mus"
        )

    pl = sub.add_parser("pluck", help="essential Pluecker coordinates").add_subparsers(dest="action", required=True)
    add(pl, "coords", cmd_pluck_coords, "essential coordinates of a plane")
    add(pl, "invert", cmd_pluck_invert, "rebuild the chart representative from coordinates").add_argument("--chart", required=True)
    q = add(pl, "check", cmd_pluck_check, "relations among essential coordinates")
    q.add_argument("--family", required=True, choices=["r0", "11", "rs"])
    q.add_argument("--limit", type=int, default=20, help="violations listed in text mode")

    mv = sub.add_parser("multivector", help="even multivectors").add_subparsers(dest="action", required=True)
    add(mv, "wedge", cmd_mv_wedge, "wedge of the rows of an even k|0 matrix")
    add(mv, "simple", cmd_mv_simple, "simplicity test with a factorization")
    q = add(mv, "check", cmd_mv_check, "Pluecker relations of a multivector")
    q.add_argument("--khudaverdian", action="store_true", help="also evaluate the Khudaverdian identities")
    q.add_argument("--limit", type=int, default=20)

    cl = sub.add_parser("cluster", help="super cluster structures on G_2(n|1)").add_subparsers(dest="action", required=True)
    for name, fn in (("build", cmd_cluster_build), ("mutate", cmd_cluster_mutate), ("walk", cmd_cluster_walk)):
        q = add(cl, name, fn, f"cluster {name}", inp=False)
        q.add_argument("--case", required=True, choices=["4_1", "5_1"])
        q.add_argument("--seed-plane", help="2|0-plane JSON supplying values")
        q.add_argument("--cluster", help="starting cluster, e.g. 'T13,T14|th1,th4'")
        q.add_argument("--state", help="cluster state JSON")
        if name == "build":
            q.add_argument("--dot", help="write the mutation graph in DOT format")
            q.add_argument("--walk", help="e.g. even:T14,odd:th1th5")
        elif name == "mutate":
            q.add_argument("--step", required=True, help="even:Tab or odd:thXthY")
        else:
            q.add_argument("--walk", required=True, help="e.g. even:T14,odd:th1th5")

    q = add(sub, "selftest", cmd_selftest, "run the acceptance criteria", inp=False)
    q.add_argument("--quick", action="store_true", help="small sample counts")
    q.add_argument("--only", help="comma separated criterion numbers")
    return p


def cli_dispatch(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    try:
        return args.fn(args, out)
    except Failure as exc:
        err.write(f"error: {exc}\n")
        return exc.code
    except exprio.ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return PARSE
    except (clusters.ClusterError, ChartError, NotInvertible, KeyError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return INVALID


def main(argv=None) -> int:
    return cli_dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
