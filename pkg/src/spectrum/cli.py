"""``spectrum`` command line.

Every report is a JSON object with sorted keys that echoes the command,
package version, seed and tolerances. Numbers carry a provenance tag.
Only the ``timestamp`` field varies between identical runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from . import corners as cn
from . import graph as gr
from . import verify
from .graph import Graph
from .parameters import ParamValue, chromatic_number, geometric_mean, named_graph, spectral_point
from .prob_types import Distribution, materialization_cap, shannon_entropy
from .refinement import combine_lambda, corner_refinement, fekete_estimate, reproduce_incomparable_example

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2
TOLERANCES = {"exact": 0.0, "sdp": verify.TOL_SDP, "entropy": verify.TOL_FW,
              "entropy_gap": cn.ENTROPY_TOL}
PARAMS = ("alpha", "clique_cover", "chromatic", "fractional_clique_cover", "chi_bar_f", "theta", "haemersF2")


class UsageError(Exception):
    pass


def _num(x, provenance: str = "computed") -> dict:
    if isinstance(x, ParamValue):
        return x.to_json_dict()
    return {"value": float(x), "provenance": provenance}


# input parsing

def load_graph(spec: str) -> Graph:
    """``g6:<code>``, a JSON or graph6 file, or a named graph such as ``C5``."""
    if spec.startswith("g6:"):
        try:
            return gr.from_graph6(spec[3:])
        except Exception as exc:
            raise UsageError(f"cannot decode graph6 string {spec[3:]!r}: {exc}") from None
    if os.path.exists(spec):
        text = open(spec, encoding="utf-8").read()
        if spec.endswith(".json") or text.lstrip().startswith("{"):
            try:
                return gr.from_json(text)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{spec}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
            except (KeyError, ValueError, TypeError) as exc:
                raise UsageError(f"{spec}: invalid graph JSON: {exc}") from None
        line = text.strip().splitlines()[0] if text.strip() else ""
        try:
            return gr.from_graph6(line)
        except Exception as exc:
            raise UsageError(f"{spec}:1: cannot decode graph6: {exc}") from None
    try:
        return named_graph(spec)
    except (KeyError, ValueError):
        raise UsageError(f"graph {spec!r} is neither g6:..., an existing file nor a known name") from None


def load_dist(spec: str | None, G: Graph) -> Distribution:
    """A distribution JSON file, a comma-separated weight list, or ``uniform``."""
    if spec is None or spec == "uniform":
        return Distribution.uniform(G.labels)
    if os.path.exists(spec):
        text = open(spec, encoding="utf-8").read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{spec}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    else:
        data = spec.split(",")
    try:
        if isinstance(data, dict):
            P = Distribution.from_json_dict(data)
        else:
            ws = [Fraction(w.strip()) if isinstance(w, str) else w for w in data]
            if len(ws) != G.n:
                raise ValueError(f"{len(ws)} weights for {G.n} vertices")
            P = Distribution(G.labels, ws)
        return P.on(G.labels)
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid distribution {spec!r}: {exc}") from None


def evaluate_param(name: str, G: Graph, graph_spec: str) -> ParamValue:
    if name == "chromatic":
        return ParamValue.rational(chromatic_number(G))
    point = spectral_point(name)
    if point.fixtures and graph_spec in point.fixtures:
        return point.fixtures[graph_spec]
    return point.evaluate(G)


# subcommands

def cmd_param(args, out: dict) -> int:
    G = load_graph(args.graph)
    names = args.param or ["theta"]
    vals = {}
    for name in names:
        vals[name] = evaluate_param(name, G, args.graph).to_json_dict()
    out["result"] = {"graph": gr.to_json_dict(G), "vertices": G.n, "values": vals}
    if len(names) == 1:
        out["result"]["value"] = vals[names[0]]
    if args.lam is not None:
        if len(names) != 2:
            raise UsageError("--lambda needs exactly two --param values")
        lam = Fraction(args.lam)
        v = geometric_mean(*(evaluate_param(n, G, args.graph) for n in names), lam)
        out["result"]["combined"] = {"lambda": str(lam), "value": v.to_json_dict()}
    return EXIT_OK


PRODUCT_OPS = ("strong", "costrong", "lexicographic", "disjoint_union", "join", "intersection",
               "union", "complement", "power")


def cmd_product(args, out: dict) -> int:
    graphs = [load_graph(g) for g in args.graph]
    op = args.op or "strong"
    if op not in PRODUCT_OPS:
        raise UsageError(f"--op must be one of {PRODUCT_OPS}")
    if op in ("complement", "power"):
        if len(graphs) != 1:
            raise UsageError(f"{op} takes exactly one --graph")
        G = gr.complement(graphs[0]) if op == "complement" else \
            gr.strong_power(graphs[0], args.k_max or 2, cap=materialization_cap(args.cap))
    else:
        if len(graphs) < 2:
            raise UsageError(f"{op} needs at least two --graph values")
        fn = {"strong": gr.strong_product, "costrong": gr.costrong_product,
              "lexicographic": gr.lexicographic_product, "disjoint_union": gr.disjoint_union,
              "join": gr.join, "intersection": gr.intersection, "union": gr.edge_union}[op]
        G = graphs[0]
        for H in graphs[1:]:
            G = fn(G, H)
    res = {"op": op, "vertices": G.n, "edges": G.num_edges, "graph": gr.to_json_dict(G)}
    if G.n <= 62:
        res["graph6"] = gr.to_graph6(G)
    out["result"] = res
    return EXIT_OK


def cmd_refine(args, out: dict) -> int:
    G = load_graph(args.graph)
    P = load_dist(args.dist, G)
    names = args.param or ["theta"]
    H = shannon_entropy(P)
    res = {"graph": gr.to_json_dict(G), "distribution": P.to_json_dict(), "entropy": _num(H), "refinements": {}}
    ok = True
    for name in names:
        F = corner_refinement(name)
        sol = cn.entropy_solve(F.corner(G), P.on(G.labels).as_array())
        entry = {"corner": {"value": _num(sol.value), "gap": _num(sol.gap),
                            "certified_direction": "upper", "method": "corner entropy"},
                 "complementary": _num(H - F(gr.complement(G), P))}
        if args.k_max:
            est = fekete_estimate(name, G, P, args.k_max, cap=materialization_cap(args.cap))
            entry["fekete"] = {"value": _num(est.value), "certified_direction": est.certified_direction,
                               "method": est.method,
                               "trace": [{**t, "provenance": "computed"} for t in est.trace]}
            cmp = {"fekete <= corner": est.value <= sol.value + verify.TOL_FW,
                   "fekete <= H(P)": est.value <= H + 1e-9,
                   "trace nondecreasing": all(b["running_max"] >= a["running_max"]
                                              for a, b in zip(est.trace, est.trace[1:]))}
            entry["comparisons"] = cmp
            ok = ok and all(cmp.values())
        res["refinements"][name] = entry
    if args.lam is not None:
        if len(names) != 2:
            raise UsageError("--lambda needs exactly two --param values")
        lam = float(Fraction(args.lam))
        v = combine_lambda(corner_refinement(names[0]), corner_refinement(names[1]), lam, G, seed=args.seed)
        res["combined"] = {"lambda": str(Fraction(args.lam)), "max_P": _num(v), "bound": _num(2.0**v)}
    out["result"] = res
    return EXIT_OK if ok else EXIT_CHECK


CORNER_OPS = ("vertex_packing", "theta_body", "vertex_packing_antiblocker", "theta_body_antiblocker")


def cmd_corner(args, out: dict) -> int:
    G = load_graph(args.graph)
    op = args.op or "vertex_packing"
    if op not in CORNER_OPS:
        raise UsageError(f"--op must be one of {CORNER_OPS}")
    base = cn.vertex_packing(G) if op.startswith("vertex_packing") else cn.theta_body(G)
    A = base.antiblocker() if op.endswith("antiblocker") else base
    res = {"op": op, "graph": gr.to_json_dict(G)}
    if isinstance(A, cn.GeneratorCorner):
        res["corner"] = A.to_json_dict()
    res["max_entropy"] = _num(cn.max_entropy_closed_form(A))
    ok = True
    if args.dist is not None:
        P = load_dist(args.dist, G)
        p = P.as_array()
        ha = cn.entropy(A, p)
        hb = cn.entropy(A.antiblocker(), p)
        H = shannon_entropy(p)
        tol = verify.TOL_SDP if "theta" in op else 1e-5
        ok = abs(H - ha - hb) <= tol
        res["entropy"] = {"distribution": P.to_json_dict(), "H_A": _num(ha), "H_A*": _num(hb), "H": _num(H),
                          "duality_holds": ok, "tolerance": tol}
    out["result"] = res
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify(args, out: dict) -> int:
    suite = args.suite or "all"
    led = verify.Ledger()
    out["result"] = led
    verify.run_suite(suite, seed=args.seed, ledger=led)
    return EXIT_OK if led.ok else EXIT_CHECK


def cmd_repro(args, out: dict) -> int:
    rep = reproduce_incomparable_example()
    out["result"] = {"graph": rep["graph"],
                     "values": {k: v.to_json_dict() for k, v in rep["values"].items()},
                     "checks": rep["checks"]}
    return EXIT_OK if all(rep["checks"].values()) else EXIT_CHECK


COMMANDS = {"param": cmd_param, "product": cmd_product, "refine": cmd_refine, "corner": cmd_corner,
            "verify": cmd_verify, "repro-example": cmd_repro}


# output

def _finalize(out: dict) -> dict:
    res = out.get("result")
    if isinstance(res, verify.Ledger):
        out["result"] = res.to_json_dict()
    return out


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"
    rows = list(_flatten(json.loads(json.dumps(report, default=_json_default))))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset, tuple)):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spectrum", description="Spectral graph parameters, refinements and corners.")
    p.add_argument("--version", action="version", version=f"spectrum {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--seed", type=int, default=verify.SEED, help="random seed (default %(default)s)")
        sp.add_argument("--cap", type=int, default=None,
                        help="vertex cap for materialized graphs (default: $SPECTRUM_CAP or 2000000)")

    graph_help = "g6:<graph6>, a JSON/graph6 file, or a name such as C5, P4, Petersen, K33, J2_12"
    sp = sub.add_parser("param", help="evaluate graph parameters")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--param", action="append", choices=PARAMS, help="parameter (repeatable, default theta)")
    sp.add_argument("--lambda", dest="lam", help="combine two parameters as f0^(1-lambda) f1^lambda")
    common(sp)
    sp = sub.add_parser("product", help="build a graph from others")
    sp.add_argument("--graph", action="append", required=True, help=graph_help + " (repeatable)")
    sp.add_argument("--op", help=f"one of {', '.join(PRODUCT_OPS)} (default strong)")
    sp.add_argument("--k-max", type=int, help="exponent for --op power")
    common(sp)
    sp = sub.add_parser("refine", help="probabilistic refinement at a distribution")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--dist", help="distribution JSON file, comma-separated weights, or 'uniform'")
    sp.add_argument("--param", action="append", choices=PARAMS, help="parameter with a corner (repeatable)")
    sp.add_argument("--k-max", type=int, help="run type-graph lower bounds for k = 1..K")
    sp.add_argument("--lambda", dest="lam", help="maximize (1-lambda)F0 + lambda F1 over distributions")
    common(sp)
    sp = sub.add_parser("corner", help="convex corners of a graph and their entropy")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--op", help=f"one of {', '.join(CORNER_OPS)} (default vertex_packing)")
    sp.add_argument("--dist", help="evaluate corner entropy and the duality identity here")
    common(sp)
    sp = sub.add_parser("verify", help="run property suites and write a ledger")
    sp.add_argument("--suite", choices=verify.SUITES, default="all")
    common(sp)
    sp = sub.add_parser("repro-example", help="reproduce the worked incomparability example")
    common(sp)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.cap is not None:
        os.environ["SPECTRUM_CAP"] = str(args.cap)
    report = {"command": ["spectrum", *argv], "version": __version__, "seed": args.seed,
              "tolerances": TOLERANCES, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")}
    try:
        code = COMMANDS[args.command](args, report)
    except KeyboardInterrupt:
        report["interrupted"] = True
        code = 130
    except UsageError as exc:
        print(f"spectrum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (gr.GraphSizeError, KeyError, ValueError, OSError) as exc:
        print(f"spectrum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report["exit_code"] = code
    text = render(_finalize(report), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
