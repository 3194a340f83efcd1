"""``jewelkit`` command line.

Exit status: 0 on success, 1 when a ``check`` fails, 2 on usage errors,
malformed input or violated preconditions.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import fixtures
from . import homology as hom
from . import io
from . import jacobian as jac
from . import jewel
from . import multigraph as mg
from . import spheresys as ss
from .errors import CertificationError, PreconditionError


class UsageError(Exception):
    pass


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, io.dumps(obj))


def _graph(args):
    if not args.graph:
        raise UsageError("--graph is required")
    return io.load_graph(args.graph)


def _params(args, g):
    return jewel.TruncationParams(args.N) if args.N is not None else jewel.TruncationParams.default(g)


def cmd_graph(args):
    g, genus = _graph(args)
    if args.action == "show":
        if args.format == "dot":
            _emit(args, io.graph_to_dot(g, genus))
        else:
            _emit_json(args, io.graph_to_dict(g, genus))
    elif args.action == "cores":
        _emit_json(args, {
            "core_subgraphs": [list(g.ordered(c)) for c in mg.enumerate_core_subgraphs(g, proper_only=not args.all)]
        })
    elif args.action == "info":
        _emit_json(args, {
            "vertices": len(g.vertices),
            "edges": len(g),
            "components": len(mg.components(g)),
            "first_betti": mg.first_betti(g),
            "core": bool(len(g)) and mg.is_core(g),
            "bridges": list(g.ordered(mg.bridges(g))),
        })
    return 0


def cmd_jewel(args):
    g, _ = _graph(args)
    params = _params(args, g)
    if args.action == "faces":
        poset = jewel.face_poset(g)
        out = io.poset_to_dict(poset)
        out["f_vector"] = poset.f_vector()
        _emit_json(args, out)
    elif args.action == "hrep":
        out = io.polytope_to_dict(jewel.hrep(g, params))
        out["N"] = params.N
        _emit_json(args, out)
    elif args.action == "vertices":
        _emit_json(args, {"N": params.N, "vertices": io.points_to_list(jewel.vertices(jewel.hrep(g, params)))})
    elif args.action == "check":
        ok = jewel.lattice_check(g, params)
        facets = {}
        for c in mg.enumerate_core_subgraphs(g):
            try:
                jewel.facet_product_iso(g, c)
                facets[",".join(g.ordered(c))] = True
            except CertificationError:
                facets[",".join(g.ordered(c))] = False
        _emit_json(args, {"N": params.N, "lattice_check": ok, "facet_product_iso": facets})
        return 0 if ok and all(facets.values()) else 1
    return 0


def _system(args):
    g, genus = _graph(args)
    return ss.DecoratedGraph(g, genus or {})


def _class_record(c: ss.SystemClass) -> dict:
    d = c.system
    return {
        "code": [c.code[0], list(c.code[1]), list(c.code[2])],
        "edges": c.edge_count,
        "vertices": c.vertex_count,
        "complete": c.complete,
        "core": c.core,
        "h": ss.h_value(d),
        "graph": io.graph_to_dict(d.graph, d.genus),
    }


def cmd_spheres(args):
    if args.action == "enumerate":
        if args.n is None:
            raise UsageError("--n is required")
        complete = True if args.complete else (False if args.incomplete else None)
        core = True if args.core else None
        lo = args.min_edges if args.min_edges is not None else 0
        hi = args.max_edges if args.max_edges is not None else 10 ** 9
        classes = ss.enumerate_classes(args.n, complete=complete, core=core, edge_range=(lo, hi), jobs=args.jobs)
        _emit_json(args, {"n": args.n, "count": len(classes), "classes": [_class_record(c) for c in classes]})
        return 0
    d = _system(args)
    ss.require_valid(d)
    if args.action == "validate":
        _emit_json(args, {"valid": True, "n": d.n, "complete": ss.is_complete(d), "core": ss.is_core(d),
                          "h": ss.h_value(d)})
    elif args.action == "core-complements":
        N = args.N if args.N is not None else jewel.TruncationParams.default(d.graph).N
        out = []
        for t in ss.core_complements(d):
            r, const = ss.r_and_t(d, t, N)
            out.append({"complement": list(d.graph.ordered(t)), "r": r, "t": io.fmt_rational(const)})
        _emit_json(args, {"N": N, "core_complements": out})
    elif args.action == "wall":
        w = ss.pieces(d)
        _emit_json(args, {
            "system": io.graph_to_dict(d.graph, d.genus),
            "jewel_f_vector": w.jewel().f_vector(),
            "pieces": [{"vertex": v, "n": n, "s": s} for v, (n, s) in zip(d.graph.vertices, w.pieces)],
        })
    elif args.action == "extend":
        s = ss.complete_extension(d)
        _emit_json(args, io.graph_to_dict(s.graph, s.genus))
    return 0


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_homology(args):
    if not args.complex:
        raise UsageError("--complex is required")
    data = _load_json(args.complex)
    if isinstance(data, dict) and "facets" in data:
        result = hom.simplicial_homology(data["facets"], reduced=data.get("reduced", True))
    elif isinstance(data, dict) and "boundaries" in data:
        cx = hom.ChainComplex(
            tuple(tuple(range(k)) for k in data["ranks"]),
            tuple([None] + data["boundaries"]),
            data.get("min_degree", 0),
        )
        result = hom.homology(cx)
    else:
        raise PreconditionError("complex JSON needs 'facets' or 'ranks'+'boundaries'", clause="complex-json")
    _emit_json(args, {"homology": result.as_records(), "euler_characteristic": result.euler_characteristic})
    return 0


def cmd_quotient_homology(args):
    if args.n is None:
        raise UsageError("--n is required")
    q = hom.quotient_chain_complex(args.n, jobs=args.jobs)
    result = hom.homology(q.complex)
    _emit_json(args, {
        "banner": q.banner,
        "n": args.n,
        "generators": [len(x) for x in q.complex.labels],
        "homology": result.as_records(),
        "euler_characteristic": result.euler_characteristic,
    })
    return 0


def cmd_jacobian(args):
    g, _ = _graph(args)
    if not args.lengths:
        raise UsageError("--lengths is required")
    raw = _load_json(args.lengths)
    if not isinstance(raw, dict):
        raise PreconditionError("lengths JSON must map edge ids to \"p/q\" strings", clause="lengths-json")
    metric = jac.MetricGraph(g, {e: io.parse_rational(x) for e, x in raw.items()})
    q = jac.jacobian_form(metric, weights="unit" if args.unit_weights else "length")
    _emit_json(args, {
        "weights": "unit" if args.unit_weights else "length",
        "cycle_basis": jac.cycle_basis(g),
        "form": io.matrix_to_list(q),
        "positive_definite": jac.is_positive_definite(q),
    })
    return 0


def cmd_check(args):
    names = list(fixtures.FIXTURES) if args.fixture == "all" else [args.fixture]
    reports = [fixtures.FIXTURES[name]() for name in names]
    _emit_json(args, {"reports": [r.as_dict() for r in reports]})
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (JSON or DOT)")
    common.add_argument("--N", type=int, help="truncation scale N")
    common.add_argument("--n", type=int, help="rank n of M_n")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="jewelkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[common])
    p.add_argument("action", choices=("show", "info", "cores"))
    p.add_argument("--all", action="store_true", help="include the whole graph among cores")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("jewel", parents=[common])
    p.add_argument("action", choices=("faces", "hrep", "vertices", "check"))
    p.set_defaults(func=cmd_jewel)

    p = sub.add_parser("spheres", parents=[common])
    p.add_argument("action", choices=("enumerate", "validate", "core-complements", "wall", "extend"))
    group = p.add_mutually_exclusive_group()
    group.add_argument("--complete", action="store_true")
    group.add_argument("--incomplete", action="store_true")
    p.add_argument("--core", action="store_true")
    p.add_argument("--min-edges", type=int)
    p.add_argument("--max-edges", type=int)
    p.set_defaults(func=cmd_spheres)

    p = sub.add_parser("homology", parents=[common])
    p.add_argument("--complex", help="complex JSON")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("quotient-homology", parents=[common])
    p.set_defaults(func=cmd_quotient_homology)

    p = sub.add_parser("jacobian", parents=[common])
    p.add_argument("--lengths", help="JSON object edge id -> \"p/q\"")
    p.add_argument("--unit-weights", action="store_true", help="unweighted inner product on edge space")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("check", parents=[common])
    p.add_argument("fixture", choices=tuple(fixtures.FIXTURES) + ("all",))
    p.set_defaults(func=cmd_check)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", file=sys.stderr)
    except PreconditionError as exc:
        print(f"error: [{exc.clause}] {exc}", file=sys.stderr)
    except (OSError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


def main():
    sys.exit(run())
