"""JSON and DOT serialization.

Rationals are always written as ``"p/q"`` strings in lowest terms, so
outputs compare byte for byte.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import PreconditionError
from .multigraph import MultiGraph


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise PreconditionError(f"not a rational: {s!r}", clause="rational-format")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise PreconditionError(f"not a rational: {s!r}", clause="rational-format") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def graph_to_dict(g: MultiGraph, genus: dict | None = None) -> dict:
    verts = []
    for v in g.vertices:
        item = {"id": v}
        if genus is not None:
            item["genus"] = genus.get(v, 0)
        verts.append(item)
    return {
        "vertices": verts,
        "edges": [{"id": e, "ends": [u, v]} for e, (u, v) in g.edges],
    }


def _expect(cond, where, what):
    if not cond:
        raise PreconditionError(f"{where}: {what}", clause="graph-json")


def graph_from_dict(data) -> tuple[MultiGraph, dict | None]:
    """Parse graph JSON; returns the graph and the genus map (``None`` if undecorated)."""
    _expect(isinstance(data, dict), "$", "expected an object")
    _expect(isinstance(data.get("vertices"), list), "$.vertices", "expected a list")
    _expect(isinstance(data.get("edges"), list), "$.edges", "expected a list")
    verts, genus = [], {}
    decorated = False
    for i, item in enumerate(data["vertices"]):
        where = f"$.vertices[{i}]"
        _expect(isinstance(item, dict) and isinstance(item.get("id"), int)
                and not isinstance(item.get("id"), bool), where, "expected {\"id\": <int>}")
        verts.append(item["id"])
        if "genus" in item:
            decorated = True
            _expect(isinstance(item["genus"], int) and item["genus"] >= 0, where + ".genus",
                    "expected a nonnegative integer")
            genus[item["id"]] = item["genus"]
    edges = []
    for i, item in enumerate(data["edges"]):
        where = f"$.edges[{i}]"
        _expect(isinstance(item, dict) and isinstance(item.get("id"), str), where, "expected {\"id\": <string>, ...}")
        ends = item.get("ends")
        _expect(isinstance(ends, list) and len(ends) == 2, where + ".ends", "expected two vertex ids")
        edges.append((item["id"], tuple(ends)))
    return MultiGraph(verts, edges), (genus if decorated else None)


def graph_to_dot(g: MultiGraph, genus: dict | None = None) -> str:
    lines = ["graph G {"]
    for v in g.vertices:
        attr = f" [genus={genus.get(v, 0)}]" if genus is not None else ""
        lines.append(f"  {v}{attr};")
    for e, (u, v) in g.edges:
        lines.append(f'  {u} -- {v} [label="{e}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_VERTEX = re.compile(r"^\s*(-?\d+)(?:\s*\[genus=(\d+)\])?\s*;\s*$")
_DOT_EDGE = re.compile(r'^\s*(-?\d+)\s*--\s*(-?\d+)\s*\[label="([^"]*)"\]\s*;\s*$')


def graph_from_dot(text: str) -> tuple[MultiGraph, dict | None]:
    """Parse the DOT subset written by ``graph_to_dot``."""
    lines = text.strip().splitlines()
    if not lines or not re.match(r"^\s*graph\s+\w*\s*\{\s*$", lines[0]) or lines[-1].strip() != "}":
        raise PreconditionError("line 1: expected 'graph G { ... }'", clause="graph-dot")
    verts, genus, edges = [], {}, []
    decorated = False
    for lineno, line in enumerate(lines[1:-1], start=2):
        if not line.strip():
            continue
        m = _DOT_EDGE.match(line)
        if m:
            edges.append((m.group(3), (int(m.group(1)), int(m.group(2)))))
            continue
        m = _DOT_VERTEX.match(line)
        if m:
            v = int(m.group(1))
            verts.append(v)
            if m.group(2) is not None:
                decorated = True
                genus[v] = int(m.group(2))
            continue
        raise PreconditionError(f"line {lineno}: cannot parse {line.strip()!r}", clause="graph-dot")
    return MultiGraph(verts, edges), (genus if decorated else None)


def load_graph(path: str) -> tuple[MultiGraph, dict | None]:
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".dot") or text.lstrip().startswith("graph"):
        return graph_from_dot(text)
    return graph_from_dict(json.loads(text))


def sorted_edges(g: MultiGraph, a) -> list:
    return list(g.ordered(a))


def polytope_to_dict(p) -> dict:
    return {
        "coordinates": list(p.coords),
        "equality": {"coefficients": [fmt_rational(1)] * len(p.coords), "rhs": fmt_rational(1)},
        "inequalities": [
            {
                "coefficients": [fmt_rational(a) for a in row],
                "rhs": fmt_rational(b),
                "tag": [tag[0], tag[1] if tag[0] == "edge" else sorted(tag[1], key=p.coords.index)],
            }
            for row, b, tag in zip(p.rows, p.rhs, p.tags)
        ],
    }


def points_to_list(points) -> list:
    return [[fmt_rational(x) for x in pt] for pt in points]


def label_to_dict(g: MultiGraph, s) -> dict:
    return {"forest": sorted_edges(g, s.forest), "chain": [sorted_edges(g, c) for c in s.chain]}


def poset_to_dict(poset) -> dict:
    g = poset.graph
    faces = list(poset.faces)
    return {
        "faces": [label_to_dict(g, s) for s in faces],
        "order": [[i, j] for i, s in enumerate(faces) for j, t in enumerate(faces) if i != j and s.contains(t)],
    }


def matrix_to_list(q) -> list:
    return [[fmt_rational(x) for x in row] for row in q]
