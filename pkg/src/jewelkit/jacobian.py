"""The Jacobian map from metric graphs to positive definite quadratic forms.

The inner product on edge space weights edge ``e`` by its length by
default (``weights="length"``); ``weights="unit"`` uses the plain
standard inner product instead.
"""
from __future__ import annotations

import random
from functools import lru_cache
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from collections.abc import Mapping

from . import jewel
from . import multigraph as mg
from . import spheresys as ss
from .errors import PreconditionError
from .multigraph import MultiGraph


@dataclass(frozen=True)
class MetricGraph:
    graph: MultiGraph
    lengths: Mapping

    def __post_init__(self):
        lengths = {e: Fraction(self.lengths[e]) for e in self.graph.edge_ids if e in self.lengths}
        object.__setattr__(self, "lengths", lengths)
        if set(lengths) != set(self.graph.edge_ids):
            raise PreconditionError("every edge needs a length", clause="lengths-cover-edges")
        if any(x <= 0 for x in lengths.values()):
            raise PreconditionError("edge lengths must be positive", clause="positive-lengths")
        if sum(lengths.values()) != 1:
            raise PreconditionError("edge lengths must sum to 1", clause="unit-volume")
        if len(mg.components(self.graph)) != 1 or not mg.is_core(self.graph):
            raise PreconditionError("metric graphs are connected core graphs", clause="connected-core")


def spanning_tree(g: MultiGraph) -> list:
    """Breadth-first spanning tree from the first vertex, edges scanned in host order."""
    if not g.vertices or len(mg.components(g)) != 1:
        raise PreconditionError("cycle basis needs a connected graph", clause="connected")
    seen = {g.vertices[0]}
    queue = deque([g.vertices[0]])
    tree = []
    while queue:
        v = queue.popleft()
        for e, (a, b) in g.edges:
            if v not in (a, b) or a == b:
                continue
            w = b if a == v else a
            if w not in seen:
                seen.add(w)
                tree.append(e)
                queue.append(w)
    return tree


def cycle_basis(g: MultiGraph, tree=None) -> list[list[int]]:
    """Fundamental cycles of a spanning tree as integer vectors indexed by ``g.edge_ids``.

    Each non-tree edge ``f = (a, b)`` is traversed from ``a`` to ``b`` and
    closed up through the tree.
    """
    if len(mg.components(g)) != 1:
        raise PreconditionError("cycle basis needs a connected graph", clause="connected")
    tree = spanning_tree(g) if tree is None else list(tree)
    if len(tree) != len(g.vertices) - 1 or not mg.is_forest(g, tree):
        raise PreconditionError("not a spanning tree", clause="spanning-tree")
    root = g.vertices[0]
    parent = {root: None}
    adj: dict = {}
    for e in tree:
        a, b = g.ends(e)
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    stack = [root]
    while stack:
        v = stack.pop()
        for w, e in adj.get(v, ()):
            if w not in parent:
                parent[w] = (v, e)
                stack.append(w)
    col = {e: i for i, e in enumerate(g.edge_ids)}

    def to_root(v, vec, sign):
        # add sign * (path v -> root) to vec
        while parent[v] is not None:
            up, e = parent[v]
            vec[col[e]] += sign * (1 if g.ends(e) == (v, up) else -1)
            v = up

    in_tree = set(tree)
    basis = []
    for f, (a, b) in g.edges:
        if f in in_tree:
            continue
        vec = [0] * len(col)
        vec[col[f]] = 1
        if a != b:
            to_root(b, vec, 1)
            to_root(a, vec, -1)
        basis.append(vec)
    return basis


def jacobian_form(metric: MetricGraph, tree=None, weights: str = "length") -> list[list[Fraction]]:
    """Gram matrix of the cycle basis under the chosen inner product on edge space."""
    return _gram(metric.graph, metric.lengths, weights, tree)


def determinant(q) -> Fraction:
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def is_positive_definite(q) -> bool:
    n = len(q)
    if any(q[i][j] != q[j][i] for i in range(n) for j in range(n)):
        raise PreconditionError("quadratic form must be symmetric", clause="symmetric")
    return all(determinant([row[:k] for row in q[:k]]) > 0 for k in range(1, n + 1))


def facet_points(d: ss.DecoratedGraph, t, count: int, N: int | None = None,
                 rng: random.Random | None = None) -> list[dict]:
    """Exact points on the facet of J(S) that truncates the face sigma(t).

    Points are random convex combinations of the facet's vertices, so the
    lengths on the complement of ``t`` sum to the truncation constant.
    """
    rng = rng or random.Random(0)
    if count <= 0:
        return []
    g = d.graph
    poly, all_verts = _jewel_vertices(g, N)
    core = g.edge_set() - g.check_edges(t)
    row = poly.tags.index(("core", core))
    verts = [x for x in all_verts if sum(a * xi for a, xi in zip(poly.rows[row], x)) == poly.rhs[row]]
    out = []
    for _ in range(count):
        weights = [Fraction(rng.randint(1, 16)) for _ in verts]
        total = sum(weights)
        point = [sum(w * v[i] for w, v in zip(weights, verts)) / total for i in range(len(g))]
        out.append(dict(zip(g.edge_ids, point)))
    return out


@lru_cache(maxsize=256)
def _jewel_vertices(g: MultiGraph, N):
    params = jewel.TruncationParams(N) if N else jewel.TruncationParams.default(g)
    poly = jewel.hrep(g, params)
    return poly, tuple(jewel.vertices(poly))


def boundary_samples(n: int, count: int, N: int | None = None, seed: int = 0,
                     weights: str = "length") -> list[dict]:
    """Jacobian forms at points of border facets of complete core systems of rank ``n``.

    Samples cycle round-robin over (system, core complement) pairs. Each record
    carries the class code, the complement, the lengths and the form.
    """
    if count <= 0:
        return []
    rng = random.Random(seed)
    facets = [
        (c, t)
        for c in ss.enumerate_classes(n, complete=True, core=True)
        for t in ss.core_complements(c.system)
    ]
    out = []
    for i in range(count):
        c, t = facets[i % len(facets)]
        (lengths,) = facet_points(c.system, t, 1, N, rng)
        form = jacobian_form(MetricGraph(c.system.graph, lengths), weights=weights)
        out.append({"code": c.code, "complement": c.system.graph.ordered(t), "lengths": lengths, "form": form})
    return out


def _gram(g: MultiGraph, lengths: Mapping, weights: str, tree=None) -> list[list[Fraction]]:
    if weights not in ("length", "unit"):
        raise PreconditionError(f"unknown weighting {weights!r}", clause="weights")
    w = [lengths[e] if weights == "length" else Fraction(1) for e in g.edge_ids]
    basis = cycle_basis(g, tree)
    return [[sum((wi * x * y for wi, x, y in zip(w, zi, zj)), Fraction(0)) for zj in basis] for zi in basis]
