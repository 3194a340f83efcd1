"""Finite multigraphs with loops and the subgraph calculus on edge sets.

Subgraphs are always given as sets of edge identifiers of a host graph; the
spanned subgraph keeps exactly the vertices met by those edges.
"""
from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import PreconditionError

EdgeSet = frozenset


class MultiGraph:
    """An immutable finite multigraph.

    ``edges`` is a sequence of ``(edge_id, (u, v))`` pairs; ``u == v`` is a
    loop. The stored endpoint order is kept (it fixes an orientation used by
    the cycle space) but has no combinatorial meaning.
    """

    __slots__ = ("_vertices", "_edges", "_ends", "_index", "_hash")

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[tuple]):
        self._vertices = tuple(vertices)
        if len(set(self._vertices)) != len(self._vertices):
            raise PreconditionError("duplicate vertex identifier", clause="unique-vertex-ids")
        vset = set(self._vertices)
        items = []
        for eid, ends in edges:
            u, v = ends
            if u not in vset or v not in vset:
                raise PreconditionError(
                    f"edge {eid!r} has an endpoint that is not a vertex", clause="edge-endpoints"
                )
            items.append((eid, (u, v)))
        self._edges = tuple(items)
        self._ends = dict(self._edges)
        if len(self._ends) != len(self._edges):
            raise PreconditionError("duplicate edge identifier", clause="unique-edge-ids")
        self._index = {eid: i for i, (eid, _) in enumerate(self._edges)}
        self._hash = None

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def edge_ids(self) -> tuple:
        return tuple(eid for eid, _ in self._edges)

    def ends(self, e) -> tuple:
        try:
            return self._ends[e]
        except KeyError:
            raise PreconditionError(f"unknown edge identifier {e!r}", clause="known-edges") from None

    def is_loop(self, e) -> bool:
        u, v = self.ends(e)
        return u == v

    def edge_set(self) -> EdgeSet:
        return EdgeSet(self._ends)

    def index(self, e) -> int:
        return self._index[e]

    def check_edges(self, a: Iterable) -> EdgeSet:
        a = EdgeSet(a)
        for e in a:
            if e not in self._ends:
                raise PreconditionError(f"unknown edge identifier {e!r}", clause="known-edges")
        return a

    def ordered(self, a: Iterable) -> tuple:
        """Edge ids of ``a`` in host order."""
        return tuple(sorted(a, key=self._index.__getitem__))

    def sort_key(self, a: Iterable) -> tuple:
        return tuple(sorted(self._index[e] for e in a))

    def degree(self, v) -> int:
        return sum((u == v) + (w == v) for _, (u, w) in self._edges)

    def subgraph(self, a: Iterable) -> MultiGraph:
        """The subgraph spanned by the edge set ``a``."""
        a = self.check_edges(a)
        touched = set()
        for e in a:
            touched.update(self._ends[e])
        return MultiGraph(
            (v for v in self._vertices if v in touched),
            ((e, ends) for e, ends in self._edges if e in a),
        )

    def __len__(self):
        return len(self._edges)

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vertices, self._edges))
        return self._hash

    def __repr__(self):
        es = ", ".join(f"{e}:{u}-{v}" for e, (u, v) in self._edges)
        return f"MultiGraph(V={list(self._vertices)}, E=[{es}])"


class _UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


def _span_vertices(g: MultiGraph, a) -> list:
    touched = set()
    for e in a:
        touched.update(g.ends(e))
    return [v for v in g.vertices if v in touched]


def components(g: MultiGraph, a: Iterable | None = None) -> list[list]:
    """Vertex classes of ``g`` connected by the edges ``a`` (default: all edges).

    Every vertex of ``g`` appears, so vertices untouched by ``a`` are
    singleton classes. Classes are listed in host vertex order.
    """
    edges = g.edge_ids if a is None else g.check_edges(a)
    uf = _UnionFind(g.vertices)
    for e in edges:
        uf.union(*g.ends(e))
    classes: dict = {}
    for v in g.vertices:
        classes.setdefault(uf.find(v), []).append(v)
    return list(classes.values())


def first_betti(g: MultiGraph, a: Iterable | None = None) -> int:
    """Rank of the cycle space of the subgraph spanned by ``a``."""
    a = g.edge_set() if a is None else g.check_edges(a)
    verts = _span_vertices(g, a)
    uf = _UnionFind(verts)
    merges = sum(uf.union(*g.ends(e)) for e in a)
    # |a| - |V| + #components == |a| - merges
    return len(a) - merges


def bridges(g: MultiGraph, a: Iterable | None = None) -> EdgeSet:
    """Edges of ``a`` whose removal disconnects their component of span(a).

    Iterative lowpoint DFS keyed on edge ids, so parallel edges are never
    mistaken for the tree edge they duplicate.
    """
    a = g.edge_set() if a is None else g.check_edges(a)
    adj: dict = {}
    for e in g.ordered(a):
        u, v = g.ends(e)
        if u == v:
            continue
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    order: dict = {}
    low: dict = {}
    found = set()
    counter = 0
    for root in adj:
        if root in order:
            continue
        order[root] = low[root] = counter
        counter += 1
        stack = [(root, None, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, e in it:
                if e == via:
                    continue
                if w in order:
                    low[v] = min(low[v], order[w])
                else:
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append((w, e, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > order[parent]:
                        found.add(via)
    return EdgeSet(found)


def is_core(g: MultiGraph, a: Iterable | None = None) -> bool:
    """True iff the (nonempty) subgraph spanned by ``a`` has no bridge."""
    a = g.edge_set() if a is None else g.check_edges(a)
    if not a:
        raise PreconditionError("a subgraph needs at least one edge", clause="nonempty-subgraph")
    return not bridges(g, a)


def core_of(g: MultiGraph, a: Iterable) -> EdgeSet:
    """The edges of ``a`` lying on a cycle of span(a); empty for forests."""
    a = g.check_edges(a)
    return a - bridges(g, a) if a else EdgeSet()


def is_forest(g: MultiGraph, a: Iterable) -> bool:
    return first_betti(g, a) == 0


def complement(g: MultiGraph, a: Iterable) -> EdgeSet:
    a = g.check_edges(a)
    rest = g.edge_set() - a
    if not rest:
        raise PreconditionError("complement of all edges is not a subgraph", clause="proper-subgraph")
    return rest


def collapse(g: MultiGraph, a: Iterable) -> MultiGraph:
    """Collapse every edge of ``a`` to a point.

    Each merged vertex class is named by its first member in host order.
    """
    a = g.check_edges(a)
    if not a:
        return g
    uf = _UnionFind(g.vertices)
    for e in a:
        uf.union(*g.ends(e))
    rep = {}
    for v in g.vertices:
        rep.setdefault(uf.find(v), v)
    name = {v: rep[uf.find(v)] for v in g.vertices}
    keep = [v for v in g.vertices if name[v] == v]
    return MultiGraph(keep, ((e, (name[u], name[v])) for e, (u, v) in g.edges if e not in a))


def nonempty_subsets(g: MultiGraph) -> Iterator[EdgeSet]:
    ids = g.edge_ids
    for r in range(1, len(ids) + 1):
        for combo in itertools.combinations(ids, r):
            yield EdgeSet(combo)


def enumerate_core_subgraphs(g: MultiGraph, proper_only: bool = True) -> list[EdgeSet]:
    """All (proper) core subgraphs, ordered by rank, then size, then host order."""
    full = g.edge_set()
    found = [a for a in nonempty_subsets(g) if not (proper_only and a == full) and not bridges(g, a)]
    found.sort(key=lambda a: (first_betti(g, a), len(a), g.sort_key(a)))
    return found


# --------------------------------------------------------------------------
# canonical forms

def adjacency(g: MultiGraph) -> list[list[int]]:
    """Symmetric multiplicity matrix in vertex order; loops counted once on the diagonal."""
    pos = {v: i for i, v in enumerate(g.vertices)}
    n = len(pos)
    m = [[0] * n for _ in range(n)]
    for _, (u, v) in g.edges:
        i, j = pos[u], pos[v]
        m[i][j] += 1
        if i != j:
            m[j][i] += 1
    return m


def _rank(keys: Sequence) -> list[int]:
    table = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _refine(m, colors: list[int]) -> list[int]:
    n = len(m)
    count = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted((colors[w], m[v][w]) for w in range(n) if w != v and m[v][w])))
            for v in range(n)
        ]
        colors = _rank(sigs)
        new_count = len(set(colors))
        if new_count == count:
            return colors
        count = new_count


class CanonicalForm:
    """Result of a canonical labeling search.

    ``code`` is the isomorphism invariant; ``orderings`` lists every vertex
    ordering (as tuples of vertex positions in the input graph) attaining it.
    Any two of them differ by an automorphism.
    """

    __slots__ = ("code", "orderings")

    def __init__(self, code, orderings):
        self.code = code
        self.orderings = orderings


def canonical_search(m: list[list[int]], labels: Sequence[int]) -> CanonicalForm:
    """Individualize-and-refine search over vertex orderings of a labeled multigraph matrix."""
    n = len(m)
    init = _rank([(labels[v], m[v][v], sum(m[v]) + m[v][v]) for v in range(n)])
    best = [None, []]

    def leaf_code(perm):
        return (
            n,
            tuple(labels[v] for v in perm),
            tuple(m[perm[i]][perm[j]] for i in range(n) for j in range(i, n)),
        )

    def descend(colors):
        colors = _refine(m, colors)
        cells: dict = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            perm = tuple(sorted(range(n), key=colors.__getitem__))
            code = leaf_code(perm)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, [perm]
            elif code == best[0]:
                best[1].append(perm)
            return
        for v in target:
            descend([2 * c + (0 if u == v else 1) for u, c in enumerate(colors)])

    descend(init)
    if n == 0:
        best[0], best[1] = (0, (), ()), [()]
    return CanonicalForm(best[0], best[1])


def canonical_form(g: MultiGraph, vertex_labels: Mapping | None = None) -> tuple:
    """A code equal for two graphs iff they are isomorphic (respecting labels)."""
    labels = [0 if vertex_labels is None else vertex_labels[v] for v in g.vertices]
    return canonical_search(adjacency(g), labels).code


def is_isomorphic(g1: MultiGraph, g2: MultiGraph, labels1: Mapping | None = None,
                  labels2: Mapping | None = None) -> bool:
    return canonical_form(g1, labels1) == canonical_form(g2, labels2)


def graph_from_code(code: tuple, prefix: str = "e") -> MultiGraph:
    """Rebuild a representative graph from a canonical code.

    Vertices are ``0..n-1`` in canonical order and edges are named
    ``<prefix>1, <prefix>2, ...`` in order of their vertex pairs, so the edge
    order is itself canonical.
    """
    n, _, upper = code
    edges = []
    it = iter(upper)
    for i in range(n):
        for j in range(i, n):
            for _ in range(next(it)):
                edges.append((f"{prefix}{len(edges) + 1}", (i, j)))
    return MultiGraph(range(n), edges)


def symmetric_matrices(degrees: Sequence[int]) -> Iterator[list[list[int]]]:
    """All symmetric nonnegative integer matrices with the given degree sequence.

    The degree of ``i`` is ``2*m[i][i] + sum(m[i][j] for j != i)``.
    """
    n = len(degrees)
    m = [[0] * n for _ in range(n)]
    residual = list(degrees)

    def fill(i, j):
        if i == n:
            yield [row[:] for row in m]
            return
        if j == n:
            if residual[i] == 0:
                yield from fill(i + 1, i + 1)
            return
        if j == i:
            for k in range(residual[i] // 2 + 1):
                m[i][i] = k
                residual[i] -= 2 * k
                yield from fill(i, j + 1)
                residual[i] += 2 * k
            m[i][i] = 0
            return
        if j == n - 1:
            choices = [residual[i]] if residual[i] <= residual[j] else []
        else:
            choices = range(min(residual[i], residual[j]) + 1)
        for k in choices:
            m[i][j] = m[j][i] = k
            residual[i] -= k
            residual[j] -= k
            yield from fill(i, j + 1)
            residual[i] += k
            residual[j] += k
        m[i][j] = m[j][i] = 0

    yield from fill(0, 0)


def matrix_is_connected(m) -> bool:
    n = len(m)
    if n == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in range(n):
            if m[v][w] and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def partitions(total: int, parts: int, minimum: int = 0, maximum: int | None = None) -> Iterator[tuple]:
    """Non-increasing tuples of ``parts`` integers in ``[minimum, maximum]`` summing to ``total``."""
    if maximum is None:
        maximum = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(maximum, total - minimum * (parts - 1)), minimum - 1, -1):
        if first * parts < total:
            break
        for rest in partitions(total - first, parts - 1, minimum, first):
            yield (first,) + rest


def enumerate_core_graphs(max_edges: int, connected: bool = True) -> list[MultiGraph]:
    """Isomorphism classes of connected core graphs with 1..max_edges edges."""
    if not connected:
        raise NotImplementedError("only connected enumeration is provided")
    seen = {}
    for n_edges in range(1, max_edges + 1):
        for n_vertices in range(1, n_edges + 1):
            for degs in partitions(2 * n_edges, n_vertices, minimum=2):
                for m in symmetric_matrices(degs):
                    if not matrix_is_connected(m):
                        continue
                    code = canonical_search(m, [0] * n_vertices).code
                    if code in seen:
                        continue
                    g = graph_from_code(code)
                    if is_core(g):
                        seen[code] = g
    return [seen[c] for c in sorted(seen)]


def rose(n: int) -> MultiGraph:
    return MultiGraph([0], [(f"l{i}", (0, 0)) for i in range(1, n + 1)])


def theta(k: int = 3) -> MultiGraph:
    return MultiGraph([0, 1], [(f"x{i}", (0, 1)) for i in range(1, k + 1)])
