"""Sphere systems in M_n = #_n(S^1 x S^2), up to diffeomorphism.

A system is recorded by its dual graph (one vertex per complementary piece,
one edge per sphere) with each vertex labeled by the genus of its piece, so
the total rank is ``b1(graph) + sum(genus)``. Two spheres are parallel
exactly when they bound a genus-0 piece with no other boundary, and a sphere
is trivial exactly when it bounds a genus-0 piece on its own; the validity
clauses below rule both out.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from collections.abc import Mapping

from . import multigraph as mg
from .errors import CertificationError, PreconditionError
from .multigraph import EdgeSet, MultiGraph

log = logging.getLogger(__name__)

MAX_N = 4


class DecoratedGraph:
    """A multigraph with a nonnegative genus on every vertex."""

    __slots__ = ("graph", "_genus")

    def __init__(self, graph: MultiGraph, genus: Mapping | None = None):
        genus = genus or {}
        self.graph = graph
        self._genus = tuple(int(genus.get(v, 0)) for v in graph.vertices)

    @property
    def genus(self) -> dict:
        return dict(zip(self.graph.vertices, self._genus))

    def genus_of(self, v) -> int:
        return self._genus[self.graph.vertices.index(v)]

    @property
    def n(self) -> int:
        return mg.first_betti(self.graph) + sum(self._genus)

    @property
    def edge_ids(self) -> tuple:
        return self.graph.edge_ids

    def code(self) -> tuple:
        return mg.canonical_form(self.graph, self.genus)

    def __eq__(self, other):
        if not isinstance(other, DecoratedGraph):
            return NotImplemented
        return self.graph == other.graph and self._genus == other._genus

    def __hash__(self):
        return hash((self.graph, self._genus))

    def __repr__(self):
        return f"DecoratedGraph({self.graph!r}, genus={self.genus})"


def first_violation(d: DecoratedGraph) -> tuple | None:
    """``(clause, message)`` for the first failed validity clause, else ``None``."""
    g = d.graph
    if not g.vertices or len(mg.components(g)) != 1:
        return ("connected", "dual graph must be connected")
    if any(x < 0 for x in d._genus):
        return ("nonnegative-genus", "genus labels must be nonnegative")
    if d.n < 1:
        return ("positive-rank", "total rank b1 + sum(genus) must be at least 1")
    for v, genus in zip(g.vertices, d._genus):
        valence = g.degree(v)
        if genus > 0:
            if valence < 1:
                return ("genus-vertex-valence", f"vertex {v!r} of positive genus meets no sphere")
            continue
        if valence >= 3:
            continue
        if valence == 2:
            loops = [e for e, (a, b) in g.edges if a == b == v]
            if loops:
                continue
            return ("non-parallel", f"genus-0 vertex {v!r} joins two parallel spheres")
        return ("non-trivial", f"genus-0 vertex {v!r} of valence {valence} bounds a ball")
    return None


def validate(d: DecoratedGraph) -> bool:
    return first_violation(d) is None


def require_valid(d: DecoratedGraph):
    bad = first_violation(d)
    if bad:
        raise PreconditionError(bad[1], clause=bad[0])


def is_complete(d: DecoratedGraph) -> bool:
    require_valid(d)
    return not any(d._genus)


def is_core(d: DecoratedGraph) -> bool:
    require_valid(d)
    return not mg.bridges(d.graph)


def h_value(d: DecoratedGraph) -> int:
    require_valid(d)
    return len(d.graph.edges) - len(d.graph.vertices)


def _proper_subset(d: DecoratedGraph, t) -> EdgeSet:
    t = d.graph.check_edges(t)
    if not t or t == d.graph.edge_set():
        raise PreconditionError("subsystem must be a proper nonempty set of spheres", clause="proper-subsystem")
    return t


def subsystem_class(d: DecoratedGraph, t) -> DecoratedGraph:
    """The class of the subsystem ``t``: contract every sphere not in ``t``.

    Each contracted piece absorbs the genera of the merged vertices plus the
    rank of the contracted edges inside it.
    """
    require_valid(d)
    t = _proper_subset(d, t)
    g = d.graph
    rest = g.edge_set() - t
    classes = mg.components(g, rest)
    name = {}
    genus = {}
    for cls in classes:
        members = set(cls)
        inner = [e for e in rest if g.ends(e)[0] in members]
        genus[cls[0]] = sum(d.genus_of(v) for v in cls) + (mg.first_betti(g, inner) if inner else 0)
        for v in cls:
            name[v] = cls[0]
    out = DecoratedGraph(
        MultiGraph((cls[0] for cls in classes), ((e, (name[u], name[v])) for e, (u, v) in g.edges if e in t)),
        genus,
    )
    bad = first_violation(out)
    if bad:
        raise CertificationError(f"subsystem produced an invalid class: {bad[1]}")
    return out


def h_in_ambient(d: DecoratedGraph, t) -> int:
    """h of the subsystem ``t`` measured in M: |t| minus the pieces of M - t."""
    t = _proper_subset(d, t)
    return len(t) - len(mg.components(d.graph, d.graph.edge_set() - t))


def bridge_free_by_cuts(g: MultiGraph, kept: EdgeSet) -> bool:
    """No edge of ``kept`` disconnects its endpoints in (V, kept)."""
    for f in kept:
        u, v = g.ends(f)
        if u == v:
            continue
        adj: dict = {}
        for e in kept:
            if e == f:
                continue
            a, b = g.ends(e)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if v not in seen:
            return False
    return True


def is_core_complement(d: DecoratedGraph, t) -> bool:
    """Whether S - t is core in M - t, decided two independent ways."""
    if not is_core(d):
        raise PreconditionError("core complements live in core systems", clause="core-system")
    t = _proper_subset(d, t)
    kept = d.graph.edge_set() - t
    by_subgraph = mg.is_core(d.graph, kept)
    by_cuts = bridge_free_by_cuts(d.graph, kept)
    if by_subgraph != by_cuts:
        raise CertificationError(f"core-complement criteria disagree on {sorted(t)}")
    return by_subgraph


def core_complements(d: DecoratedGraph) -> list[EdgeSet]:
    g = d.graph
    found = [t for t in mg.nonempty_subsets(g) if t != g.edge_set() and is_core_complement(d, t)]
    found.sort(key=lambda t: (len(t), g.sort_key(t)))
    return found


def r_and_t(d: DecoratedGraph, t, N: int) -> tuple[int, Fraction]:
    if not is_core_complement(d, t):
        raise PreconditionError("r and t are defined for core complements", clause="core-complement")
    h_sub = h_in_ambient(d, t)
    if h_sub != h_value(subsystem_class(d, t)):
        raise CertificationError("ambient and contracted h disagree")
    r = h_value(d) - h_sub
    return r, Fraction(3 ** r, N)


@dataclass(frozen=True)
class WallDescriptor:
    """W(T) as the jewel of T's dual graph times the jewel spaces of the pieces of M - T."""

    system: DecoratedGraph
    pieces: tuple  # ((n_i, s_i), ...) per vertex, in vertex order

    @property
    def jewel_graph(self) -> MultiGraph:
        return self.system.graph

    def jewel(self):
        from .jewel import face_poset

        return face_poset(self.system.graph)


def pieces(t: DecoratedGraph) -> WallDescriptor:
    if not is_core(t):
        raise PreconditionError("walls are indexed by core systems", clause="core-system")
    if is_complete(t):
        raise PreconditionError("walls are indexed by incomplete systems", clause="incomplete-system")
    g = t.graph
    out = tuple((t.genus_of(v), g.degree(v)) for v in g.vertices)
    if sum(n for n, _ in out) + mg.first_betti(g) != t.n or sum(s for _, s in out) != 2 * len(g):
        raise CertificationError("piece data does not reconstruct the system")
    return WallDescriptor(t, out)


def complete_extension(t: DecoratedGraph) -> DecoratedGraph:
    """A complete core system containing ``t`` as a core complement.

    Every piece of genus g > 0 is cut by g new non-separating spheres, which
    appear as loops ``x1, x2, ...`` at its vertex.
    """
    if not is_core(t):
        raise PreconditionError("extension needs a core system", clause="core-system")
    if is_complete(t):
        raise PreconditionError("system is already complete", clause="incomplete-system")
    g = t.graph
    used = set(g.edge_ids)
    edges = list(g.edges)
    k = 0
    for v in g.vertices:
        for _ in range(t.genus_of(v)):
            k += 1
            while f"x{k}" in used:
                k += 1
            edges.append((f"x{k}", (v, v)))
    s = DecoratedGraph(MultiGraph(g.vertices, edges), {})
    if not (is_complete(s) and is_core(s) and is_core_complement(s, g.edge_set())):
        raise CertificationError("extension failed its own checks")
    return s


@dataclass(frozen=True)
class SystemClass:
    code: tuple
    system: DecoratedGraph
    edge_count: int
    complete: bool
    core: bool

    @property
    def vertex_count(self) -> int:
        return len(self.system.graph.vertices)


def class_from_code(code: tuple) -> SystemClass:
    graph = mg.graph_from_code(code, prefix="s")
    d = DecoratedGraph(graph, dict(zip(graph.vertices, code[1])))
    return SystemClass(code, d, len(graph), is_complete(d), is_core(d))


def _degree_sequences(genus: tuple, total: int, single: bool):
    """Degrees non-increasing within each equal-genus block, minimum 3 (genus 0) or 1."""
    n = len(genus)
    out = [0] * n

    def mins(i):
        return (2 if single else 3) if genus[i] == 0 else 1

    tail_min = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail_min[i] = tail_min[i + 1] + mins(i)

    def rec(i, left, cap):
        if i == n:
            if left == 0:
                yield tuple(out)
            return
        hi = left - tail_min[i + 1]
        if i > 0 and genus[i] == genus[i - 1]:
            hi = min(hi, cap)
        for deg in range(hi, mins(i) - 1, -1):
            out[i] = deg
            yield from rec(i + 1, left - deg, deg)

    yield from rec(0, total, total)


def _tasks(n: int):
    vmax = 1 if n == 1 else 2 * n - 2
    emax = 1 if n == 1 else 3 * n - 3
    for v in range(1, vmax + 1):
        for g_total in range(0, n + 1):
            e = n - 1 + v - g_total
            if e < 1 or e > emax:
                continue
            for genus in mg.partitions(g_total, v, 0):
                for degs in _degree_sequences(genus, 2 * e, single=(v == 1)):
                    yield (genus, degs)


def _run_task(task) -> list:
    genus, degs = task
    codes = set()
    for m in mg.symmetric_matrices(degs):
        if not mg.matrix_is_connected(m):
            continue
        codes.add(mg.canonical_search(m, genus).code)
    return sorted(codes)


@lru_cache(maxsize=None)
def _all_classes(n: int, jobs: int = 1) -> tuple:
    tasks = list(_tasks(n))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=8))
    else:
        results = [_run_task(t) for t in tasks]
    codes = sorted({c for r in results for c in r})
    classes = []
    for code in codes:
        cls = class_from_code(code)
        if validate(cls.system):
            classes.append(cls)
    log.info("n=%d: %d classes from %d tasks", n, len(classes), len(tasks))
    return tuple(classes)


def enumerate_classes(n: int, complete: bool | None = None, core: bool | None = None,
                      edge_range: tuple | None = None, jobs: int = 1,
                      max_n: int = MAX_N) -> list[SystemClass]:
    """All classes of valid systems of rank ``n`` matching the filter, by canonical code.

    ``complete=False`` selects incomplete systems.
    """
    if not 1 <= n <= max_n:
        raise PreconditionError(f"n must lie in 1..{max_n}", clause="n-range")
    lo, hi = edge_range or (0, float("inf"))
    return [
        c for c in _all_classes(n, max(1, jobs))
        if (complete is None or c.complete == complete)
        and (core is None or c.core == core)
        and lo <= c.edge_count <= hi
    ]


def sc_infty_dimension(n: int, jobs: int = 1) -> int:
    if n < 2:
        raise PreconditionError("the complex at infinity needs n >= 2", clause="n-range")
    dim = max(c.edge_count for c in enumerate_classes(n, complete=False, core=True, jobs=jobs)) - 1
    if dim != 3 * n - 6:
        raise CertificationError(f"dimension {dim} != 3n-6 at n={n}")
    return dim


def skeleton_check(n: int, jobs: int = 1) -> bool:
    if n < 2:
        raise PreconditionError("skeleton check needs n >= 2", clause="n-range")
    return all(not c.complete for c in enumerate_classes(n, core=True, edge_range=(1, n - 1), jobs=jobs))
