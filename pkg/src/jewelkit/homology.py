"""Integer chain complexes, Smith normal form and simplicial homology.

Also builds the rational chain complex of the quotient of the complex of
incomplete core sphere systems by diffeomorphisms. That complex is an
exploratory object: its homology is computed, not interpreted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import multigraph as mg
from . import spheresys as ss
from .errors import CertificationError


@dataclass(frozen=True)
class SmithForm:
    diagonal: list          # D, same shape as the input
    rank: int
    factors: tuple          # nonzero invariant factors d_1 | d_2 | ...
    left: list = field(repr=False, default=None)    # U with U @ M @ V == D
    right: list = field(repr=False, default=None)   # V


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = list(zip(*b)) if b else []
    if not cols:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def smith_normal_form(m, transforms: bool = True) -> SmithForm:
    """Smith normal form over the integers.

    Pivots are chosen of least absolute value to keep entries small. With
    ``transforms`` the unimodular U, V with ``U M V = D`` are accumulated.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, r)) for r in m]
    U = _identity(rows) if transforms else None
    V = _identity(cols) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        if U is not None:
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col dst += k * col src
        for r in a:
            r[dst] += k * r[src]
        if V is not None:
            for r in V:
                r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                rest = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                rest += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(rest)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    factors = tuple(a[i][i] for i in range(min(rows, cols)) if a[i][i])
    return SmithForm(a, len(factors), factors, U, V)


def verify_smith(m, snf: SmithForm) -> bool:
    d = snf.diagonal
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    f = snf.factors
    if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
        return False
    if snf.left is None:
        return True
    return matmul(matmul(snf.left, m), snf.right) == d


@dataclass(frozen=True)
class ChainComplex:
    """``boundaries[k]`` is the matrix of d: C_{k+min_degree} -> C_{k+min_degree-1}.

    Matrices are lists of rows indexed by the target basis. ``labels[k]``
    names the basis of C_{k+min_degree}.
    """

    labels: tuple
    boundaries: tuple
    min_degree: int = 0
    rational: bool = False

    @property
    def degrees(self) -> range:
        return range(self.min_degree, self.min_degree + len(self.labels))

    def rank(self, degree: int) -> int:
        k = degree - self.min_degree
        return len(self.labels[k]) if 0 <= k < len(self.labels) else 0

    def boundary(self, degree: int):
        k = degree - self.min_degree
        if 0 <= k < len(self.boundaries):
            return self.boundaries[k]
        return None

    def check_square_zero(self) -> bool:
        for deg in self.degrees:
            lo, hi = self.boundary(deg), self.boundary(deg + 1)
            if lo is None or hi is None or not lo or not hi or not hi[0]:
                continue
            if any(any(row) for row in matmul(lo, hi)):
                return False
        return True


@dataclass(frozen=True)
class HomologyResult:
    betti: dict             # degree -> rank
    torsion: dict           # degree -> tuple of invariant factors > 1 (empty over Q)
    euler_characteristic: int

    def as_records(self) -> list[dict]:
        return [
            {"degree": k, "betti": self.betti[k], "torsion": list(self.torsion[k])}
            for k in sorted(self.betti)
        ]


def _matrix_rank_and_factors(mat, cols):
    if not mat or cols == 0:
        return 0, ()
    snf = smith_normal_form(mat, transforms=False)
    return snf.rank, snf.factors


def homology(cx: ChainComplex) -> HomologyResult:
    if not cx.check_square_zero():
        raise CertificationError("boundary does not square to zero")
    ranks, factors = {}, {}
    for deg in cx.degrees:
        mat = cx.boundary(deg)
        ranks[deg], factors[deg] = _matrix_rank_and_factors(mat, cx.rank(deg)) if mat is not None else (0, ())
    betti, torsion = {}, {}
    for deg in cx.degrees:
        betti[deg] = cx.rank(deg) - ranks[deg] - ranks.get(deg + 1, 0)
        torsion[deg] = () if cx.rational else tuple(f for f in factors.get(deg + 1, ()) if f > 1)
    chi = sum((-1 if d % 2 else 1) * cx.rank(d) for d in cx.degrees)
    if chi != sum((-1 if d % 2 else 1) * b for d, b in betti.items()):
        raise CertificationError("Euler characteristic mismatch")
    return HomologyResult(betti, torsion, chi)


def simplicial_complex(maximal_faces) -> list[list[tuple]]:
    """All faces of the complex, grouped by dimension, each sorted."""
    faces = set()
    for top in maximal_faces:
        top = tuple(sorted(set(top)))
        for r in range(1, len(top) + 1):
            faces.update(itertools.combinations(top, r))
    if not faces:
        return []
    dim = max(len(f) for f in faces) - 1
    return [sorted(f for f in faces if len(f) == k + 1) for k in range(dim + 1)]


def simplicial_chain_complex(maximal_faces, reduced: bool = True) -> ChainComplex:
    by_dim = simplicial_complex(maximal_faces)
    labels = ([[()]] if reduced else []) + by_dim
    boundaries = []
    if reduced:
        boundaries.append(None)
        boundaries.append([[1] * len(by_dim[0])] if by_dim else [])
    else:
        boundaries.append(None)
    for k in range(1, len(by_dim)):
        index = {f: i for i, f in enumerate(by_dim[k - 1])}
        mat = [[0] * len(by_dim[k]) for _ in by_dim[k - 1]]
        for j, f in enumerate(by_dim[k]):
            for i in range(len(f)):
                mat[index[f[:i] + f[i + 1:]]][j] = (-1) ** i
        boundaries.append(mat)
    return ChainComplex(tuple(tuple(x) for x in labels), tuple(boundaries), -1 if reduced else 0)


def simplicial_homology(maximal_faces, reduced: bool = True) -> HomologyResult:
    """Integral (by default reduced) homology of an abstract simplicial complex."""
    return homology(simplicial_chain_complex(maximal_faces, reduced))


# --------------------------------------------------------------------------
# quotient of the complex of incomplete core systems

def _edge_keys(d: ss.DecoratedGraph, ordering) -> list:
    g = d.graph
    pos = {g.vertices[v]: i for i, v in enumerate(ordering)}
    return [tuple(sorted((pos[u], pos[v]))) for _, (u, v) in g.edges]


def _parity(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def orientation(d: ss.DecoratedGraph):
    """``(code, sign)`` of the edge-ordered system relative to its class orientation.

    ``sign`` is 0 when some automorphism permutes the spheres oddly, in
    which case the simplex is zero in the quotient.
    """
    g = d.graph
    m = mg.adjacency(g)
    form = mg.canonical_search(m, list(d._genus))
    if any(m[i][j] > 1 for i in range(len(m)) for j in range(len(m))):
        return form.code, 0  # swapping two parallel spheres is odd
    signs = {_parity(_edge_keys(d, order)) for order in form.orderings}
    if len(signs) > 1:
        return form.code, 0
    return form.code, signs.pop()


@dataclass(frozen=True)
class QuotientComplex:
    complex: ChainComplex
    classes: tuple  # per degree, the SystemClass generators
    banner: str = "exploratory: rational homology of the quotient, not of the complex itself"


def quotient_chain_complex(n: int, jobs: int = 1, max_n: int = ss.MAX_N) -> QuotientComplex:
    classes = ss.enumerate_classes(n, complete=False, core=True, jobs=jobs, max_n=max_n)
    gens: dict = {}
    for c in classes:
        _, sign = orientation(c.system)
        if sign:
            gens.setdefault(c.edge_count - 1, []).append(c)
    top = max(gens, default=-1)
    per_degree = [gens.get(k, []) for k in range(top + 1)]
    index = [{c.code: i for i, c in enumerate(cs)} for cs in per_degree]
    boundaries = [None]
    for k in range(1, top + 1):
        mat = [[0] * len(per_degree[k]) for _ in per_degree[k - 1]]
        for j, c in enumerate(per_degree[k]):
            d = c.system
            _, own = orientation(d)
            edges = d.graph.edge_ids
            for i, e in enumerate(edges):
                face = ss.subsystem_class(d, set(edges) - {e})
                code, sign = orientation(face)
                if sign and code in index[k - 1]:
                    mat[index[k - 1][code]][j] += (-1) ** i * sign * own
        boundaries.append(mat)
    labels = tuple(tuple(c.code for c in cs) for cs in per_degree)
    cx = ChainComplex(labels, tuple(boundaries), 0, rational=True)
    if not cx.check_square_zero():
        raise CertificationError(f"quotient boundary does not square to zero at n={n}")
    return QuotientComplex(cx, tuple(tuple(cs) for cs in per_degree))
