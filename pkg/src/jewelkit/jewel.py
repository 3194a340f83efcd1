"""Jewels of core graphs: the labeled face poset and the truncated simplex.

A face of J(G) is labeled by a forest F and a chain C_1 < ... < C_k of proper
core subgraphs with each C_i equal to the core of F u C_i. The same polytope
is also built as an exact rational H-polytope by cutting the simplex on the
edges of G with one row per proper core subgraph; ``lattice_check`` compares
the two.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import multigraph as mg
from .errors import CertificationError, PreconditionError
from .multigraph import EdgeSet, MultiGraph


@dataclass(frozen=True)
class FaceLabel:
    forest: EdgeSet = EdgeSet()
    chain: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "forest", EdgeSet(self.forest))
        object.__setattr__(self, "chain", tuple(EdgeSet(c) for c in self.chain))

    @property
    def codim(self) -> int:
        return len(self.forest) + len(self.chain)

    def contains(self, other: FaceLabel) -> bool:
        """Set inclusion S >= T, i.e. the face of ``self`` lies in the face of ``other``."""
        return self.forest >= other.forest and set(self.chain) >= set(other.chain)

    def key(self, g: MultiGraph) -> tuple:
        return (self.codim, g.sort_key(self.forest), tuple(g.sort_key(c) for c in self.chain))


def validate_face_label(g: MultiGraph, s: FaceLabel) -> bool:
    g.check_edges(s.forest)
    for c in s.chain:
        g.check_edges(c)
    if not mg.is_forest(g, s.forest):
        return False
    full = g.edge_set()
    prev = None
    for c in s.chain:
        if not c or c == full or not mg.is_core(g, c):
            return False
        if prev is not None and not prev < c:
            return False
        prev = c
        if mg.core_of(g, s.forest | c) != c:
            return False
    return True


def _require_core(g: MultiGraph):
    if len(g) == 0 or not mg.is_core(g):
        raise PreconditionError("jewels are defined for nonempty core graphs", clause="core-graph")


@dataclass(frozen=True)
class JewelPoset:
    graph: MultiGraph
    faces: tuple
    _index: dict = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.faces)})

    @property
    def dimension(self) -> int:
        return len(self.graph) - 1

    def face_dimension(self, s: FaceLabel) -> int:
        return self.dimension - s.codim

    def leq(self, s: FaceLabel, t: FaceLabel) -> bool:
        return s.contains(t)

    def __contains__(self, s):
        return s in self._index

    def __len__(self):
        return len(self.faces)

    @property
    def top(self) -> FaceLabel:
        return FaceLabel()

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 1)
        for s in self.faces:
            counts[self.face_dimension(s)] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** self.face_dimension(s) for s in self.faces)


def face_poset(g: MultiGraph) -> JewelPoset:
    _require_core(g)
    cores = mg.enumerate_core_subgraphs(g, proper_only=True)
    ids = g.edge_ids
    faces = []
    for r in range(len(ids)):
        for combo in itertools.combinations(ids, r):
            forest = EdgeSet(combo)
            if not mg.is_forest(g, forest):
                continue
            allowed = sorted(
                (c for c in cores if mg.core_of(g, forest | c) == c),
                key=lambda c: (len(c), g.sort_key(c)),
            )

            def chains(prefix, start):
                yield prefix
                for i in range(start, len(allowed)):
                    c = allowed[i]
                    if not prefix or prefix[-1] < c:
                        yield from chains(prefix + (c,), i + 1)

            faces.extend(FaceLabel(forest, ch) for ch in chains((), 0))
    faces.sort(key=lambda s: s.key(g))
    return JewelPoset(g, tuple(faces))


@dataclass(frozen=True)
class TruncationParams:
    N: int

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N <= 0:
            raise PreconditionError("N must be a positive integer", clause="positive-N")

    @staticmethod
    def margin(g: MultiGraph) -> int:
        """N must exceed this for the validity guarantee to hold without certification."""
        return 3 ** mg.first_betti(g) * len(mg.enumerate_core_subgraphs(g))

    @classmethod
    def default(cls, g: MultiGraph) -> TruncationParams:
        return cls(3 ** (mg.first_betti(g) + 2) * (len(mg.enumerate_core_subgraphs(g)) + 1))

    def is_sufficient(self, g: MultiGraph) -> bool:
        return self.N > self.margin(g)


def truncation_constant(g: MultiGraph, c, params: TruncationParams) -> Fraction:
    c = g.check_edges(c)
    if not c or c == g.edge_set() or not mg.is_core(g, c):
        raise PreconditionError("truncation needs a proper core subgraph", clause="proper-core")
    return Fraction(3 ** mg.first_betti(g, c), params.N)


@dataclass(frozen=True)
class HPolytope:
    """``{x : sum(x) == 1, rows[i] . x >= rhs[i]}`` over coordinates indexed by ``coords``.

    ``tags`` names each row: ``("edge", e)`` for ``x_e >= 0`` and
    ``("core", C)`` for a truncation row.
    """

    coords: tuple
    rows: tuple
    rhs: tuple
    tags: tuple

    @property
    def dimension(self) -> int:
        return len(self.coords) - 1

    def contains(self, x) -> bool:
        return sum(x) == 1 and all(
            sum(a * xi for a, xi in zip(row, x)) >= b for row, b in zip(self.rows, self.rhs)
        )


def _rows(g: MultiGraph, N: int) -> HPolytope:
    coords = g.edge_ids
    rows, rhs, tags = [], [], []
    for i, e in enumerate(coords):
        rows.append(tuple(Fraction(int(j == i)) for j in range(len(coords))))
        rhs.append(Fraction(0))
        tags.append(("edge", e))
    for c in mg.enumerate_core_subgraphs(g):
        rows.append(tuple(Fraction(int(e in c)) for e in coords))
        rhs.append(Fraction(3 ** mg.first_betti(g, c), N))
        tags.append(("core", c))
    return HPolytope(tuple(coords), tuple(rows), tuple(rhs), tuple(tags))


def hrep(g: MultiGraph, params: TruncationParams | None = None) -> HPolytope:
    """The jewel as an H-polytope.

    Below the sufficient margin on N the instance is accepted only if its
    face lattice certifies against the label poset.
    """
    _require_core(g)
    if params is None:
        params = TruncationParams.default(g)
    poly = _rows(g, params.N)
    if not params.is_sufficient(g):
        try:
            certify_lattice(g, params)
        except CertificationError as exc:
            raise PreconditionError(
                f"N={params.N} is below the truncation margin {params.margin(g)} and fails certification: {exc}",
                clause="truncation-margin",
            ) from None
    return poly


def _solve(matrix, rhs):
    """Exact Gaussian elimination; ``None`` if singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def _integer_rows(p: HPolytope):
    out = []
    for row, b in zip(p.rows, p.rhs):
        scale = math.lcm(*(Fraction(x).denominator for x in row), Fraction(b).denominator)
        out.append(([int(x * scale) for x in row], Fraction(b) * scale))
    return out


def vertices(p: HPolytope, chunk: int = 100_000) -> list[tuple]:
    """All vertices, exact, sorted.

    Active sets of ``dimension`` rows are screened in floating point (rows are
    scaled to integers, so a nonsingular basis has ``|det| >= 1``) and every
    survivor is re-solved and re-checked in exact arithmetic.
    """
    m = len(p.coords)
    d = m - 1
    int_rows = _integer_rows(p)
    A = np.array([r for r, _ in int_rows], dtype=float).reshape(len(int_rows), m)
    b = np.array([float(x) for _, x in int_rows])
    tol = 1e-9 * max(1.0, float(np.abs(b).max(initial=0.0)))
    found = set()
    combos = itertools.combinations(range(len(int_rows)), d)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        idx = np.array(block, dtype=int).reshape(len(block), d)
        M = np.empty((len(block), m, m))
        M[:, 0, :] = 1.0
        if d:
            M[:, 1:, :] = A[idx]
        det = np.linalg.det(M)
        good = np.abs(det) > 0.5
        if not good.any():
            continue
        Mg = M[good]
        rhs = np.empty((len(Mg), m))
        rhs[:, 0] = 1.0
        if d:
            rhs[:, 1:] = b[idx[good]]
        xs = np.linalg.solve(Mg, rhs[..., None])[..., 0]
        feasible = ((xs @ A.T) >= b - tol).all(axis=1)
        for combo in idx[good][feasible]:
            mat = [[1] * m] + [int_rows[i][0] for i in combo]
            vec = [Fraction(1)] + [int_rows[i][1] for i in combo]
            x = _solve(mat, vec)
            if x is not None and p.contains(x):
                found.add(x)
    if not found:
        raise PreconditionError("polytope is empty", clause="nonempty-polytope")
    return sorted(found)


def affine_dimension(points) -> int:
    if not points:
        return -1
    base = points[0]
    rows = [[a - b for a, b in zip(q, base)] for q in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] / p
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class GeometricLattice:
    """Faces of an H-polytope as sets of vertex indices."""

    polytope: HPolytope
    vertices: tuple
    tight: tuple  # per row: frozenset of vertex indices where it is tight
    faces: frozenset

    def face_of(self, row_indices) -> frozenset:
        out = frozenset(range(len(self.vertices)))
        for i in row_indices:
            out &= self.tight[i]
        return out

    def dimension(self, face: frozenset) -> int:
        return affine_dimension([self.vertices[i] for i in sorted(face)])


def geometric_lattice(p: HPolytope) -> GeometricLattice:
    verts = vertices(p)
    tight = tuple(
        frozenset(i for i, x in enumerate(verts) if sum(a * xi for a, xi in zip(row, x)) == b)
        for row, b in zip(p.rows, p.rhs)
    )
    generators = {t for t in tight if t}
    full = frozenset(range(len(verts)))
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for f in frontier:
            for t in generators:
                h = f & t
                if h and h not in faces:
                    faces.add(h)
                    nxt.append(h)
        frontier = nxt
    return GeometricLattice(p, tuple(verts), tight, frozenset(faces))


def certify_lattice(g: MultiGraph, params: TruncationParams | None = None) -> dict:
    """Check that labels map bijectively, with grading and order, onto geometric faces.

    Returns the label -> vertex-index-set map; raises ``CertificationError``.
    """
    _require_core(g)
    if params is None:
        params = TruncationParams.default(g)
    poset = face_poset(g)
    try:
        lattice = geometric_lattice(_rows(g, params.N))
    except PreconditionError as exc:
        raise CertificationError(str(exc)) from None
    row_of = {tag: i for i, tag in enumerate(lattice.polytope.tags)}
    image = {}
    for s in poset.faces:
        rows = [row_of[("edge", e)] for e in s.forest] + [row_of[("core", c)] for c in s.chain]
        face = lattice.face_of(rows)
        if not face:
            raise CertificationError(f"label {s} has an empty geometric face")
        if lattice.dimension(face) != poset.face_dimension(s):
            raise CertificationError(f"label {s} has the wrong dimension")
        image[s] = face
    if len(set(image.values())) != len(image):
        raise CertificationError("two labels share a geometric face")
    if set(image.values()) != lattice.faces:
        raise CertificationError(
            f"{len(lattice.faces)} geometric faces vs {len(image)} labels"
        )
    faces = poset.faces
    for s in faces:
        for t in faces:
            if s.contains(t) != (image[s] <= image[t]):
                raise CertificationError(f"order mismatch between {s} and {t}")
    return image


def lattice_check(g: MultiGraph, params: TruncationParams | None = None) -> bool:
    try:
        certify_lattice(g, params)
    except CertificationError:
        return False
    return True


def _check_order_iso(domain, phi, leq_dom, leq_cod):
    for s in domain:
        fs = phi[s]
        for t in domain:
            if leq_dom(s, t) != leq_cod(fs, phi[t]):
                raise CertificationError(f"order not preserved between {s} and {t}")


@dataclass(frozen=True)
class FacetIsomorphism:
    core: EdgeSet
    mapping: dict
    left: JewelPoset
    right: JewelPoset


def facet_product_iso(g: MultiGraph, c) -> FacetIsomorphism:
    """Certify that the border facet opposite ``c`` is J(c) x J(G//c) as posets."""
    c = g.check_edges(c)
    if not c or c == g.edge_set() or not mg.is_core(g, c):
        raise PreconditionError("facet needs a proper core subgraph", clause="proper-core")
    poset = face_poset(g)
    left = face_poset(g.subgraph(c))
    right = face_poset(mg.collapse(g, c))
    mapping = {}
    for s in poset.faces:
        if c not in s.chain:
            continue
        i = s.chain.index(c)
        lf = FaceLabel(s.forest & c, s.chain[:i])
        rf = FaceLabel(s.forest - c, tuple(x - c for x in s.chain[i + 1:]))
        if lf not in left or rf not in right:
            raise CertificationError(f"{s} maps outside J(C) x J(G//C)")
        mapping[s] = (lf, rf)
    if len(set(mapping.values())) != len(mapping):
        raise CertificationError("facet map is not injective")
    if len(mapping) != len(left) * len(right):
        raise CertificationError("facet map is not surjective")
    _check_order_iso(
        list(mapping), mapping, FaceLabel.contains,
        lambda a, b: a[0].contains(b[0]) and a[1].contains(b[1]),
    )
    return FacetIsomorphism(c, mapping, left, right)


@dataclass(frozen=True)
class InteriorFacetIsomorphism:
    edge: str
    mapping: dict
    target: JewelPoset


def interior_facet_iso(g: MultiGraph, e) -> InteriorFacetIsomorphism:
    """Certify that the facet x_e = 0 is J(G//e) as posets."""
    if g.is_loop(e):
        raise PreconditionError(f"{e!r} is a loop; its facet is a border facet", clause="non-loop-edge")
    poset = face_poset(g)
    target = face_poset(mg.collapse(g, {e}))
    mapping = {}
    for s in poset.faces:
        if e not in s.forest:
            continue
        image = FaceLabel(s.forest - {e}, tuple(x - {e} for x in s.chain))
        if image not in target:
            raise CertificationError(f"{s} maps outside J(G//e)")
        mapping[s] = image
    if len(set(mapping.values())) != len(mapping) or len(mapping) != len(target):
        raise CertificationError("interior facet map is not a bijection")
    _check_order_iso(list(mapping), mapping, FaceLabel.contains, FaceLabel.contains)
    return InteriorFacetIsomorphism(e, mapping, target)
