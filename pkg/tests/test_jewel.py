import itertools
from fractions import Fraction

import pytest

from jewelkit import jewel
from jewelkit import multigraph as mg
from jewelkit.errors import PreconditionError
from jewelkit.fixtures import FIG1_GRAPH
from jewelkit.jewel import FaceLabel, TruncationParams
from jewelkit.multigraph import MultiGraph

F = Fraction
SMALL = mg.enumerate_core_graphs(5)
L1 = mg.rose(1)
R2 = mg.rose(2)
THETA = mg.theta()


def exact_solve(a, b):
    """Unique solution of a square system by Gauss-Jordan over Fractions, else None."""
    n = len(a)
    m = [list(map(F, row)) + [F(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        m[col] = [x / m[col][col] for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                m[r] = [x - m[r][col] * y for x, y in zip(m[r], m[col])]
    return tuple(row[-1] for row in m)


def brute_vertices(p):
    n = len(p.coords)
    found = set()
    for active in itertools.combinations(range(len(p.rows)), n - 1):
        x = exact_solve([p.rows[i] for i in active] + [[1] * n], [p.rhs[i] for i in active] + [1])
        if x is not None and p.contains(x):
            found.add(x)
    return found


def brute_cores(g):
    out = set()
    for r in range(1, len(g) + 1):
        for a in itertools.combinations(g.edge_ids, r):
            a = frozenset(a)
            if all(mg.first_betti(g, a - {e}) < mg.first_betti(g, a) for e in a):
                out.add(a)
    return out


def brute_labels(g):
    """Face labels from their three defining conditions, using only Betti numbers."""
    cores = brute_cores(g)
    proper = [c for c in cores if c != g.edge_set()]

    def core_of(a):
        inside = [c for c in cores if c <= a]
        return frozenset().union(*inside) if inside else frozenset()

    forests = [frozenset(f) for r in range(len(g) + 1) for f in itertools.combinations(g.edge_ids, r)
               if mg.first_betti(g, f) == 0]
    chains = []

    def extend(chain):
        chains.append(chain)
        for c in proper:
            if not chain or chain[-1] < c:
                extend(chain + (c,))

    extend(())
    return {FaceLabel(f, ch) for f in forests for ch in chains if all(core_of(f | c) == c for c in ch)}


class TestFaceLabels:
    def test_fig1_examples(self):
        assert jewel.validate_face_label(FIG1_GRAPH, FaceLabel((), [{"e2", "e3"}]))
        assert not jewel.validate_face_label(FIG1_GRAPH, FaceLabel({"e2", "e3"}, []))
        assert not jewel.validate_face_label(FIG1_GRAPH, FaceLabel((), [{"e1"}, {"e2", "e3"}]))
        assert jewel.validate_face_label(FIG1_GRAPH, FaceLabel({"e2"}, [{"e1"}]))

    def test_core_condition_fails(self):
        # the forest edge x1 closes a new cycle with {x2, x3}
        assert not jewel.validate_face_label(THETA, FaceLabel({"x1"}, [{"x2", "x3"}]))
        assert jewel.validate_face_label(THETA, FaceLabel({"x1"}, []))

    def test_unknown_edge(self):
        with pytest.raises(PreconditionError):
            jewel.validate_face_label(FIG1_GRAPH, FaceLabel({"zz"}, []))


class TestFacePoset:
    def test_point(self):
        poset = jewel.face_poset(L1)
        assert list(poset.faces) == [FaceLabel()]
        assert poset.f_vector() == [1]

    def test_segment(self):
        poset = jewel.face_poset(R2)
        assert set(poset.faces) == {FaceLabel(), FaceLabel((), [{"l1"}]), FaceLabel((), [{"l2"}])}

    def test_fig1_counts(self):
        poset = jewel.face_poset(FIG1_GRAPH)
        assert poset.f_vector() == [12, 18, 8, 1]
        assert len(brute_vertices(jewel.hrep(FIG1_GRAPH))) == 12

    def test_requires_core(self):
        with pytest.raises(PreconditionError):
            jewel.face_poset(MultiGraph([0, 1], [("a", (0, 1))]))

    @pytest.mark.parametrize("g", SMALL[:20], ids=lambda g: repr(mg.canonical_form(g)))
    def test_matches_brute_force_labels(self, g):
        assert set(jewel.face_poset(g).faces) == brute_labels(g)

    @pytest.mark.parametrize("g", SMALL, ids=lambda g: repr(mg.canonical_form(g)))
    def test_polytope_properties(self, g):
        poset = jewel.face_poset(g)
        assert poset.euler_characteristic() == 1
        assert poset.top == FaceLabel()
        for s in poset.faces:
            if s.codim == 1:
                interior = len(s.forest) == 1 and not s.chain and not g.is_loop(next(iter(s.forest)))
                border = not s.forest and len(s.chain) == 1
                assert interior or border
        for c in mg.enumerate_core_subgraphs(g):
            facet = [s for s in poset.faces if c in s.chain]
            left = jewel.face_poset(g.subgraph(c))
            right = jewel.face_poset(mg.collapse(g, c))
            assert len(facet) == len(left) * len(right)


class TestTruncation:
    def test_fig1_constants(self):
        p = TruncationParams(100)
        assert jewel.truncation_constant(FIG1_GRAPH, {"e1"}, p) == F(3, 100)
        assert jewel.truncation_constant(FIG1_GRAPH, {"e1", "e4"}, p) == F(9, 100)
        assert jewel.truncation_constant(FIG1_GRAPH, {"e2", "e3"}, p) == F(3, 100)

    def test_rejects_non_core(self):
        with pytest.raises(PreconditionError) as exc:
            jewel.truncation_constant(FIG1_GRAPH, {"e2"}, TruncationParams(9))
        assert exc.value.clause == "proper-core"

    def test_rejects_bad_N(self):
        with pytest.raises(PreconditionError):
            TruncationParams(0)

    @pytest.mark.parametrize("g", SMALL, ids=lambda g: repr(mg.canonical_form(g)))
    def test_monotone_in_rank(self, g):
        p = TruncationParams.default(g)
        assert p.is_sufficient(g)
        cores = mg.enumerate_core_subgraphs(g)
        for a, b in itertools.product(cores, repeat=2):
            if mg.first_betti(g, a) < mg.first_betti(g, b):
                assert jewel.truncation_constant(g, a, p) < jewel.truncation_constant(g, b, p)


class TestHrepAndVertices:
    def test_r2(self):
        p = jewel.hrep(R2, TruncationParams(12))
        core_rows = [(row, b) for row, b, tag in zip(p.rows, p.rhs, p.tags) if tag[0] == "core"]
        assert sorted(core_rows) == [((0, 1), F(1, 4)), ((1, 0), F(1, 4))]
        assert jewel.vertices(p) == [(F(1, 4), F(3, 4)), (F(3, 4), F(1, 4))]

    def test_theta_hexagon(self):
        p = jewel.hrep(THETA, TruncationParams(27))
        assert sorted(tag[1] for tag in p.tags if tag[0] == "core") == sorted(
            map(frozenset, [{"x1", "x2"}, {"x1", "x3"}, {"x2", "x3"}]))
        assert len(jewel.vertices(p)) == 6

    def test_point(self):
        assert jewel.vertices(jewel.hrep(L1)) == [(F(1),)]

    def test_fig1_rows(self):
        p = jewel.hrep(FIG1_GRAPH, TruncationParams(100))
        rhs = sorted(b for b, tag in zip(p.rhs, p.tags) if tag[0] == "core")
        assert rhs == [F(3, 100)] * 3 + [F(9, 100)] * 3

    def test_small_N_is_certified_or_rejected(self):
        with pytest.raises(PreconditionError) as exc:
            jewel.hrep(FIG1_GRAPH, TruncationParams(1))
        assert exc.value.clause == "truncation-margin"

    @pytest.mark.parametrize("g", [THETA, FIG1_GRAPH] + [g for g in SMALL if len(g) <= 4],
                             ids=lambda g: repr(mg.canonical_form(g)))
    def test_matches_brute_force(self, g):
        p = jewel.hrep(g)
        assert set(jewel.vertices(p)) == brute_vertices(p)


class TestLattice:
    def test_point_and_segment(self):
        assert jewel.lattice_check(L1)
        assert jewel.lattice_check(R2)

    def test_empty_polytope_fails(self):
        assert not jewel.lattice_check(FIG1_GRAPH, TruncationParams(1))

    def test_certificate_maps_labels_to_faces(self):
        image = jewel.certify_lattice(THETA)
        assert len(image) == 13
        assert len(image[FaceLabel()]) == 6


class TestFacetIsomorphisms:
    def test_fig1_border_facets(self):
        iso = jewel.facet_product_iso(FIG1_GRAPH, {"e2", "e3"})
        assert iso.left.f_vector() == [2, 1]
        assert iso.right.f_vector() == [2, 1]
        assert len(iso.mapping) == 9
        iso = jewel.facet_product_iso(FIG1_GRAPH, {"e1"})
        assert iso.left.f_vector() == [1]
        assert len(iso.mapping) == len(iso.right)

    def test_r2_vertex(self):
        iso = jewel.facet_product_iso(R2, {"l1"})
        assert len(iso.mapping) == 1

    def test_interior(self):
        iso = jewel.interior_facet_iso(FIG1_GRAPH, "e2")
        assert iso.target.f_vector() == jewel.face_poset(mg.rose(3)).f_vector()
        iso = jewel.interior_facet_iso(THETA, "x1")
        assert iso.target.f_vector() == [2, 1]

    def test_loop_is_rejected(self):
        with pytest.raises(PreconditionError) as exc:
            jewel.interior_facet_iso(FIG1_GRAPH, "e1")
        assert exc.value.clause == "non-loop-edge"

    def test_non_core_is_rejected(self):
        with pytest.raises(PreconditionError):
            jewel.facet_product_iso(FIG1_GRAPH, {"e2"})
