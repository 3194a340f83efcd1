import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import multigraphs
from jewelkit import multigraph as mg
from jewelkit.errors import PreconditionError
from jewelkit.fixtures import FIG1_CORES, FIG1_GRAPH
from jewelkit.multigraph import MultiGraph


def to_nx(g, a=None):
    a = g.edge_set() if a is None else a
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices)
    for e, (u, v) in g.edges:
        if e in a:
            h.add_edge(u, v, key=e)
    return h


def nx_bridges(g, a=None):
    """Edges whose removal increases the component count, by brute force."""
    a = g.edge_set() if a is None else set(a)
    base = nx.number_connected_components(to_nx(g, a))
    return {e for e in a if nx.number_connected_components(to_nx(g, a - {e})) > base}


def nx_betti(g, a=None):
    h = to_nx(g, a)
    h.remove_nodes_from([v for v in list(h) if h.degree(v) == 0])
    return h.number_of_edges() - h.number_of_nodes() + nx.number_connected_components(h)


class TestConstruction:
    def test_rejects_duplicate_vertices(self):
        with pytest.raises(PreconditionError) as exc:
            MultiGraph([0, 0], [])
        assert exc.value.clause == "unique-vertex-ids"

    def test_rejects_unknown_endpoint(self):
        with pytest.raises(PreconditionError) as exc:
            MultiGraph([0], [("a", (0, 1))])
        assert exc.value.clause == "edge-endpoints"

    def test_rejects_duplicate_edge_ids(self):
        with pytest.raises(PreconditionError) as exc:
            MultiGraph([0, 1], [("a", (0, 1)), ("a", (1, 0))])
        assert exc.value.clause == "unique-edge-ids"

    def test_unknown_edges_in_subset(self):
        with pytest.raises(PreconditionError):
            FIG1_GRAPH.check_edges({"zz"})

    def test_degree_counts_loops_twice(self):
        assert FIG1_GRAPH.degree(0) == 4
        assert mg.rose(3).degree(0) == 6


class TestCores:
    def test_fig1_cores(self):
        assert set(mg.enumerate_core_subgraphs(FIG1_GRAPH)) == {frozenset(c) for c in FIG1_CORES}

    def test_whole_graph_is_included_on_request(self):
        cores = mg.enumerate_core_subgraphs(FIG1_GRAPH, proper_only=False)
        assert FIG1_GRAPH.edge_set() in cores and len(cores) == 7

    def test_theta_cores_are_pairs(self):
        g = mg.theta()
        assert sorted(map(sorted, mg.enumerate_core_subgraphs(g))) == [["x1", "x2"], ["x1", "x3"], ["x2", "x3"]]

    def test_is_core_rejects_empty(self):
        with pytest.raises(PreconditionError):
            mg.is_core(FIG1_GRAPH, set())

    def test_core_of_drops_bridges_of_span(self):
        g = MultiGraph([0, 1, 2], [("a", (0, 0)), ("b", (0, 1)), ("c", (1, 2)), ("d", (2, 2))])
        assert mg.core_of(g, {"a", "b", "c", "d"}) == {"a", "d"}
        assert mg.core_of(g, {"b"}) == frozenset()

    def test_complement_of_full_graph_is_rejected(self):
        with pytest.raises(PreconditionError):
            mg.complement(FIG1_GRAPH, FIG1_GRAPH.edge_set())

    def test_collapse_of_parallel_pair(self):
        h = mg.collapse(FIG1_GRAPH, {"e2", "e3"})
        assert len(h.vertices) == 1 and set(h.edge_ids) == {"e1", "e4"}
        assert all(h.is_loop(e) for e in h.edge_ids)

    @settings(max_examples=150, deadline=None)
    @given(multigraphs())
    def test_bridges_match_brute_force(self, g):
        assert mg.bridges(g) == nx_bridges(g)

    @settings(max_examples=150, deadline=None)
    @given(multigraphs(), st.randoms(use_true_random=False))
    def test_betti_matches_networkx(self, g, rnd):
        a = {e for e in g.edge_ids if rnd.random() < 0.6}
        assert mg.first_betti(g, a) == nx_betti(g, a)

    @settings(max_examples=100, deadline=None)
    @given(multigraphs(max_edges=6, min_edges=1))
    def test_core_subgraph_definition(self, g):
        cores = set(mg.enumerate_core_subgraphs(g, proper_only=False))
        brute = {frozenset(a) for r in range(1, len(g) + 1) for a in itertools.combinations(g.edge_ids, r)
                 if not nx_bridges(g, set(a))}
        assert cores == brute

    @settings(max_examples=100, deadline=None)
    @given(multigraphs(max_edges=6, min_edges=1), st.randoms(use_true_random=False))
    def test_core_of_is_largest_core_inside(self, g, rnd):
        a = frozenset(e for e in g.edge_ids if rnd.random() < 0.7)
        c = mg.core_of(g, a)
        assert c <= a
        inside = [x for x in mg.enumerate_core_subgraphs(g, proper_only=False) if x <= a]
        assert c == (max(inside, key=len) if inside else frozenset())
        assert mg.first_betti(g, c) == (mg.first_betti(g, a) if a else 0)

    @settings(max_examples=100, deadline=None)
    @given(multigraphs(max_edges=6, min_edges=2), st.randoms(use_true_random=False))
    def test_rank_additive_under_collapse(self, g, rnd):
        a = frozenset(e for e in g.edge_ids if rnd.random() < 0.5) or frozenset(g.edge_ids[:1])
        assert mg.first_betti(g) == mg.first_betti(g, a) + mg.first_betti(mg.collapse(g, a))


def relabel(g, rnd):
    verts = list(g.vertices)
    perm = dict(zip(verts, rnd.sample(verts, len(verts))))
    edges = [(e, (perm[u], perm[v]) if rnd.random() < 0.5 else (perm[v], perm[u])) for e, (u, v) in g.edges]
    rnd.shuffle(edges)
    return MultiGraph(sorted(perm.values(), key=lambda _: rnd.random()), edges), perm


class TestCanonicalForm:
    @settings(max_examples=200, deadline=None)
    @given(multigraphs(max_vertices=5, max_edges=7), st.randoms(use_true_random=False))
    def test_invariant_under_relabeling(self, g, rnd):
        labels = {v: rnd.randint(0, 1) for v in g.vertices}
        h, perm = relabel(g, rnd)
        assert mg.canonical_form(g, labels) == mg.canonical_form(h, {perm[v]: k for v, k in labels.items()})

    @settings(max_examples=150, deadline=None)
    @given(multigraphs(max_vertices=4, max_edges=5), multigraphs(max_vertices=4, max_edges=5))
    def test_agrees_with_networkx_isomorphism(self, g, h):
        ours = mg.is_isomorphic(g, h)
        theirs = nx.is_isomorphic(nx.MultiGraph(to_nx(g)), nx.MultiGraph(to_nx(h)))
        assert ours == theirs

    def test_labels_distinguish(self):
        g = MultiGraph([0, 1], [("a", (0, 1)), ("b", (0, 0))])
        assert not mg.is_isomorphic(g, g, {0: 1, 1: 0}, {0: 0, 1: 1})

    @settings(max_examples=100, deadline=None)
    @given(multigraphs(max_vertices=5, max_edges=6))
    def test_graph_from_code_round_trip(self, g):
        code = mg.canonical_form(g)
        assert mg.canonical_form(mg.graph_from_code(code)) == code

    def test_orderings_are_automorphisms(self):
        g = mg.theta(3)
        form = mg.canonical_search(mg.adjacency(g), [0, 0])
        assert sorted(form.orderings) == [(0, 1), (1, 0)]


def nx_core_graph_count(max_edges):
    """Connected bridgeless multigraphs up to isomorphism, built edge by edge with networkx."""
    seen = []
    for ne in range(1, max_edges + 1):
        for nv in range(1, ne + 1):
            pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
            for combo in itertools.combinations_with_replacement(pairs, ne):
                h = nx.MultiGraph()
                h.add_nodes_from(range(nv))
                h.add_edges_from(combo)
                if not nx.is_connected(h) or any(d < 2 for _, d in h.degree()):
                    continue
                g = MultiGraph(range(nv), [(f"e{i}", uv) for i, uv in enumerate(combo)])
                if mg.bridges(g):
                    continue
                if not any(nx.is_isomorphic(h, k) for k in seen):
                    seen.append(h)
    return len(seen)


@pytest.mark.parametrize("max_edges", [1, 2, 3, 4])
def test_core_graph_enumeration_matches_brute_force(max_edges):
    assert len(mg.enumerate_core_graphs(max_edges)) == nx_core_graph_count(max_edges)


def test_core_graph_enumeration_is_duplicate_free():
    gs = mg.enumerate_core_graphs(5)
    codes = [mg.canonical_form(g) for g in gs]
    assert len(set(codes)) == len(codes)
    assert all(mg.is_core(g) and len(mg.components(g)) == 1 for g in gs)


def test_partitions_are_complete():
    got = list(mg.partitions(6, 3, minimum=1))
    expect = {p for p in itertools.product(range(1, 7), repeat=3) if sum(p) == 6 and list(p) == sorted(p, reverse=True)}
    assert len(got) == len(set(got)) and set(got) == expect
