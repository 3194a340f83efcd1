"""Built-in regression fixtures: three reference graphs and sphere systems.

Each expected value is tagged ``"reference"`` when it is a published value
and ``"computed"`` when it was worked out independently here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import multigraph as mg
from . import spheresys as ss
from .jewel import TruncationParams, truncation_constant
from .multigraph import EdgeSet, MultiGraph

FIG1_GRAPH = MultiGraph(
    [0, 1],
    [("e1", (0, 0)), ("e2", (0, 1)), ("e3", (0, 1)), ("e4", (1, 1))],
)
FIG1_CORES = (
    {"e1"}, {"e4"}, {"e2", "e3"}, {"e1", "e4"}, {"e1", "e2", "e3"}, {"e2", "e3", "e4"},
)

FIG2_SYSTEM = ss.DecoratedGraph(
    MultiGraph([0, 1], [("s1", (0, 0)), ("s2", (0, 1)), ("s3", (0, 1)), ("s4", (1, 1))]),
    {0: 0, 1: 0},
)

FIG3_SYSTEM = ss.DecoratedGraph(
    MultiGraph([0, 1], [("s1", (0, 1)), ("s2", (0, 1)), ("s3", (0, 1)), ("s4", (1, 1))]),
    {0: 0, 1: 0},
)
FIG3_LISTED = (
    {"s1"}, {"s2"}, {"s3"}, {"s4"}, {"s1", "s4"}, {"s2", "s4"}, {"s3", "s4"},
)


@dataclass
class Check:
    name: str
    expected: object
    observed: object
    source: str
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name, "expected": self.expected, "observed": self.observed,
            "source": self.source, "passed": self.passed,
        }


@dataclass
class Report:
    fixture: str
    checks: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, expected, observed, source):
        self.checks.append(Check(name, expected, observed, source, expected == observed))

    def as_dict(self) -> dict:
        return {
            "fixture": self.fixture,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "flags": self.flags,
        }


def _sets(g, sets):
    return sorted((list(g.ordered(s)) for s in sets), key=lambda s: (len(s), s))


def figure1() -> Report:
    g = FIG1_GRAPH
    rep = Report("figure1")
    cores = mg.enumerate_core_subgraphs(g)
    rep.add("core subgraphs", _sets(g, FIG1_CORES), _sets(g, cores), "reference")
    params = TruncationParams(1)
    consts = sorted(str(truncation_constant(g, c, params) * params.N) for c in cores)
    rep.add("truncation constants times N", ["3", "3", "3", "9", "9", "9"], consts, "reference")
    rep.add("rank of {e1,e4}", 2, mg.first_betti(g, {"e1", "e4"}), "reference")
    return rep


def figure2() -> Report:
    d = FIG2_SYSTEM
    rep = Report("figure2")
    rep.add("valid", True, ss.validate(d), "reference")
    rep.add("rank n", 3, d.n, "reference")
    rep.add("complete", True, ss.is_complete(d), "reference")
    rep.add("core", True, ss.is_core(d), "reference")
    rep.add("h", 2, ss.h_value(d), "reference")
    comps = ss.core_complements(d)
    expected = [d.graph.edge_set() - {e.replace("e", "s") for e in c} for c in FIG1_CORES]
    rep.add("core complements are complements of figure-1 cores", _sets(d.graph, expected),
            _sets(d.graph, comps), "computed")
    return rep


def figure3() -> Report:
    """Seven complements are listed for this system; a direct check also admits {s1,s2,s3}."""
    d = FIG3_SYSTEM
    rep = Report("figure3")
    comps = ss.core_complements(d)
    listed = [EdgeSet(s) for s in FIG3_LISTED]
    rep.add("listed sets are core complements", True, all(s in comps for s in listed), "reference")
    rep.add("{s1,s2} is not a core complement", False, ss.is_core_complement(d, {"s1", "s2"}), "reference")
    extra = [t for t in comps if t not in listed]
    rep.add("complements beyond the listed seven", [["s1", "s2", "s3"]], _sets(d.graph, extra), "computed")
    for t in extra:
        rep.flags.append({
            "set": list(d.graph.ordered(t)),
            "note": "satisfies the core-complement criterion (the remaining sphere is a loop) "
                    "but is not among the listed seven",
            "direct_cut_check": ss.bridge_free_by_cuts(d.graph, d.graph.edge_set() - t),
        })
    return rep


FIXTURES = {"figure1": figure1, "figure2": figure2, "figure3": figure3}

