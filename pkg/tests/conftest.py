import pytest
from hypothesis import strategies as st

from jewelkit.multigraph import MultiGraph


@st.composite
def multigraphs(draw, max_vertices=4, max_edges=6, min_edges=0):
    nv = draw(st.integers(1, max_vertices))
    ne = draw(st.integers(min_edges, max_edges))
    ends = draw(st.lists(st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)), min_size=ne, max_size=ne))
    return MultiGraph(range(nv), [(f"e{i + 1}", uv) for i, uv in enumerate(ends)])


@pytest.fixture
def tmp_json(tmp_path):
    import json

    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
