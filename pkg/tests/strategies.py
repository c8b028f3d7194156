"""Hypothesis strategies for small graphs."""

from hypothesis import strategies as st

from bridgekit.graph import Graph


@st.composite
def graphs(draw, max_n=8, min_n=0, p_edges=None):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return Graph.from_edges(range(1, n + 1), sorted(chosen))


@st.composite
def nonempty_graphs(draw, max_n=8):
    return draw(graphs(max_n=max_n, min_n=1))


@st.composite
def trees(draw, max_n=8):
    n = draw(st.integers(min_value=1, max_value=max_n))
    edges = []
    for v in range(2, n + 1):
        parent = draw(st.integers(min_value=1, max_value=v - 1))
        edges.append((parent, v))
    return Graph.from_edges(range(1, n + 1), edges)
