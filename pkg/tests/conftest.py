import numpy as np
import pytest
import scipy.sparse as sp

from flowsum.graph import NodeMeta, from_edges


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def graph_from_triples(triples, node_ids=None, meta=None):
    """Build an InfluenceGraph from (src_id, dst_id, weight) triples."""
    return from_edges(triples, node_ids=node_ids, meta=meta)


@pytest.fixture
def path_graph():
    # 1 -> 2 -> 3
    return graph_from_triples([("1", "2", 1.0), ("2", "3", 1.0)])


@pytest.fixture
def shared_sink_graph():
    # 1 -> 3 <- 2
    return graph_from_triples([("1", "3", 1.0), ("2", "3", 1.0)])


@pytest.fixture
def diamond_graph():
    # f -> a, f -> b, a -> c, b -> c
    return graph_from_triples(
        [("f", "a", 1.0), ("f", "b", 1.0), ("a", "c", 1.0), ("b", "c", 1.0)]
    )


def random_digraph_matrix(n, density, rng):
    """Random nonnegative weighted digraph adjacency, no guarantee of connectivity."""
    mat = sp.random(n, n, density=density, random_state=rng, data_rvs=lambda k: rng.uniform(0.1, 2.0, k))
    mat = sp.csr_matrix(mat)
    mat.setdiag(0)
    mat.eliminate_zeros()
    return mat


def meta_for(graph, years=None, venues=None, fields=None):
    out = []
    for i, nid in enumerate(graph.node_ids):
        out.append(
            NodeMeta(
                node_id=nid,
                year=None if years is None else years[i],
                venue=None if venues is None else venues[i],
                fields=() if fields is None else tuple(fields[i]),
            )
        )
    return out


def assert_csr_equal(a, b, tol=0.0):
    d = (a - b).tocoo()
    if d.nnz:
        assert np.max(np.abs(d.data)) <= tol
