"""Synthetic influence graphs with known structure.

The layered generator plants a flow chain: nodes fall into consecutive
layers and edges run overwhelmingly from one layer to the next, so the
layer index is the ground-truth clustering a summarizer should recover.
The DAG generators provide corpora for comparative and scaling runs.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .graph import InfluenceGraph, NodeMeta

LAYER_VOCAB = (
    ("foundations", "axioms", "lattice", "semantics", "calculus"),
    ("algorithms", "indexing", "hashing", "traversal", "partitioning"),
    ("systems", "throughput", "caching", "replication", "scheduling"),
    ("applications", "dashboards", "forecasting", "personalization", "telemetry"),
    ("surveys", "benchmarks", "taxonomy", "evaluation", "reproducibility"),
)
SHARED_VOCAB = ("graph", "network", "influence", "analysis", "method")
LAYER_FIELDS = ("Theory", "Algorithms", "Systems", "Applications", "Surveys")
LAYER_VENUES = ("JACM", "SODA", "OSDI", "KDD", "CSUR")


def _layer_meta(node_id: str, layer: int, rng: np.random.Generator) -> NodeMeta:
    vocab = LAYER_VOCAB[layer % len(LAYER_VOCAB)]
    words = list(rng.choice(vocab, size=3, replace=True))
    words.append(SHARED_VOCAB[int(rng.integers(len(SHARED_VOCAB)))])
    return NodeMeta(
        node_id=node_id,
        title=" ".join(words),
        abstract=" ".join(rng.choice(vocab, size=6, replace=True)),
        venue=LAYER_VENUES[layer % len(LAYER_VENUES)],
        year=int(1995 + 5 * layer + rng.integers(0, 4)),
        fields=(LAYER_FIELDS[layer % len(LAYER_FIELDS)],),
    )


def layered_graph(
    layers: int = 4,
    per_layer: int = 50,
    p_chain: float = 0.15,
    p_noise: float = 0.01,
    seed: int = 0,
    with_metadata: bool = True,
    connect_source: bool = False,
):
    """Planted-layer graph; returns (graph, layer labels).

    Every ordered pair from layer i to layer i+1 gets an edge with
    probability ``p_chain``; every other ordered pair (self-pairs excluded)
    with probability ``p_noise``. Metadata gives each layer its own
    vocabulary, field tag, venue, and era, so labels separate cleanly.
    With ``connect_source``, node 0 is wired to every layer-1 node it
    missed, making the whole chain reachable from it (a fixture for
    source-rooted extraction).
    """
    rng = np.random.default_rng(seed)
    n = layers * per_layer
    layer_of = np.repeat(np.arange(layers), per_layer)
    mask = rng.random((n, n))
    chain = layer_of[None, :] == layer_of[:, None] + 1
    prob = np.where(chain, p_chain, p_noise)
    dense = (mask < prob).astype(np.float64)
    np.fill_diagonal(dense, 0.0)
    if connect_source and layers > 1:
        dense[0, per_layer : 2 * per_layer] = 1.0
    ids = tuple(f"n{i}" for i in range(n))
    meta = None
    if with_metadata:
        meta = [_layer_meta(ids[i], int(layer_of[i]), rng) for i in range(n)]
    g = InfluenceGraph(sp.csr_matrix(dense), ids, meta)
    return g, layer_of


def random_dag(n: int, p: float, seed: int = 0, weighted: bool = False) -> InfluenceGraph:
    """Uniform random DAG: each forward pair (i, j), i < j, kept with prob p."""
    rng = np.random.default_rng(seed)
    dense = np.triu((rng.random((n, n)) < p).astype(np.float64), k=1)
    if weighted:
        dense *= rng.uniform(0.5, 2.0, size=(n, n))
        dense = np.triu(dense, k=1)
    ids = tuple(str(i) for i in range(n))
    return InfluenceGraph(sp.csr_matrix(dense), ids)


def influence_dag(
    n: int = 500,
    layers: int = 10,
    p_consecutive: float = 0.08,
    p_skip: float = 0.004,
    seed: int = 0,
) -> InfluenceGraph:
    """Layered DAG shaped like a citation-influence cascade.

    Edges run only from earlier to later layers, dense between consecutive
    layers and sparse across longer skips, mimicking how influence decays
    with distance from the source generation.
    """
    rng = np.random.default_rng(seed)
    per = n // layers
    layer_of = np.repeat(np.arange(layers), per)
    if layer_of.shape[0] < n:
        layer_of = np.concatenate([layer_of, np.full(n - layer_of.shape[0], layers - 1)])
    diff = layer_of[None, :] - layer_of[:, None]
    prob = np.where(diff == 1, p_consecutive, np.where(diff >= 2, p_skip, 0.0))
    dense = (rng.random((n, n)) < prob).astype(np.float64)
    ids = tuple(str(i) for i in range(n))
    return InfluenceGraph(sp.csr_matrix(dense), ids)


def scaling_graph(n: int = 10_000, out_degree: int = 3, seed: int = 0) -> InfluenceGraph:
    """Sparse influence DAG at benchmark scale: ~out_degree edges per node.

    Node i points at up to ``out_degree`` distinct earlier nodes, biased
    toward recent ones, so edges always run toward the older generation and
    the graph stays acyclic.
    """
    rng = np.random.default_rng(seed)
    rows, cols = [], []
    for i in range(1, n):
        d = min(i, out_degree)
        # recency bias: look back a bounded window when possible
        window = min(i, max(50, i // 4))
        targets = rng.choice(window, size=d, replace=False)
        for t in targets:
            rows.append(i)
            cols.append(i - 1 - int(t))
    data = np.ones(len(rows))
    adj = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    ids = tuple(str(i) for i in range(n))
    return InfluenceGraph(adj, ids)
