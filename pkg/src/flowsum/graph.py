"""Directed weighted influence graphs: loading, reversal, reachable-subgraph
extraction and paper-to-author projection.

The adjacency is kept in compressed sparse row form in both orientations so
that out- and in-neighbor scans are O(degree). Graphs are immutable after
construction and safe to share across threads.
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import ParseError, UnknownNodeError, ValidationError

YEAR_MIN, YEAR_MAX = 1000, 3000


@dataclass(frozen=True)
class NodeMeta:
    """Optional per-node attributes (bibliographic style)."""

    node_id: str
    title: str | None = None
    abstract: str | None = None
    venue: str | None = None
    year: int | None = None
    fields: tuple[str, ...] = ()
    extra: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.year is not None and not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValidationError(
                f"node {self.node_id!r}: year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )


class InfluenceGraph:
    """Immutable directed graph with positive edge weights.

    Node indices are dense ``0..n-1`` and map bijectively onto the external
    ``node_ids``. The same edge set is stored row-compressed in both the
    out-edge and in-edge orientation.
    """

    __slots__ = ("_out", "_in", "node_ids", "_index", "meta")

    def __init__(self, adjacency: sp.spmatrix, node_ids, meta=None):
        adj = sp.csr_matrix(adjacency, dtype=np.float64)
        adj.sum_duplicates()
        adj.eliminate_zeros()
        adj.sort_indices()
        n = adj.shape[0]
        if adj.shape[0] != adj.shape[1]:
            raise ValidationError(f"adjacency must be square, got {adj.shape}")
        if adj.nnz and adj.data.min() < 0:
            raise ValidationError("negative edge weight")
        node_ids = tuple(str(i) for i in node_ids)
        if len(node_ids) != n:
            raise ValidationError(f"{len(node_ids)} node ids for {n} nodes")
        if len(set(node_ids)) != n:
            raise ValidationError("duplicate node ids")
        if meta is not None:
            meta = tuple(meta)
            if len(meta) != n:
                raise ValidationError(f"{len(meta)} metadata entries for {n} nodes")
            for idx, m in enumerate(meta):
                if m.node_id != node_ids[idx]:
                    raise ValidationError(
                        f"metadata at position {idx} is for {m.node_id!r}, "
                        f"expected {node_ids[idx]!r}"
                    )
        self._out = adj
        self._in = adj.T.tocsr()
        self._in.sort_indices()
        self.node_ids = node_ids
        self._index = {nid: i for i, nid in enumerate(node_ids)}
        self.meta = meta

    # -- basic accessors ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._out.shape[0]

    @property
    def edge_count(self) -> int:
        return self._out.nnz

    @property
    def adjacency(self) -> sp.csr_matrix:
        """Out-edge CSR adjacency (treat as read-only)."""
        return self._out

    def index_of(self, node_id: str) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node id {node_id!r}") from None

    def out_neighbors(self, i: int) -> np.ndarray:
        return self._out.indices[self._out.indptr[i]:self._out.indptr[i + 1]]

    def in_neighbors(self, i: int) -> np.ndarray:
        return self._in.indices[self._in.indptr[i]:self._in.indptr[i + 1]]

    def in_degrees(self, weighted: bool = True) -> np.ndarray:
        if weighted:
            return np.asarray(self._out.sum(axis=0)).ravel()
        return np.diff(self._in.indptr).astype(np.float64)

    def edges(self):
        """Yield (source index, target index, weight) in row-major order."""
        coo = self._out.tocoo()
        yield from zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())

    def __repr__(self):
        return f"InfluenceGraph(n={self.node_count}, m={self.edge_count})"


# -- parsing ---------------------------------------------------------------


def _iter_lines(source):
    """Yield (lineno, text) from a path, file object or iterable of lines."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    else:
        yield from enumerate(source, start=1)


def read_meta_jsonl(source) -> list[NodeMeta]:
    """Parse node metadata, one JSON object per line.

    Recognized keys: ``id`` (required), ``title``, ``abstract``, ``venue``,
    ``year``, ``fields`` (array of strings). Unknown string-valued keys are
    kept in ``extra``.
    """
    out = []
    seen = set()
    for lineno, raw in _iter_lines(source):
        line = raw.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line=lineno) from None
        if not isinstance(rec, dict) or "id" not in rec:
            raise ParseError("metadata record must be an object with an 'id' key", line=lineno)
        nid = str(rec["id"])
        if nid in seen:
            raise ParseError(f"duplicate metadata for node {nid!r}", line=lineno)
        seen.add(nid)
        year = rec.get("year")
        if year is not None:
            try:
                year = int(year)
            except (TypeError, ValueError):
                raise ParseError(f"year must be an integer, got {rec['year']!r}", line=lineno) from None
        fields = rec.get("fields") or ()
        if isinstance(fields, str) or not isinstance(fields, (list, tuple)):
            raise ParseError("'fields' must be an array of strings", line=lineno)
        extra = {
            k: str(v)
            for k, v in rec.items()
            if k not in ("id", "title", "abstract", "venue", "year", "fields")
        }
        try:
            out.append(
                NodeMeta(
                    node_id=nid,
                    title=rec.get("title"),
                    abstract=rec.get("abstract"),
                    venue=rec.get("venue"),
                    year=year,
                    fields=tuple(str(f) for f in fields),
                    extra=extra,
                )
            )
        except ValidationError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return out


def read_edge_tsv(source):
    """Parse edge records ``src<TAB>dst<TAB>weight?``; ``#`` starts a comment.

    Returns a list of (src id, dst id, weight) with weight defaulting to 1.
    """
    edges = []
    for lineno, raw in _iter_lines(source):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) == 1:  # tolerate space-separated input
            parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 2 or 3 columns, got {len(parts)}", line=lineno)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"weight {parts[2]!r} is not a number", line=lineno) from None
            if not np.isfinite(w):
                raise ParseError(f"weight {parts[2]!r} is not finite", line=lineno)
        if w < 0:
            raise ValidationError(f"line {lineno}: negative weight {w}")
        edges.append((parts[0], parts[1], w))
    return edges


def from_edges(edges, node_ids=None, meta=None) -> InfluenceGraph:
    """Build a graph from (src id, dst id, weight) triples.

    Duplicate edges merge by weight summation; zero-weight records are
    dropped. When ``node_ids`` is omitted the node set is the edge-mentioned
    ids in first-appearance order.
    """
    if node_ids is None:
        order: dict[str, int] = {}
        for s, t, _ in edges:
            for nid in (str(s), str(t)):
                if nid not in order:
                    order[nid] = len(order)
        node_ids = list(order)
    node_ids = [str(i) for i in node_ids]
    index = {nid: i for i, nid in enumerate(node_ids)}
    rows, cols, vals = [], [], []
    for s, t, w in edges:
        s, t = str(s), str(t)
        if s not in index:
            raise ValidationError(f"edge references unknown node {s!r}")
        if t not in index:
            raise ValidationError(f"edge references unknown node {t!r}")
        if w < 0:
            raise ValidationError(f"negative weight {w} on edge {s!r}->{t!r}")
        rows.append(index[s])
        cols.append(index[t])
        vals.append(float(w))
    n = len(node_ids)
    adj = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return InfluenceGraph(adj, node_ids, meta)


def load_graph(edge_source, meta_source=None) -> InfluenceGraph:
    """Load a graph from an edge TSV and optional metadata JSONL.

    With metadata, the node universe is exactly the metadata ids and any edge
    endpoint outside it is a dangling reference. Without metadata, edge
    endpoints declare the nodes themselves.
    """
    edges = read_edge_tsv(edge_source)
    if meta_source is None:
        return from_edges(edges)
    meta = read_meta_jsonl(meta_source)
    node_ids = [m.node_id for m in meta]
    index = set(node_ids)
    for s, t, _ in edges:
        for nid in (str(s), str(t)):
            if nid not in index:
                raise ValidationError(f"dangling node reference {nid!r} (not in metadata)")
    return from_edges(edges, node_ids=node_ids, meta=meta)


def write_edge_tsv(g: InfluenceGraph, path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, j, w in g.edges():
            fh.write(f"{g.node_ids[i]}\t{g.node_ids[j]}\t{w:g}\n")


def write_meta_jsonl(meta, path):
    with open(path, "w", encoding="utf-8") as fh:
        for m in meta:
            rec: dict = {"id": m.node_id}
            if m.title is not None:
                rec["title"] = m.title
            if m.abstract is not None:
                rec["abstract"] = m.abstract
            if m.venue is not None:
                rec["venue"] = m.venue
            if m.year is not None:
                rec["year"] = m.year
            if m.fields:
                rec["fields"] = list(m.fields)
            rec.update(m.extra)
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


# -- transforms ------------------------------------------------------------


def reverse_edges(g: InfluenceGraph) -> InfluenceGraph:
    """Flip every edge direction; node order and metadata are unchanged.

    Citation data turns into influence data this way: a paper influences the
    papers that cite it.
    """
    return InfluenceGraph(g.adjacency.T.tocsr(), g.node_ids, g.meta)


def maximal_influence_graph(g: InfluenceGraph, source: str | int) -> InfluenceGraph:
    """Induced subgraph on everything reachable from ``source`` (included).

    Traversal is breadth-first; the subgraph is re-indexed by BFS discovery
    order (neighbors expanded in ascending original index), so the source is
    always node 0 of the result.
    """
    f = g.index_of(source) if isinstance(source, str) else int(source)
    if not (0 <= f < g.node_count):
        raise UnknownNodeError(f"node index {f} out of range")
    seen = np.zeros(g.node_count, dtype=bool)
    seen[f] = True
    order = [f]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for v in g.out_neighbors(u):
            if not seen[v]:
                seen[v] = True
                order.append(int(v))
    keep = np.array(order, dtype=np.intp)
    sub = g.adjacency[keep][:, keep]
    ids = [g.node_ids[i] for i in order]
    meta = None if g.meta is None else [g.meta[i] for i in order]
    return InfluenceGraph(sub, ids, meta)


def project_author_graph(
    g: InfluenceGraph, paper_to_author: Mapping[str, object], min_papers: int = 0
) -> InfluenceGraph:
    """Collapse a paper-level graph to an author-level influence graph.

    Each paper-level link contributes its weight to the (citing author,
    cited author) edge, for every author pair when papers have several
    authors. Authors with fewer than ``min_papers`` papers in the mapping are
    dropped before any edge is built, together with their incident links.
    """
    if min_papers < 0:
        raise ValidationError("min_papers must be >= 0")

    def authors_of(value):
        if isinstance(value, (list, tuple, set, frozenset)):
            return [str(a) for a in value]
        return [str(value)]

    paper_count: dict[str, int] = {}
    for _, value in paper_to_author.items():
        for a in authors_of(value):
            paper_count[a] = paper_count.get(a, 0) + 1

    for nid in g.node_ids:
        if nid not in paper_to_author:
            raise ValidationError(f"paper node {nid!r} has no author mapping")

    kept = {a for a, c in paper_count.items() if c >= min_papers}
    author_ids: list[str] = []
    author_index: dict[str, int] = {}
    for nid in g.node_ids:  # first-appearance order over papers
        for a in authors_of(paper_to_author[nid]):
            if a in kept and a not in author_index:
                author_index[a] = len(author_ids)
                author_ids.append(a)

    rows, cols, vals = [], [], []
    for i, j, w in g.edges():
        src_authors = [a for a in authors_of(paper_to_author[g.node_ids[i]]) if a in kept]
        dst_authors = [a for a in authors_of(paper_to_author[g.node_ids[j]]) if a in kept]
        for sa in src_authors:
            for da in dst_authors:
                rows.append(author_index[sa])
                cols.append(author_index[da])
                vals.append(w)
    n = len(author_ids)
    adj = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return InfluenceGraph(adj, author_ids)
