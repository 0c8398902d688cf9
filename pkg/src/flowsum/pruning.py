"""Reduce the full flow set to the summary graph shown to the user.

Rank filtering keeps the l strongest size-normalized flows and then adds
back, for every cluster, its single strongest incoming flow, so pruning
never strands a cluster that had any incoming influence. A maximum
spanning tree over the undirected flow collapse is the sparser
alternative.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .summarize import ClusterAssignment, FlowMatrix, ranked_flows


@dataclass
class SummaryCluster:
    cluster_id: int
    size: int
    members: tuple[int, ...]  # node indices, ascending
    label: str = ""


@dataclass(frozen=True)
class SummaryFlow:
    src: int
    dst: int
    raw_sum: float
    rate: float
    normalized_rate: float


@dataclass
class SummaryGraph:
    clusters: list[SummaryCluster]
    flows: list[SummaryFlow]
    source_cluster: int

    def __post_init__(self):
        ids = {c.cluster_id for c in self.clusters}
        seen = set()
        for f in self.flows:
            if f.src not in ids or f.dst not in ids:
                raise ValidationError(f"flow {f.src}->{f.dst} references missing cluster")
            if (f.src, f.dst) in seen:
                raise ValidationError(f"duplicate flow {f.src}->{f.dst}")
            seen.add((f.src, f.dst))


def _clusters_of(asg: ClusterAssignment) -> list[SummaryCluster]:
    return [
        SummaryCluster(
            cluster_id=c,
            size=int(asg.cluster_sizes[c]),
            members=tuple(int(i) for i in asg.members(c)),
        )
        for c in range(asg.effective_k)
    ]


def _flow(flows: FlowMatrix, src: int, dst: int) -> SummaryFlow:
    return SummaryFlow(
        src=src,
        dst=dst,
        raw_sum=float(flows.raw_sum[src, dst]),
        rate=float(flows.rate[src, dst]),
        normalized_rate=float(flows.normalized_rate[src, dst]),
    )


def rank_filter(
    flows: FlowMatrix, asg: ClusterAssignment, l: int, source_index: int = 0
) -> SummaryGraph:
    """Top-l flows by normalized rate, plus incoming-connectivity recovery.

    All k^2 flows are ranked by normalized rate (ties: source then target
    cluster ascending); ranks beyond l are pruned; then each cluster's
    strongest incoming flow is re-added if it was pruned. Zero-rate flows
    are never emitted, and self-loops do not count as incoming connectivity.
    ``source_index`` names the graph node whose cluster anchors the summary.
    """
    k = flows.k
    if not (1 <= l <= k * k):
        raise ValidationError(f"l must be in [1, {k * k}], got {l}")
    ranked = ranked_flows(flows)
    norm = flows.normalized_rate
    kept = [(s, d) for s, d in ranked[:l] if norm[s, d] > 0]
    kept_set = set(kept)

    # the recovery pass of the pruning algorithm: strongest incoming per cluster
    for d in range(k):
        if any(dst == d for _, dst in kept):
            continue
        best = None
        for s, dst in ranked:  # ranked order makes the first hit the strongest
            if dst == d and s != d and norm[s, dst] > 0:
                best = (s, dst)
                break
        if best is not None and best not in kept_set:
            kept.append(best)
            kept_set.add(best)

    out_flows = [_flow(flows, s, d) for s, d in kept]
    return SummaryGraph(
        clusters=_clusters_of(asg),
        flows=out_flows,
        source_cluster=int(asg.labels[source_index]),
    )


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def mst_prune(
    flows: FlowMatrix, asg: ClusterAssignment, source_index: int = 0
) -> SummaryGraph:
    """Maximum-weight spanning tree per component of the flow support.

    The k^2 flows collapse to an undirected graph whose edge weight is the
    larger normalized rate of the two directions; a maximum spanning tree is
    kept per connected component (Kruskal, deterministic tie-break on the
    cluster pair), and each retained edge is emitted in its dominant
    direction (ties resolve to low-to-high cluster id).
    """
    k = flows.k
    norm = flows.normalized_rate
    undirected = []
    for c in range(k):
        for d in range(c + 1, k):
            w = max(norm[c, d], norm[d, c])
            if w > 0:
                undirected.append((w, c, d))
    undirected.sort(key=lambda e: (-e[0], e[1], e[2]))

    uf = _UnionFind(k)
    kept = []
    for w, c, d in undirected:
        if uf.union(c, d):
            if norm[c, d] >= norm[d, c]:
                kept.append((c, d))
            else:
                kept.append((d, c))

    out_flows = [_flow(flows, s, d) for s, d in kept]
    return SummaryGraph(
        clusters=_clusters_of(asg),
        flows=out_flows,
        source_cluster=int(asg.labels[source_index]),
    )
