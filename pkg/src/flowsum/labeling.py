"""Cluster labels from node text and categorical tags.

Keywords are scored by the ratio of in-cluster frequency to corpus
frequency, where the corpus is the summarized graph itself: a term scores
1.0 when every one of its occurrences falls inside the cluster, so labels
contrast clusters against each other rather than against English at large.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .graph import NodeMeta
from .summarize import ClusterAssignment

TOKEN_RE = re.compile(r"[a-z0-9]+")
MIN_CORPUS_FREQ = 3  # rarer terms are too noisy to rank


@dataclass(frozen=True)
class ClusterLabel:
    cluster: int
    keywords: tuple[tuple[str, float], ...] = ()
    top_fields: tuple[tuple[str, int], ...] = ()


def default_stopwords() -> frozenset[str]:
    text = resources.files("flowsum").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def load_stopwords(path) -> frozenset[str]:
    """One lowercase token per line; blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


def tokenize(text: str, stopwords: frozenset[str]) -> list[str]:
    return [t for t in TOKEN_RE.findall(text.lower()) if t not in stopwords]


def _node_tokens(meta: NodeMeta, stopwords: frozenset[str]) -> list[str]:
    parts = [p for p in (meta.title, meta.abstract) if p]
    if not parts:
        return []
    return tokenize(" ".join(parts), stopwords)


def keyword_labels(
    meta: Sequence[NodeMeta],
    asg: ClusterAssignment,
    top_n: int = 5,
    stopwords: frozenset[str] | None = None,
) -> list[ClusterLabel]:
    """Top terms per cluster by cluster-to-corpus frequency ratio.

    Terms seen fewer than three times in the whole corpus are dropped;
    clusters without any scoring term get an empty keyword list. Ties
    resolve alphabetically for determinism.
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    if stopwords is None:
        stopwords = default_stopwords()
    corpus: Counter[str] = Counter()
    per_cluster: list[Counter[str]] = [Counter() for _ in range(asg.effective_k)]
    for i, m in enumerate(meta):
        toks = _node_tokens(m, stopwords)
        corpus.update(toks)
        per_cluster[asg.labels[i]].update(toks)

    out = []
    for c in range(asg.effective_k):
        scored = [
            (term, count / corpus[term])
            for term, count in per_cluster[c].items()
            if corpus[term] >= MIN_CORPUS_FREQ
        ]
        scored.sort(key=lambda kv: (-kv[1], kv[0]))
        out.append(ClusterLabel(cluster=c, keywords=tuple(scored[:top_n])))
    return out


def field_labels(
    meta: Sequence[NodeMeta], asg: ClusterAssignment, top_n: int = 3
) -> list[ClusterLabel]:
    """Most common research-field tags per cluster, ties alphabetical."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    per_cluster: list[Counter[str]] = [Counter() for _ in range(asg.effective_k)]
    for i, m in enumerate(meta):
        per_cluster[asg.labels[i]].update(m.fields)
    out = []
    for c in range(asg.effective_k):
        ranked = sorted(per_cluster[c].items(), key=lambda kv: (-kv[1], kv[0]))
        out.append(ClusterLabel(cluster=c, top_fields=tuple(ranked[:top_n])))
    return out


def merge_labels(
    keywords: Sequence[ClusterLabel], fields: Sequence[ClusterLabel]
) -> list[ClusterLabel]:
    """Combine keyword and field labels computed for the same assignment."""
    return [
        ClusterLabel(cluster=kw.cluster, keywords=kw.keywords, top_fields=fl.top_fields)
        for kw, fl in zip(keywords, fields)
    ]
