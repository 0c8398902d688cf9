"""Summary document assembly, canonical JSON, and DOT export.

The document is the single serialized artifact shared by the CLI and the
HTTP API: cluster composition with labels, retained flows, and solver
diagnostics. File output is byte-deterministic for a fixed seed, so wall
times are kept out of the document unless explicitly requested.
"""
from __future__ import annotations

import json
from importlib import resources
from typing import Sequence

from .graph import InfluenceGraph
from .labeling import ClusterLabel
from .pruning import SummaryGraph
from .summarize import SummarizeConfig

SCHEMA_VERSION = 1
SAMPLE_MEMBERS = 10
PEN_WIDTH_MIN = 1.0
PEN_WIDTH_MAX = 8.0


def config_echo(cfg: SummarizeConfig) -> dict:
    return {
        "k": cfg.k,
        "l": cfg.resolved_l,
        "similarity": cfg.similarity,
        "use_attribute": cfg.use_attribute,
        "attribute": cfg.attribute,
        "use_time": cfg.use_time,
        "lambda_aug": cfg.augment.lambda_aug,
        "lambda_decay": cfg.augment.lambda_decay,
        "seed": cfg.seed,
        "max_iter": cfg.max_iter,
        "rel_tol": cfg.rel_tol,
        "prune": cfg.prune,
        "restarts": cfg.restarts,
    }


def _members_by_indegree(g: InfluenceGraph, members: Sequence[int]) -> list[int]:
    indeg = g.in_degrees()
    return sorted(members, key=lambda i: (-indeg[i], i))


def build_summary_document(
    g: InfluenceGraph,
    summary: SummaryGraph,
    labels: Sequence[ClusterLabel],
    cfg: SummarizeConfig,
    diagnostics: dict,
    source_id: str | None = None,
    include_members: bool = False,
    include_timings: bool = False,
) -> dict:
    """Assemble the serializable summary document.

    ``labels`` must be aligned with the summary's clusters. Members are
    node ids; ``sample_members`` holds the ten heaviest nodes of each
    cluster by weighted in-degree.
    """
    by_cluster = {lbl.cluster: lbl for lbl in labels}
    clusters = []
    for c in summary.clusters:
        lbl = by_cluster.get(c.cluster_id, ClusterLabel(cluster=c.cluster_id))
        ranked = _members_by_indegree(g, c.members)
        entry = {
            "id": c.cluster_id,
            "size": c.size,
            "label": {
                "keywords": [
                    {"term": t, "score": float(s)} for t, s in lbl.keywords
                ],
                "top_fields": [
                    {"field": f, "count": int(n)} for f, n in lbl.top_fields
                ],
            },
            "sample_members": [g.node_ids[i] for i in ranked[:SAMPLE_MEMBERS]],
        }
        if include_members:
            entry["members"] = [g.node_ids[i] for i in c.members]
        clusters.append(entry)

    flows = [
        {
            "src": f.src,
            "dst": f.dst,
            "raw_sum": float(f.raw_sum),
            "rate": float(f.rate),
            "normalized_rate": float(f.normalized_rate),
        }
        for f in sorted(
            summary.flows, key=lambda f: (-f.normalized_rate, f.src, f.dst)
        )
    ]

    diag = {
        "objective_trace": [float(x) for x in diagnostics.get("objective_trace", [])],
        "effective_k": int(diagnostics.get("effective_k", len(clusters))),
        "warnings": list(diagnostics.get("warnings", [])),
    }
    if include_timings and "timings" in diagnostics:
        diag["timings"] = {k: float(v) for k, v in diagnostics["timings"].items()}

    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config_echo(cfg),
        "source_cluster": int(summary.source_cluster),
        "clusters": clusters,
        "flows": flows,
        "diagnostics": diag,
    }
    if source_id is not None:
        doc["source"] = source_id
    return doc


def to_json_bytes(doc: dict, compact: bool = False) -> bytes:
    """Canonical JSON encoding: sorted keys, stable float repr."""
    if compact:
        text = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    else:
        text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return text.encode("utf-8")


def load_schema() -> dict:
    raw = (
        resources.files("flowsum")
        .joinpath("schemas/summary_document.schema.json")
        .read_text("utf-8")
    )
    return json.loads(raw)


# -- DOT export ---------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _pen_width(rate: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return (PEN_WIDTH_MIN + PEN_WIDTH_MAX) / 2
    frac = (rate - lo) / (hi - lo)
    return PEN_WIDTH_MIN + frac * (PEN_WIDTH_MAX - PEN_WIDTH_MIN)


def to_dot(doc: dict) -> str:
    """Graphviz digraph: node label is "size\\nkeywords", edge width by rate."""
    lines = ["digraph summary {"]
    for c in doc["clusters"]:
        kws = " ".join(kw["term"] for kw in c["label"]["keywords"][:3])
        if not kws:
            kws = " ".join(f["field"] for f in c["label"]["top_fields"][:3])
        label = f"{c['size']}" + (f"\\n{_dot_escape(kws)}" if kws else "")
        lines.append(f'  c{c["id"]} [label="{label}"];')
    rates = [f["normalized_rate"] for f in doc["flows"]]
    lo, hi = (min(rates), max(rates)) if rates else (0.0, 0.0)
    for f in doc["flows"]:
        w = _pen_width(f["normalized_rate"], lo, hi)
        lines.append(f'  c{f["src"]} -> c{f["dst"]} [penwidth={w:.3f}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
