"""Command-line entry points.

Subcommands: ``extract`` (source-rooted subgraph to flat files),
``summarize`` (JSON summary document, optional DOT), ``verify``
(self-check suite), ``serve`` (HTTP API). Option values resolve as
config file < command-line flags < FLOWSUM_* environment variables.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .document import build_summary_document, to_dot, to_json_bytes
from .errors import FlowsumError
from .graph import (
    load_graph,
    maximal_influence_graph,
    reverse_edges,
    write_edge_tsv,
    write_meta_jsonl,
)
from .labeling import field_labels, keyword_labels, load_stopwords, merge_labels
from .oracle import run_verification
from .pruning import mst_prune, rank_filter
from .similarity import AugmentParams
from .summarize import SummarizeConfig, summarize_pipeline

ENV_PREFIX = "FLOWSUM_"

# option name -> (parser, default); None default means "unset"
_OPTION_TYPES = {
    "k": int,
    "l": int,
    "similarity": str,
    "augment": str,
    "augment_time": bool,
    "lambda_aug": float,
    "lambda_decay": float,
    "seed": int,
    "max_iter": int,
    "rel_tol": float,
    "prune": str,
    "restarts": int,
    "port": int,
    "host": str,
    "stopwords": str,
}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ValueError(f"{key}: expected a boolean, got {raw!r}")


def _coerce(key: str, raw: str):
    typ = _OPTION_TYPES[key]
    if typ is bool:
        return _parse_bool(raw, key)
    return typ(raw)


def read_config_file(path) -> dict:
    """Flat key=value file; blank lines and # comments ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {text!r}")
            key, _, raw = text.partition("=")
            key = key.strip().lower().replace("-", "_")
            if key not in _OPTION_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
            values[key] = _coerce(key, raw.strip())
    return values


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    values = {}
    for key in _OPTION_TYPES:
        raw = environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = _coerce(key, raw)
    return values


def resolve_options(ns: argparse.Namespace, environ=None) -> dict:
    """config file < CLI flags < environment variables."""
    merged: dict = {}
    if getattr(ns, "config", None):
        merged.update(read_config_file(ns.config))
    for key in _OPTION_TYPES:
        flag_val = getattr(ns, key, None)
        if flag_val is not None:
            merged[key] = flag_val
    merged.update(env_overrides(environ))
    return merged


def summarize_config_from(opts: dict) -> SummarizeConfig:
    augment = AugmentParams(
        lambda_aug=opts.get("lambda_aug", 2.0),
        lambda_decay=opts.get("lambda_decay", 1.11),
    )
    attribute = opts.get("augment") or ""
    return SummarizeConfig(
        k=opts.get("k", 10),
        l=opts.get("l"),
        similarity=opts.get("similarity", "bidirectional"),
        use_attribute=bool(attribute),
        attribute=attribute or "fields",
        use_time=opts.get("augment_time", False),
        augment=augment,
        seed=opts.get("seed", 42),
        max_iter=opts.get("max_iter", 300),
        rel_tol=opts.get("rel_tol", 1e-4),
        prune=opts.get("prune", "rank"),
        restarts=opts.get("restarts", 1),
    )


def _add_common_options(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value option file")
    p.add_argument("--k", type=int, help="number of clusters (default 10)")
    p.add_argument("--l", type=int, help="number of top flows (default 2k)")
    p.add_argument(
        "--similarity",
        choices=[
            "bidirectional",
            "forward",
            "backward",
            "simrank",
            "ratio_association",
            "normalized_cut",
        ],
        help="topology similarity variant",
    )
    p.add_argument("--augment", metavar="ATTR", help="attribute to boost (venue, fields, ...)")
    p.add_argument(
        "--augment-time", dest="augment_time", action="store_const", const=True,
        help="apply publication-time decay",
    )
    p.add_argument("--lambda-aug", dest="lambda_aug", type=float, help="attribute boost factor")
    p.add_argument("--lambda-decay", dest="lambda_decay", type=float, help="yearly decay base")
    p.add_argument("--seed", type=int, help="solver seed (default 42)")
    p.add_argument("--max-iter", dest="max_iter", type=int, help="solver iteration cap")
    p.add_argument("--rel-tol", dest="rel_tol", type=float, help="solver stop tolerance")
    p.add_argument("--prune", choices=["rank", "mst"], help="flow pruning strategy")
    p.add_argument("--restarts", type=int, help="solver restarts, best kept")
    p.add_argument("--stopwords", help="stopword file overriding the built-in list")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowsum", description="influence graph summarization"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("extract", help="extract the subgraph reachable from a source")
    p_ext.add_argument("--edges", required=True, help="edge TSV file")
    p_ext.add_argument("--meta", help="metadata JSONL file")
    p_ext.add_argument("--source", required=True, help="source node id")
    p_ext.add_argument(
        "--reverse", action="store_true",
        help="flip edge direction first (citation data -> influence data)",
    )
    p_ext.add_argument("--out", required=True, help="output directory")

    p_sum = sub.add_parser("summarize", help="summarize a graph into clusters and flows")
    p_sum.add_argument("--edges", required=True, help="edge TSV file")
    p_sum.add_argument("--meta", help="metadata JSONL file")
    p_sum.add_argument("--source", help="source node id (default: first node)")
    p_sum.add_argument("--out", default="summary.json", help="output JSON path")
    p_sum.add_argument("--dot", help="also write a Graphviz DOT file here")
    p_sum.add_argument(
        "--include-members", dest="include_members", action="store_true",
        help="embed full member lists in the document",
    )
    p_sum.add_argument(
        "--diagnostics", dest="diagnostics_out",
        help="write full diagnostics (with timings) to this JSON file",
    )
    _add_common_options(p_sum)

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    p_ver.add_argument("--seed", type=int, default=42)
    p_ver.add_argument("--cases", type=int, default=200)
    p_ver.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)

    p_srv = sub.add_parser("serve", help="serve the HTTP API")
    p_srv.add_argument("--edges", required=True, help="edge TSV file")
    p_srv.add_argument("--meta", help="metadata JSONL file")
    p_srv.add_argument("--port", type=int, help="listen port (default 8080)")
    p_srv.add_argument("--host", help="bind address (default 127.0.0.1)")
    p_srv.add_argument("--config", help="flat key=value option file")

    return parser


def _cmd_extract(ns) -> int:
    g = load_graph(ns.edges, ns.meta)
    if ns.reverse:
        g = reverse_edges(g)
    sub = maximal_influence_graph(g, ns.source)
    os.makedirs(ns.out, exist_ok=True)
    edge_path = os.path.join(ns.out, "edges.tsv")
    write_edge_tsv(sub, edge_path)
    print(f"extracted {sub.node_count} nodes, {sub.edge_count} links -> {edge_path}")
    if sub.meta is not None:
        meta_path = os.path.join(ns.out, "meta.jsonl")
        write_meta_jsonl(sub.meta, meta_path)
        print(f"metadata for {len(sub.meta)} nodes -> {meta_path}")
    return 0


def _cmd_summarize(ns) -> int:
    opts = resolve_options(ns)
    cfg = summarize_config_from(opts)
    g = load_graph(ns.edges, ns.meta)
    source_id = ns.source if ns.source else g.node_ids[0]
    source_index = g.index_of(source_id)

    asg, fm, diag = summarize_pipeline(g, g.meta, cfg)
    l = min(cfg.resolved_l, asg.effective_k**2)
    if cfg.prune == "mst":
        summary = mst_prune(fm, asg, source_index=source_index)
    else:
        summary = rank_filter(fm, asg, l, source_index=source_index)

    if g.meta is not None:
        stop = load_stopwords(opts["stopwords"]) if opts.get("stopwords") else None
        labels = merge_labels(
            keyword_labels(g.meta, asg, stopwords=stop), field_labels(g.meta, asg)
        )
    else:
        labels = []
    doc = build_summary_document(
        g, summary, labels, cfg, diag,
        source_id=source_id,
        include_members=ns.include_members,
    )
    with open(ns.out, "wb") as fh:
        fh.write(to_json_bytes(doc))
    print(f"{len(doc['clusters'])} clusters, {len(doc['flows'])} flows -> {ns.out}")
    if ns.dot:
        with open(ns.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(doc))
        print(f"dot graph -> {ns.dot}")
    if ns.diagnostics_out:
        with open(ns.diagnostics_out, "w", encoding="utf-8") as fh:
            json.dump(diag, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_verify(ns) -> int:
    report = run_verification(seed=ns.seed, cases=ns.cases, perturbation=ns.perturb)
    for check in report["checks"]:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: {check.detail}")
    total = len(report["checks"])
    if report["passed"]:
        print(f"all {total} checks passed")
        return 0
    failed = sum(1 for c in report["checks"] if not c.passed)
    print(f"{failed} of {total} checks failed", file=sys.stderr)
    return 1


def _cmd_serve(ns) -> int:
    import uvicorn

    from .service import create_app

    opts = resolve_options(ns)
    app = create_app(ns.edges, ns.meta)
    uvicorn.run(
        app,
        host=opts.get("host", "127.0.0.1"),
        port=opts.get("port", 8080),
        log_level="warning",
    )
    return 0


_COMMANDS = {
    "extract": _cmd_extract,
    "summarize": _cmd_summarize,
    "verify": _cmd_verify,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return _COMMANDS[ns.command](ns)
    except (FlowsumError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
