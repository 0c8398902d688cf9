"""Brute-force and algebraic verification of the flow objectives.

Everything here re-derives results through an independent route: the
exhaustive search evaluates the squared-flow objective directly from the
dense adjacency (not through FlowMatrix), and the weighted-sum identities
check that the block-density objective and the kernel clustering objective
are both plain weighted sums of adjacency entries. These are the checks
behind the `verify` command.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import SizeGuardError, ValidationError
from .graph import InfluenceGraph
from .similarity import SimilarityMatrix, common_neighbor
from .summarize import ClusterAssignment, SummarizeConfig, flow_matrix, objective, summarize_pipeline

MAX_BRUTE_N = 10
MAX_BRUTE_K = 4
IDENTITY_RTOL = 1e-9


def enumerate_partitions(n: int, max_blocks: int):
    """All set partitions of n items into at most max_blocks blocks.

    Yields label arrays in restricted-growth order: labels[0] = 0 and each
    label is at most one greater than every label before it, which makes the
    enumeration exhaustive and duplicate-free with blocks ordered by their
    smallest element.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if max_blocks < 1:
        raise ValidationError(f"max_blocks must be >= 1, got {max_blocks}")
    labels = np.zeros(n, dtype=np.int64)
    maxes = np.zeros(n, dtype=np.int64)  # maxes[i] = max(labels[:i+1])
    yield labels.copy()
    while True:
        # advance to the next restricted-growth string
        i = n - 1
        while i > 0 and labels[i] >= min(maxes[i - 1] + 1, max_blocks - 1):
            i -= 1
        if i == 0:
            return
        labels[i] += 1
        maxes[i] = max(maxes[i - 1], labels[i])
        labels[i + 1 :] = 0
        maxes[i + 1 :] = maxes[i]
        yield labels.copy()


def partition_count(n: int, max_blocks: int) -> int:
    return sum(1 for _ in enumerate_partitions(n, max_blocks))


def _squared_top_l(a: np.ndarray, labels: np.ndarray, blocks: int, l: int) -> float:
    """Top-l squared flow objective evaluated straight from the adjacency."""
    ind = np.zeros((a.shape[0], blocks))
    ind[np.arange(a.shape[0]), labels] = 1.0
    sizes = ind.sum(axis=0)
    raw = ind.T @ a @ ind
    contrib = (raw / np.sqrt(np.outer(sizes, sizes))) ** 2
    flat = np.sort(contrib.ravel())[::-1]
    return float(flat[: min(l, flat.size)].sum())


def brute_force_best_partition(g: InfluenceGraph, k: int, l: int):
    """Exhaustive maximizer of the squared top-l flow objective.

    Searches every partition of the nodes into at most k nonempty clusters;
    for partitions with fewer than l flows, all flows count. Refuses inputs
    beyond n=10 or k=4, where enumeration stops being tractable. Ties keep
    the first partition in canonical order.
    """
    n = g.node_count
    if n > MAX_BRUTE_N or k > MAX_BRUTE_K:
        raise SizeGuardError(
            f"exhaustive search refused: n={n} (max {MAX_BRUTE_N}), k={k} (max {MAX_BRUTE_K})"
        )
    if l < 1:
        raise ValidationError(f"l must be >= 1, got {l}")
    a = g.adjacency.toarray()
    best_labels = None
    best_val = -1.0
    for labels in enumerate_partitions(n, k):
        blocks = int(labels.max()) + 1
        val = _squared_top_l(a, labels, blocks, l)
        if val > best_val:
            best_val = val
            best_labels = labels
    return ClusterAssignment.from_labels(best_labels), best_val


# -- weighted-sum identities --------------------------------------------------


def igs_weight_identity(g: InfluenceGraph, asg: ClusterAssignment):
    """Full squared objective as a weighted sum of adjacency entries.

    lhs sums block_sum^2 / (|c| |d|) over all cluster pairs; rhs weights
    every edge by the density (rate) of its block and sums. The two are
    algebraically equal; both are returned for the caller to compare.
    """
    fm = flow_matrix(g, asg)
    lhs = float(fm.squared_contribution.sum())
    labels = asg.labels
    coo = g.adjacency.tocoo()
    rhs = float(np.sum(coo.data * fm.rate[labels[coo.row], labels[coo.col]]))
    return lhs, rhs


def km_weight_identity(g: InfluenceGraph, asg: ClusterAssignment):
    """Kernel clustering objective as a weighted sum of adjacency entries.

    lhs is the within-cluster average of the shared-neighbor kernel,
    sum_c sum_{i,j in c} k_ij / |c|. rhs weights each edge (i, j) by the
    average in-density of i's cluster on column j plus the average
    out-density of j's cluster on row i, halved.
    """
    kmat = common_neighbor(g, "bidirectional").csr
    labels = asg.labels
    sizes = asg.cluster_sizes.astype(np.float64)
    k = asg.effective_k
    n = g.node_count

    ind = np.zeros((n, k))
    ind[np.arange(n), labels] = 1.0
    block = ind.T @ kmat.toarray() @ ind
    lhs = float(np.sum(np.diag(block) / sizes))

    a = g.adjacency.toarray()
    col_by_cluster = ind.T @ a  # [c, j] = sum of a_pj over p in cluster c
    row_by_cluster = a @ ind  # [i, d] = sum of a_iq over q in cluster d
    coo = g.adjacency.tocoo()
    w = col_by_cluster[labels[coo.row], coo.col] / (2.0 * sizes[labels[coo.row]])
    w += row_by_cluster[coo.row, labels[coo.col]] / (2.0 * sizes[labels[coo.col]])
    rhs = float(np.sum(coo.data * w))
    return lhs, rhs


def trace_objective(k_matrix: SimilarityMatrix, asg: ClusterAssignment) -> float:
    """Tr(H^T K H) for the size-normalized cluster indicator H."""
    if k_matrix.csr is None:
        raise ValidationError("trace_objective needs a materialized matrix")
    n = k_matrix.order
    if asg.labels.shape[0] != n:
        raise ValidationError(f"{asg.labels.shape[0]} labels for order-{n} matrix")
    h = np.zeros((n, asg.effective_k))
    h[np.arange(n), asg.labels] = 1.0 / np.sqrt(asg.cluster_sizes[asg.labels])
    return float(np.sum((k_matrix.csr @ h) * h))


# -- verification suite -------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _close(lhs: float, rhs: float, bias: float = 0.0) -> bool:
    return abs(lhs - (rhs + bias)) <= IDENTITY_RTOL * max(1.0, abs(lhs))


def _random_case(rng: np.random.Generator):
    n = int(rng.integers(2, MAX_BRUTE_N + 1))
    density = float(rng.uniform(0.1, 0.6))
    a = (rng.random((n, n)) < density) * rng.uniform(0.1, 3.0, (n, n))
    if rng.random() < 0.8:
        np.fill_diagonal(a, 0)
    g = InfluenceGraph(sp.csr_matrix(a), tuple(str(i) for i in range(n)))
    blocks = int(rng.integers(1, min(MAX_BRUTE_K, n) + 1))
    labels = rng.integers(0, blocks, size=n)
    return g, ClusterAssignment.from_labels(labels)


def run_verification(seed: int = 42, cases: int = 200, perturbation: float = 0.0):
    """Deterministic self-check suite; returns a structured report.

    ``perturbation`` biases one side of every identity and exists so the
    harness can demonstrate that a broken identity is actually caught.
    """
    rng = np.random.default_rng(seed)
    checks: list[CheckResult] = []

    expected_counts = {(4, 2): 8, (5, 3): 41, (4, 4): 15, (6, 2): 32}
    for (n, mb), want in expected_counts.items():
        got = partition_count(n, mb)
        checks.append(
            CheckResult(
                name=f"partition-count n={n} blocks<={mb}",
                passed=got == want,
                detail=f"got {got}, expected {want}",
            )
        )

    seen = set()
    dupes = False
    for labels in enumerate_partitions(5, 3):
        key = tuple(labels.tolist())
        if key in seen:
            dupes = True
        seen.add(key)
    checks.append(
        CheckResult(
            name="partition-enumeration duplicate-free (n=5)",
            passed=not dupes,
            detail=f"{len(seen)} distinct strings",
        )
    )

    bad_igs = bad_km = bad_trace = 0
    for _ in range(cases):
        g, asg = _random_case(rng)
        lhs, rhs = igs_weight_identity(g, asg)
        if not _close(lhs, rhs, perturbation):
            bad_igs += 1
        lhs2, rhs2 = km_weight_identity(g, asg)
        if not _close(lhs2, rhs2, perturbation):
            bad_km += 1
        tr = trace_objective(common_neighbor(g, "bidirectional"), asg)
        if not _close(tr, lhs2, perturbation):
            bad_trace += 1
    checks.append(
        CheckResult(
            name=f"block-density weighted-sum identity ({cases} cases)",
            passed=bad_igs == 0,
            detail=f"{bad_igs} violations",
        )
    )
    checks.append(
        CheckResult(
            name=f"kernel-average weighted-sum identity ({cases} cases)",
            passed=bad_km == 0,
            detail=f"{bad_km} violations",
        )
    )
    checks.append(
        CheckResult(
            name=f"trace form matches kernel average ({cases} cases)",
            passed=bad_trace == 0,
            detail=f"{bad_trace} violations",
        )
    )

    floor_failures = 0
    floor_cases = 5
    for _ in range(floor_cases):
        n = int(rng.integers(5, 9))
        a = np.triu((rng.random((n, n)) < 0.4) * 1.0, k=1)
        g = InfluenceGraph(sp.csr_matrix(a), tuple(str(i) for i in range(n)))
        k = 3
        l = 2 * k
        _, best = brute_force_best_partition(g, k, l)
        if best <= 0:
            continue
        asg, fm, _ = summarize_pipeline(
            g, None, SummarizeConfig(k=k, l=l, max_iter=300, restarts=6)
        )
        got = objective(fm, min(l, asg.effective_k**2), "squared")
        if got + perturbation < 0.5 * best:
            floor_failures += 1
    checks.append(
        CheckResult(
            name=f"pipeline reaches half of exhaustive optimum ({floor_cases} graphs)",
            passed=floor_failures == 0,
            detail=f"{floor_failures} below floor",
        )
    )

    return {
        "seed": seed,
        "cases": cases,
        "passed": all(c.passed for c in checks),
        "checks": checks,
    }
