import type {
  ConfigEcho,
  SummaryCluster,
  SummaryDocument,
  SummaryFlow,
} from '../src/types.js';

export function echo(overrides: Partial<ConfigEcho> = {}): ConfigEcho {
  return {
    k: 10,
    l: 20,
    similarity: 'bidirectional',
    use_attribute: false,
    attribute: '',
    use_time: false,
    lambda_aug: 1.0,
    lambda_decay: 1.0,
    seed: 0,
    max_iter: 300,
    rel_tol: 1e-4,
    prune: 'rank',
    restarts: 1,
    ...overrides,
  };
}

export function cluster(id: number, size: number, terms: string[] = []): SummaryCluster {
  return {
    id,
    size,
    label: {
      keywords: terms.map((term, i) => ({ term, score: 1 - i * 0.1 })),
      top_fields: terms.map((term, i) => ({ field: term.toUpperCase(), count: 10 - i })),
    },
    sample_members: [],
  };
}

export function flow(src: number, dst: number, normalized_rate: number): SummaryFlow {
  return { src, dst, raw_sum: normalized_rate * 4, rate: normalized_rate / 2, normalized_rate };
}

/** Hand-sized document for view-model tests. */
export function makeDoc(
  clusters: SummaryCluster[],
  flows: SummaryFlow[],
  sourceCluster = clusters[0]?.id ?? 0,
): SummaryDocument {
  return {
    schema_version: 1,
    config: echo({ k: clusters.length, l: flows.length }),
    source_cluster: sourceCluster,
    clusters,
    flows,
    diagnostics: { objective_trace: [1.0], effective_k: clusters.length, warnings: [] },
  };
}
