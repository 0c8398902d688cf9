import { layout } from './layout.js';
import type { LabelMode, SummaryCluster, SummaryDocument } from './types.js';

export const THICKNESS_MIN = 1;
export const THICKNESS_MAX = 8;

export interface SceneNode {
  id: number;
  x: number;
  y: number;
  r: number;
  size: number;
  lines: string[]; // text label: size on top, terms underneath
  isSource: boolean;
}

export interface SceneEdge {
  src: number;
  dst: number;
  rate: number;
  thickness: number;
  selfLoop: boolean;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
}

/** Linear map of normalized rates onto stroke widths; a degenerate range
 * (single flow, equal rates) lands mid-scale. */
export function thicknessScale(rates: number[]): (rate: number) => number {
  if (!rates.length) return () => (THICKNESS_MIN + THICKNESS_MAX) / 2;
  const lo = Math.min(...rates);
  const hi = Math.max(...rates);
  if (hi <= lo) return () => (THICKNESS_MIN + THICKNESS_MAX) / 2;
  return (rate) =>
    THICKNESS_MIN + ((rate - lo) / (hi - lo)) * (THICKNESS_MAX - THICKNESS_MIN);
}

export function labelLines(cluster: SummaryCluster, mode: LabelMode): string[] {
  const lines = [String(cluster.size)];
  if (mode === 'keywords') {
    const terms = cluster.label.keywords.slice(0, 3).map((k) => k.term);
    if (terms.length) lines.push(terms.join(' · '));
  } else {
    const fields = cluster.label.top_fields.slice(0, 2).map((f) => `${f.field} (${f.count})`);
    if (fields.length) lines.push(fields.join(' · '));
  }
  return lines;
}

/** Pure view model: same (document, label mode, self-loop toggle) in, same
 * scene out. The thickness scale spans all flows in the document, hidden
 * self-loops included, so toggling them never rescales the rest. */
export function buildScene(
  doc: SummaryDocument,
  labelMode: LabelMode,
  showSelfLoops: boolean,
): Scene {
  const byId = new Map(doc.clusters.map((c) => [c.id, c]));
  const nodes: SceneNode[] = layout(doc).map((n) => {
    const cluster = byId.get(n.id)!;
    return {
      id: n.id,
      x: n.x,
      y: n.y,
      r: n.r,
      size: cluster.size,
      lines: labelLines(cluster, labelMode),
      isSource: n.id === doc.source_cluster,
    };
  });
  const width = thicknessScale(doc.flows.map((f) => f.normalized_rate));
  const edges: SceneEdge[] = doc.flows
    .filter((f) => showSelfLoops || f.src !== f.dst)
    .map((f) => ({
      src: f.src,
      dst: f.dst,
      rate: f.normalized_rate,
      thickness: width(f.normalized_rate),
      selfLoop: f.src === f.dst,
    }));
  return { nodes, edges };
}
