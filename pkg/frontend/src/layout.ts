import type { SummaryDocument } from './types.js';

export const LAYER_SPACING = 170;
export const SLOT_SPACING = 120;
export const MARGIN = 70;
export const MIN_RADIUS = 14;
export const AREA_PER_LOG = 450;

export interface LayoutNode {
  id: number;
  layer: number;
  x: number;
  y: number;
  r: number;
}

/** Node area grows with log(cluster size), so a 10x bigger cluster reads
 * as clearly larger without drowning the diagram. */
export function radiusFor(size: number): number {
  const area = AREA_PER_LOG * Math.log2(size + 1);
  return Math.max(MIN_RADIUS, Math.sqrt(area / Math.PI));
}

/** Hop distance from the source cluster along summary flows, self-loops
 * ignored. Clusters no flow reaches are parked one layer past the rest. */
export function layerAssignment(doc: SummaryDocument): Map<number, number> {
  const out = new Map<number, number[]>();
  for (const f of doc.flows) {
    if (f.src === f.dst) continue;
    const lst = out.get(f.src) ?? [];
    lst.push(f.dst);
    out.set(f.src, lst);
  }
  const layer = new Map<number, number>();
  layer.set(doc.source_cluster, 0);
  const queue = [doc.source_cluster];
  while (queue.length) {
    const u = queue.shift()!;
    for (const v of out.get(u) ?? []) {
      if (!layer.has(v)) {
        layer.set(v, layer.get(u)! + 1);
        queue.push(v);
      }
    }
  }
  let deepest = 0;
  for (const d of layer.values()) deepest = Math.max(deepest, d);
  for (const c of doc.clusters) {
    if (!layer.has(c.id)) layer.set(c.id, deepest + 1);
  }
  return layer;
}

/** Layered left-to-right placement: one barycenter pass orders each layer
 * by the mean slot of its upstream neighbors, ties by cluster id. */
export function layout(doc: SummaryDocument): LayoutNode[] {
  const layerOf = layerAssignment(doc);
  const layers = new Map<number, number[]>();
  for (const c of doc.clusters) {
    const d = layerOf.get(c.id)!;
    const lst = layers.get(d) ?? [];
    lst.push(c.id);
    layers.set(d, lst);
  }
  const depths = [...layers.keys()].sort((a, b) => a - b);

  const slot = new Map<number, number>();
  for (const d of depths) {
    const ids = layers.get(d)!;
    if (d === depths[0]) {
      ids.sort((a, b) => a - b);
    } else {
      const score = new Map<number, number>();
      for (const id of ids) {
        const ups = doc.flows.filter(
          (f) => f.dst === id && f.src !== id && layerOf.get(f.src)! < d && slot.has(f.src),
        );
        score.set(
          id,
          ups.length
            ? ups.reduce((acc, f) => acc + slot.get(f.src)!, 0) / ups.length
            : Number.POSITIVE_INFINITY,
        );
      }
      ids.sort((a, b) => score.get(a)! - score.get(b)! || a - b);
    }
    ids.forEach((id, i) => slot.set(id, i));
  }

  const sizeOf = new Map(doc.clusters.map((c) => [c.id, c.size]));
  const tallest = Math.max(...depths.map((d) => layers.get(d)!.length));
  const nodes: LayoutNode[] = [];
  for (const d of depths) {
    const ids = layers.get(d)!;
    for (const id of ids) {
      const centered = slot.get(id)! - (ids.length - 1) / 2;
      nodes.push({
        id,
        layer: d,
        x: MARGIN + d * LAYER_SPACING,
        y: MARGIN + ((tallest - 1) / 2 + centered) * SLOT_SPACING,
        r: radiusFor(sizeOf.get(id) ?? 1),
      });
    }
  }
  nodes.sort((a, b) => a.id - b.id);
  return nodes;
}
