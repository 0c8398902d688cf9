import { describe, expect, it } from 'vitest';
import {
  THICKNESS_MAX,
  THICKNESS_MIN,
  buildScene,
  labelLines,
  thicknessScale,
} from '../src/scene.js';
import { cluster, flow, makeDoc } from './fixtures.js';

const doc = makeDoc(
  [
    cluster(0, 12, ['hashing', 'indexing', 'sketches', 'filters']),
    cluster(1, 40, ['semantics', 'types']),
    cluster(2, 7, ['queries']),
  ],
  [flow(0, 1, 4.0), flow(1, 1, 2.5), flow(1, 2, 1.0), flow(0, 2, 0.25)],
);

describe('thicknessScale', () => {
  it('maps the extremes onto the stroke range linearly', () => {
    const scale = thicknessScale([1, 2, 4]);
    expect(scale(1)).toBe(THICKNESS_MIN);
    expect(scale(4)).toBe(THICKNESS_MAX);
    const mid = scale(2.5);
    expect(mid).toBeCloseTo((THICKNESS_MIN + THICKNESS_MAX) / 2, 10);
  });

  it('is strictly increasing in the rate', () => {
    const scale = thicknessScale([0.5, 1.0, 2.0, 3.0]);
    expect(scale(2.0)).toBeGreaterThan(scale(1.0));
    expect(scale(1.0)).toBeGreaterThan(scale(0.5));
  });

  it('lands mid-scale when every rate is equal or there is one flow', () => {
    expect(thicknessScale([2.0])(2.0)).toBe(4.5);
    expect(thicknessScale([3, 3, 3])(3)).toBe(4.5);
    expect(thicknessScale([])(1)).toBe(4.5);
  });
});

describe('labelLines', () => {
  it('leads with the member count', () => {
    expect(labelLines(cluster(0, 42, []), 'keywords')).toEqual(['42']);
  });

  it('shows the top three keywords', () => {
    const lines = labelLines(doc.clusters[0], 'keywords');
    expect(lines).toEqual(['12', 'hashing · indexing · sketches']);
  });

  it('shows the top two fields with counts', () => {
    const lines = labelLines(doc.clusters[0], 'fields');
    expect(lines).toEqual(['12', 'HASHING (10) · INDEXING (9)']);
  });
});

describe('buildScene', () => {
  it('is pure: identical inputs give identical scenes', () => {
    const a = buildScene(doc, 'keywords', false);
    const b = buildScene(doc, 'keywords', false);
    expect(a).toEqual(b);
  });

  it('places one node per cluster and marks the source', () => {
    const scene = buildScene(doc, 'keywords', false);
    expect(scene.nodes.length).toBe(3);
    expect(scene.nodes.filter((n) => n.isSource).map((n) => n.id)).toEqual([0]);
  });

  it('hides self-loops by default and restores them on toggle', () => {
    const hidden = buildScene(doc, 'keywords', false);
    expect(hidden.edges.some((e) => e.selfLoop)).toBe(false);
    expect(hidden.edges.length).toBe(3);

    const shown = buildScene(doc, 'keywords', true);
    expect(shown.edges.length).toBe(4);
    expect(shown.edges.filter((e) => e.selfLoop).map((e) => e.src)).toEqual([1]);
  });

  it('keeps the thickness of visible edges stable across the toggle', () => {
    const hidden = buildScene(doc, 'keywords', false);
    const shown = buildScene(doc, 'keywords', true);
    const key = (e: { src: number; dst: number }) => `${e.src}->${e.dst}`;
    const before = new Map(hidden.edges.map((e) => [key(e), e.thickness]));
    for (const e of shown.edges.filter((x) => !x.selfLoop)) {
      expect(e.thickness).toBe(before.get(key(e)));
    }
  });

  it('orders stroke widths by normalized rate', () => {
    const scene = buildScene(doc, 'keywords', true);
    const byKey = new Map(scene.edges.map((e) => [`${e.src}->${e.dst}`, e]));
    const widths = ['0->2', '1->2', '1->1', '0->1'].map((k) => byKey.get(k)!.thickness);
    for (let i = 1; i < widths.length; i++) {
      expect(widths[i]).toBeGreaterThan(widths[i - 1]);
    }
    expect(widths[0]).toBe(THICKNESS_MIN);
    expect(widths[widths.length - 1]).toBe(THICKNESS_MAX);
  });

  it('switching label mode changes labels and nothing else', () => {
    const kw = buildScene(doc, 'keywords', false);
    const fld = buildScene(doc, 'fields', false);
    expect(fld.edges).toEqual(kw.edges);
    for (let i = 0; i < kw.nodes.length; i++) {
      const { lines: a, ...restA } = kw.nodes[i];
      const { lines: b, ...restB } = fld.nodes[i];
      expect(restA).toEqual(restB);
      expect(a).not.toEqual(b);
    }
  });

  it('survives a one-cluster document', () => {
    const lone = makeDoc([cluster(0, 100, ['alone'])], [flow(0, 0, 1.5)]);
    const scene = buildScene(lone, 'keywords', false);
    expect(scene.nodes.length).toBe(1);
    expect(scene.edges.length).toBe(0);
  });
});
