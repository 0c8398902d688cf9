import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { createServer } from 'node:net';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { ApiClient } from '../src/api.js';
import { buildScene } from '../src/scene.js';
import { MARGIN, layerAssignment } from '../src/layout.js';
import type { SummaryDocument } from '../src/types.js';

/** End-to-end pass against a live service: pick a source by title search,
 * summarize it, render the scene, relabel locally, drill into members. */

const PYTHON = process.env.PYTHON ?? 'python3';

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, '127.0.0.1', () => {
      const addr = srv.address();
      if (addr === null || typeof addr === 'string') {
        reject(new Error('no port assigned'));
        return;
      }
      srv.close(() => resolve(addr.port));
    });
    srv.on('error', reject);
  });
}

async function waitForReady(client: ApiClient, deadlineMs: number): Promise<void> {
  const deadline = Date.now() + deadlineMs;
  for (;;) {
    try {
      await client.meta();
      return;
    } catch {
      if (Date.now() > deadline) throw new Error('service never became ready');
      await new Promise((r) => setTimeout(r, 200));
    }
  }
}

let workdir: string;
let server: ChildProcess | undefined;
let client: ApiClient;

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), 'explorer-e2e-'));
  const edges = join(workdir, 'edges.tsv');
  const meta = join(workdir, 'meta.jsonl');

  const gen = spawnSync(
    PYTHON,
    [
      '-c',
      [
        'import sys',
        'from flowsum.synth import layered_graph',
        'from flowsum.graph import write_edge_tsv, write_meta_jsonl',
        'g, _ = layered_graph(layers=4, per_layer=50, p_chain=0.15, p_noise=0.01,',
        '                     seed=0, connect_source=True)',
        'write_edge_tsv(g, sys.argv[1])',
        'write_meta_jsonl(g.meta, sys.argv[2])',
      ].join('\n'),
      edges,
      meta,
    ],
    { encoding: 'utf8' },
  );
  if (gen.status !== 0) {
    throw new Error(`fixture generation failed: ${gen.stderr}`);
  }

  const port = await freePort();
  server = spawn(
    PYTHON,
    ['-m', 'flowsum.cli', 'serve', '--edges', edges, '--meta', meta, '--port', String(port)],
    { stdio: 'ignore' },
  );
  client = new ApiClient(`http://127.0.0.1:${port}`);
  await waitForReady(client, 30_000);
}, 60_000);

afterAll(() => {
  server?.kill('SIGTERM');
  if (workdir) rmSync(workdir, { recursive: true, force: true });
});

describe('explorer against a live service', () => {
  let doc: SummaryDocument;
  let loopMs = 0;

  it('finds a source node by title and summarizes around it', async () => {
    const started = Date.now();
    const found = await client.searchNodes('semantics');
    expect(found.total).toBeGreaterThan(0);
    const hit = found.hits.find((h) => h.id === 'n0') ?? found.hits[0];

    doc = await client.summarize({
      source: hit.id,
      k: 4,
      l: 8,
      similarity: 'bidirectional',
      augment: null,
      augment_time: false,
      prune: 'rank',
    });
    const scene = buildScene(doc, 'keywords', false);
    loopMs = Date.now() - started;

    expect(doc.diagnostics.effective_k).toBe(4);
    expect(scene.nodes.length).toBe(4);
    expect(scene.nodes.every((n) => n.lines.length >= 1)).toBe(true);
  }, 30_000);

  it('roots the layering at the source cluster', () => {
    const layers = layerAssignment(doc);
    expect(layers.get(doc.source_cluster)).toBe(0);
    const scene = buildScene(doc, 'keywords', false);
    const src = scene.nodes.find((n) => n.id === doc.source_cluster)!;
    expect(src.isSource).toBe(true);
    expect(src.x).toBe(MARGIN);
  });

  it('draws thicker strokes for stronger flows', () => {
    const scene = buildScene(doc, 'keywords', true);
    const sorted = [...scene.edges].sort((a, b) => a.rate - b.rate);
    for (let i = 1; i < sorted.length; i++) {
      expect(sorted[i].thickness).toBeGreaterThanOrEqual(sorted[i - 1].thickness);
    }
  });

  it('relabels locally without touching the network', () => {
    const before = client.requests;
    const kw = buildScene(doc, 'keywords', false);
    const fld = buildScene(doc, 'fields', false);
    expect(client.requests).toBe(before);
    expect(fld.nodes.map((n) => n.lines)).not.toEqual(kw.nodes.map((n) => n.lines));
    expect(fld.edges).toEqual(kw.edges);
  });

  it('pages cluster members sorted by in-degree', async () => {
    expect(doc.job).toBeDefined();
    const first = await client.members(doc.job!, doc.source_cluster, 0, 50);
    expect(first.members.length).toBeGreaterThan(0);
    expect(first.members.length).toBeLessThanOrEqual(50);
    const degrees = first.members.map((m) => m.in_degree);
    for (let i = 1; i < degrees.length; i++) {
      expect(degrees[i]).toBeLessThanOrEqual(degrees[i - 1]);
    }
    if (first.has_more) {
      const rest = await client.members(doc.job!, doc.source_cluster, first.members.length, 50);
      expect(first.members.length + rest.members.length).toBeLessThanOrEqual(first.total);
      expect(rest.members[0].in_degree).toBeLessThanOrEqual(degrees[degrees.length - 1]);
    }
  }, 15_000);

  it('completes the search-summarize-render loop inside two seconds', () => {
    expect(loopMs).toBeGreaterThan(0);
    expect(loopMs).toBeLessThan(2000);
  });
});
