import type { Scene, SceneEdge, SceneNode } from './scene.js';
import type { MembersPage } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function edgePath(e: SceneEdge, nodes: Map<number, SceneNode>): string {
  const s = nodes.get(e.src)!;
  if (e.selfLoop) {
    const r = s.r;
    // small loop arc on top of the node
    return `M ${s.x - r * 0.5} ${s.y - r * 0.85} A ${r * 0.7} ${r * 0.7} 0 1 1 ${
      s.x + r * 0.5
    } ${s.y - r * 0.85}`;
  }
  const t = nodes.get(e.dst)!;
  const dx = t.x - s.x;
  const dy = t.y - s.y;
  const len = Math.hypot(dx, dy) || 1;
  // stop at the target's rim so the arrowhead stays visible
  const tx = t.x - (dx / len) * (t.r + 6);
  const ty = t.y - (dy / len) * (t.r + 6);
  const mx = (s.x + tx) / 2 + dy / len * 14;
  const my = (s.y + ty) / 2 - dx / len * 14;
  return `M ${s.x} ${s.y} Q ${mx} ${my} ${tx} ${ty}`;
}

export function renderScene(
  svg: SVGSVGElement,
  scene: Scene,
  onClusterClick: (id: number) => void,
): void {
  svg.textContent = '';
  const defs = el('defs', {});
  const marker = el('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: '9',
    refY: '5',
    markerWidth: '7',
    markerHeight: '7',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(el('path', { d: 'M 0 0 L 10 5 L 0 10 z', fill: 'var(--edge)' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const byId = new Map(scene.nodes.map((n) => [n.id, n]));
  let maxX = 0;
  let maxY = 0;

  for (const e of scene.edges) {
    const path = el('path', {
      d: edgePath(e, byId),
      fill: 'none',
      stroke: 'var(--edge)',
      'stroke-width': e.thickness.toFixed(2),
      'marker-end': 'url(#arrow)',
      class: 'flow',
    });
    const tip = el('title', {});
    tip.textContent = `${e.src} → ${e.dst}  rate ${e.rate.toFixed(3)}`;
    path.appendChild(tip);
    svg.appendChild(path);
  }

  for (const n of scene.nodes) {
    const g = el('g', { class: n.isSource ? 'cluster source' : 'cluster' });
    g.appendChild(el('circle', { cx: String(n.x), cy: String(n.y), r: String(n.r) }));
    const text = el('text', { x: String(n.x), y: String(n.y + n.r + 6), 'text-anchor': 'middle' });
    n.lines.forEach((line, i) => {
      const span = el('tspan', { x: String(n.x), dy: i === 0 ? '0.9em' : '1.2em' });
      span.textContent = line;
      text.appendChild(span);
    });
    g.appendChild(text);
    g.addEventListener('click', () => onClusterClick(n.id));
    svg.appendChild(g);
    maxX = Math.max(maxX, n.x + n.r);
    maxY = Math.max(maxY, n.y + n.r);
  }
  svg.setAttribute('viewBox', `0 0 ${maxX + 80} ${maxY + 90}`);
}

export interface PanelHandlers {
  onPage: (offset: number) => void;
  onClose: () => void;
}

export function renderMembersPanel(
  panel: HTMLElement,
  page: MembersPage,
  handlers: PanelHandlers,
): void {
  panel.hidden = false;
  panel.textContent = '';

  const head = document.createElement('div');
  head.className = 'panel-head';
  const title = document.createElement('strong');
  title.textContent = `Cluster ${page.cluster} · ${page.total} members`;
  const close = document.createElement('button');
  close.textContent = '×';
  close.addEventListener('click', handlers.onClose);
  head.append(title, close);
  panel.appendChild(head);

  const list = document.createElement('ol');
  list.start = page.offset + 1;
  for (const m of page.members) {
    const li = document.createElement('li');
    const name = m.title ?? m.id;
    li.textContent = `${name} · in-degree ${m.in_degree}`;
    if (m.venue || m.year) {
      const sub = document.createElement('small');
      sub.textContent = ` (${[m.venue, m.year].filter(Boolean).join(' ')})`;
      li.appendChild(sub);
    }
    list.appendChild(li);
  }
  panel.appendChild(list);

  const nav = document.createElement('div');
  nav.className = 'panel-nav';
  const prev = document.createElement('button');
  prev.textContent = '← prev';
  prev.disabled = page.offset === 0;
  prev.addEventListener('click', () => handlers.onPage(Math.max(0, page.offset - page.limit)));
  const next = document.createElement('button');
  next.textContent = 'next →';
  next.disabled = !page.has_more;
  next.addEventListener('click', () => handlers.onPage(page.offset + page.limit));
  nav.append(prev, next);
  panel.appendChild(nav);
}

export function hidePanel(panel: HTMLElement): void {
  panel.hidden = true;
  panel.textContent = '';
}

/** Errors go to a banner; the previous diagram stays untouched. */
export function renderError(banner: HTMLElement, message: string | null): void {
  banner.hidden = message === null;
  banner.textContent = message ?? '';
}
