import type { LabelMode, SummaryDocument } from './types.js';
import { clampL, defaultL } from './validation.js';

/** Whole-app state. Transitions are pure: each returns a fresh state, so
 * the view is always re-derivable and tests need no DOM. */
export interface ExplorerState {
  source: string | null;
  sourceTitle: string | null;
  k: number;
  l: number;
  lPinned: boolean;
  similarity: string;
  augment: string | null;
  augmentTime: boolean;
  prune: string;
  doc: SummaryDocument | null;
  labelMode: LabelMode;
  showSelfLoops: boolean;
  selectedCluster: number | null;
  seq: number;
  inFlight: boolean;
  error: string | null;
}

export function initialState(): ExplorerState {
  return {
    source: null,
    sourceTitle: null,
    k: 10,
    l: defaultL(10),
    lPinned: false,
    similarity: 'bidirectional',
    augment: null,
    augmentTime: false,
    prune: 'rank',
    doc: null,
    labelMode: 'keywords',
    showSelfLoops: false,
    selectedCluster: null,
    seq: 0,
    inFlight: false,
    error: null,
  };
}

export function setSource(s: ExplorerState, id: string, title: string): ExplorerState {
  return { ...s, source: id, sourceTitle: title };
}

/** Changing k drags l along to 2k unless the user pinned l; a pinned l is
 * still clamped into [1, k²] so the config never goes invalid. */
export function setK(s: ExplorerState, k: number): ExplorerState {
  const l = s.lPinned ? clampL(s.l, k) : defaultL(k);
  return { ...s, k, l };
}

export function setL(s: ExplorerState, l: number): ExplorerState {
  return { ...s, l, lPinned: true };
}

export function setPinned(s: ExplorerState, pinned: boolean): ExplorerState {
  return pinned ? { ...s, lPinned: true } : { ...s, lPinned: false, l: defaultL(s.k) };
}

export function setOption(
  s: ExplorerState,
  key: 'similarity' | 'prune',
  value: string,
): ExplorerState {
  return { ...s, [key]: value };
}

export function setAugment(s: ExplorerState, attribute: string | null): ExplorerState {
  return { ...s, augment: attribute || null };
}

export function setAugmentTime(s: ExplorerState, on: boolean): ExplorerState {
  return { ...s, augmentTime: on };
}

export function setLabelMode(s: ExplorerState, mode: LabelMode): ExplorerState {
  return { ...s, labelMode: mode };
}

export function toggleSelfLoops(s: ExplorerState): ExplorerState {
  return { ...s, showSelfLoops: !s.showSelfLoops };
}

export function selectCluster(s: ExplorerState, cluster: number | null): ExplorerState {
  return { ...s, selectedCluster: cluster };
}

/** Issue a new request token. Any response carrying an older token is
 * stale and must be dropped (latest-wins). */
export function beginRequest(s: ExplorerState): [ExplorerState, number] {
  const seq = s.seq + 1;
  return [{ ...s, seq, inFlight: true, error: null }, seq];
}

export function applyDocument(
  s: ExplorerState,
  seq: number,
  doc: SummaryDocument,
): ExplorerState {
  if (seq !== s.seq) return s; // superseded by a newer request
  // a fresh summary invalidates any open member panel
  return { ...s, doc, inFlight: false, error: null, selectedCluster: null };
}

export function applyFailure(s: ExplorerState, seq: number, message: string): ExplorerState {
  if (seq !== s.seq) return s;
  // keep the previous document so the last good view stays up
  return { ...s, inFlight: false, error: message };
}
