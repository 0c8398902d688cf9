import { ApiClient, ApiError } from './api.js';
import {
  applyDocument,
  applyFailure,
  beginRequest,
  initialState,
  selectCluster,
  setAugment,
  setAugmentTime,
  setK,
  setL,
  setLabelMode,
  setOption,
  setPinned,
  setSource,
  toggleSelfLoops,
  type ExplorerState,
} from './state.js';
import { buildScene } from './scene.js';
import { hidePanel, renderError, renderMembersPanel, renderScene } from './render.js';
import { validateConfig, isValid, type ConfigDraft } from './validation.js';
import type { LabelMode, NodeHit } from './types.js';

function apiBase(): string {
  const param = new URLSearchParams(window.location.search).get('api');
  return param ?? window.location.origin;
}

const client = new ApiClient(apiBase());
let state: ExplorerState = initialState();

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

const svg = document.querySelector<SVGSVGElement>('#diagram')!;
const panel = $('members-panel');
const banner = $('error-banner');
const searchInput = $<HTMLInputElement>('search');
const searchResults = $('search-results');
const sourceLabel = $('source-label');
const kInput = $<HTMLInputElement>('opt-k');
const lInput = $<HTMLInputElement>('opt-l');
const lPin = $<HTMLInputElement>('opt-l-pin');
const simSelect = $<HTMLSelectElement>('opt-similarity');
const pruneSelect = $<HTMLSelectElement>('opt-prune');
const augmentSelect = $<HTMLSelectElement>('opt-augment');
const augmentTime = $<HTMLInputElement>('opt-augment-time');
const selfLoops = $<HTMLInputElement>('opt-self-loops');
const submitBtn = $<HTMLButtonElement>('submit');
const statusLine = $('status');

function draft(): ConfigDraft {
  return {
    k: Number(kInput.value),
    l: Number(lInput.value),
    similarity: simSelect.value,
    augment: augmentSelect.value === '' ? null : augmentSelect.value,
    augmentTime: augmentTime.checked,
    prune: pruneSelect.value,
  };
}

function showFieldErrors(errors: Record<string, string>): void {
  for (const field of ['k', 'l', 'similarity', 'augment', 'prune']) {
    const slot = document.getElementById(`err-${field}`);
    if (slot) slot.textContent = errors[field] ?? '';
  }
}

function syncControls(): void {
  kInput.value = String(state.k);
  lInput.value = String(state.l);
  lPin.checked = state.lPinned;
  lInput.disabled = !state.lPinned;
  simSelect.value = state.similarity;
  pruneSelect.value = state.prune;
  augmentSelect.value = state.augment ?? '';
  augmentTime.checked = state.augmentTime;
  selfLoops.checked = state.showSelfLoops;
  sourceLabel.textContent = state.source
    ? `${state.sourceTitle ?? state.source}`
    : 'no source selected';
  submitBtn.disabled = state.source === null || state.inFlight;
  statusLine.textContent = state.inFlight ? 'summarizing…' : '';
}

function redraw(): void {
  renderError(banner, state.error);
  if (state.doc === null) return;
  const scene = buildScene(state.doc, state.labelMode, state.showSelfLoops);
  renderScene(svg, scene, (id) => void openPanel(id, 0));
}

async function openPanel(clusterId: number, offset: number): Promise<void> {
  const job = state.doc?.job;
  if (job === undefined) return;
  state = selectCluster(state, clusterId);
  try {
    const page = await client.members(job, clusterId, offset);
    renderMembersPanel(panel, page, {
      onPage: (next) => void openPanel(clusterId, next),
      onClose: () => {
        state = selectCluster(state, null);
        hidePanel(panel);
      },
    });
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      renderError(banner, 'this summary is stale; resubmit to browse members');
    } else {
      renderError(banner, err instanceof Error ? err.message : String(err));
    }
  }
}

async function submit(): Promise<void> {
  const errors = validateConfig(draft());
  showFieldErrors(errors);
  const source = state.source;
  if (!isValid(errors) || source === null) return;

  const [next, seq] = beginRequest(state);
  state = next;
  syncControls();
  renderError(banner, null);
  try {
    const doc = await client.summarize({
      source,
      k: state.k,
      l: state.l,
      similarity: state.similarity,
      augment: state.augment,
      augment_time: state.augmentTime,
      prune: state.prune,
    });
    state = applyDocument(state, seq, doc);
    hidePanel(panel);
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    state = applyFailure(state, seq, detail);
  }
  syncControls();
  redraw();
}

function renderHits(hits: NodeHit[]): void {
  searchResults.textContent = '';
  for (const hit of hits.slice(0, 12)) {
    const item = document.createElement('button');
    item.className = 'hit';
    item.textContent = `${hit.title} (in ${hit.in_degree})`;
    item.addEventListener('click', () => {
      state = setSource(state, hit.id, hit.title);
      searchResults.textContent = '';
      searchInput.value = hit.title;
      syncControls();
      void submit();
    });
    searchResults.appendChild(item);
  }
}

let searchTimer: ReturnType<typeof setTimeout> | undefined;
searchInput.addEventListener('input', () => {
  clearTimeout(searchTimer);
  const q = searchInput.value.trim();
  if (q.length < 2) {
    searchResults.textContent = '';
    return;
  }
  searchTimer = setTimeout(() => {
    client
      .searchNodes(q)
      .then((res) => renderHits(res.hits))
      .catch((err) => renderError(banner, err instanceof Error ? err.message : String(err)));
  }, 200);
});

kInput.addEventListener('change', () => {
  state = setK(state, Number(kInput.value));
  syncControls();
});
lInput.addEventListener('change', () => {
  state = setL(state, Number(lInput.value));
  syncControls();
});
lPin.addEventListener('change', () => {
  state = setPinned(state, lPin.checked);
  syncControls();
});
simSelect.addEventListener('change', () => {
  state = setOption(state, 'similarity', simSelect.value);
});
pruneSelect.addEventListener('change', () => {
  state = setOption(state, 'prune', pruneSelect.value);
});
augmentSelect.addEventListener('change', () => {
  state = setAugment(state, augmentSelect.value);
});
augmentTime.addEventListener('change', () => {
  state = setAugmentTime(state, augmentTime.checked);
});
selfLoops.addEventListener('change', () => {
  state = toggleSelfLoops(state);
  redraw();
});
for (const radio of document.querySelectorAll<HTMLInputElement>('input[name="label-mode"]')) {
  radio.addEventListener('change', () => {
    if (radio.checked) {
      // label mode is a local presentation choice, no request involved
      state = setLabelMode(state, radio.value as LabelMode);
      redraw();
    }
  });
}
submitBtn.addEventListener('click', () => void submit());

async function boot(): Promise<void> {
  try {
    const meta = await client.meta();
    statusLine.textContent = `${meta.nodes} nodes, ${meta.links} links loaded`;
    if (!meta.has_metadata) {
      searchInput.placeholder = 'search node ids…';
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 503) {
      statusLine.textContent = 'graph is still loading, retrying…';
      setTimeout(() => void boot(), 1000);
      return;
    }
    renderError(banner, err instanceof Error ? err.message : String(err));
  }
  syncControls();
}

void boot();
