/** Client-side config validation, mirroring the server's rules exactly
 * so a request is never issued that the API would reject. */

export const K_MIN = 2;
export const K_MAX = 40;

export const SIMILARITIES = [
  'bidirectional',
  'forward',
  'backward',
  'simrank',
  'ratio_association',
  'normalized_cut',
] as const;

export const PRUNE_KINDS = ['rank', 'mst'] as const;

export const AUGMENT_ATTRIBUTES = ['', 'venue', 'fields'] as const;

export interface ConfigDraft {
  k: number;
  l: number;
  similarity: string;
  augment: string | null;
  augmentTime: boolean;
  prune: string;
}

export type FieldErrors = Partial<Record<keyof ConfigDraft, string>>;

/** l tracks 2k until the user pins a value of their own. */
export function defaultL(k: number): number {
  return 2 * k;
}

export function clampL(l: number, k: number): number {
  return Math.min(Math.max(1, l), k * k);
}

export function validateConfig(c: ConfigDraft): FieldErrors {
  const errors: FieldErrors = {};
  if (!Number.isInteger(c.k) || c.k < K_MIN || c.k > K_MAX) {
    errors.k = `k must be an integer in [${K_MIN}, ${K_MAX}]`;
  }
  if (!Number.isInteger(c.l) || c.l < 1 || c.l > c.k * c.k) {
    errors.l = `l must be an integer in [1, k² = ${c.k * c.k}]`;
  }
  if (!(SIMILARITIES as readonly string[]).includes(c.similarity)) {
    errors.similarity = `unknown similarity ${c.similarity}`;
  }
  if (!(PRUNE_KINDS as readonly string[]).includes(c.prune)) {
    errors.prune = `unknown pruning ${c.prune}`;
  }
  if (c.augment !== null && c.augment !== '' && c.augment !== 'venue' && c.augment !== 'fields') {
    errors.augment = `unknown attribute ${c.augment}`;
  }
  return errors;
}

export function isValid(errors: FieldErrors): boolean {
  return Object.keys(errors).length === 0;
}
