import { describe, expect, it } from 'vitest';
import {
  clampL,
  defaultL,
  isValid,
  validateConfig,
  type ConfigDraft,
} from '../src/validation.js';

function draft(overrides: Partial<ConfigDraft> = {}): ConfigDraft {
  return {
    k: 10,
    l: 20,
    similarity: 'bidirectional',
    augment: null,
    augmentTime: false,
    prune: 'rank',
    ...overrides,
  };
}

describe('defaultL', () => {
  it('tracks twice k', () => {
    expect(defaultL(2)).toBe(4);
    expect(defaultL(10)).toBe(20);
    expect(defaultL(40)).toBe(80);
  });
});

describe('clampL', () => {
  it('passes values already inside the window', () => {
    expect(clampL(5, 4)).toBe(5);
  });

  it('clamps to k squared above and 1 below', () => {
    expect(clampL(100, 4)).toBe(16);
    expect(clampL(0, 4)).toBe(1);
    expect(clampL(-3, 4)).toBe(1);
  });
});

describe('validateConfig', () => {
  it('accepts a sound draft', () => {
    const errors = validateConfig(draft());
    expect(errors).toEqual({});
    expect(isValid(errors)).toBe(true);
  });

  it('rejects k outside [2, 40] and non-integers', () => {
    expect(validateConfig(draft({ k: 1 })).k).toBeDefined();
    expect(validateConfig(draft({ k: 41 })).k).toBeDefined();
    expect(validateConfig(draft({ k: 3.5 })).k).toBeDefined();
    expect(validateConfig(draft({ k: 2 })).k).toBeUndefined();
    expect(validateConfig(draft({ k: 40, l: 80 })).k).toBeUndefined();
  });

  it('bounds l by k squared', () => {
    expect(validateConfig(draft({ k: 3, l: 9 })).l).toBeUndefined();
    expect(validateConfig(draft({ k: 3, l: 10 })).l).toBeDefined();
    expect(validateConfig(draft({ l: 0 })).l).toBeDefined();
    expect(validateConfig(draft({ l: 2.5 })).l).toBeDefined();
  });

  it('checks similarity and pruning membership', () => {
    expect(validateConfig(draft({ similarity: 'simrank' })).similarity).toBeUndefined();
    expect(validateConfig(draft({ similarity: 'cosine' })).similarity).toBeDefined();
    expect(validateConfig(draft({ prune: 'mst' })).prune).toBeUndefined();
    expect(validateConfig(draft({ prune: 'threshold' })).prune).toBeDefined();
  });

  it('allows only known augmentation attributes', () => {
    for (const ok of [null, '', 'venue', 'fields']) {
      expect(validateConfig(draft({ augment: ok })).augment).toBeUndefined();
    }
    expect(validateConfig(draft({ augment: 'year' })).augment).toBeDefined();
  });

  it('reports every broken field at once', () => {
    const errors = validateConfig(draft({ k: 0, similarity: 'nope', prune: 'nope' }));
    expect(isValid(errors)).toBe(false);
    // k = 0 also empties the l window, so l errors alongside
    expect(Object.keys(errors).sort()).toEqual(['k', 'l', 'prune', 'similarity']);
  });
});
