/** Seeded display jitter. Stored data is never jittered; only pixels are. */

/** mulberry32: tiny deterministic PRNG, uniform in [0, 1). */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Symmetric jitter values in [-amplitude, +amplitude], one per call. */
export function jitterStream(seed: number, amplitude: number): () => number {
  const next = mulberry32(seed);
  return () => (2 * next() - 1) * amplitude;
}
