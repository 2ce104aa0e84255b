import type { DropStats } from "./types.js";

/** Reduce raw directed/duplicated pairs to canonical undirected edges:
 *  u < v, each edge once, self loops dropped. Counts what was removed. */
export function canonicalizeEdges(
  raw: Array<[number, number]>,
): { edges: Array<[number, number]>; selfLoops: number; duplicateEdges: number } {
  const seen = new Set<string>();
  const edges: Array<[number, number]> = [];
  let selfLoops = 0;
  let duplicateEdges = 0;
  for (const [a, b] of raw) {
    if (a === b) {
      selfLoops += 1;
      continue;
    }
    const u = Math.min(a, b);
    const v = Math.max(a, b);
    const key = `${u},${v}`;
    if (seen.has(key)) {
      duplicateEdges += 1;
      continue;
    }
    seen.add(key);
    edges.push([u, v]);
  }
  edges.sort((x, y) => (x[0] - y[0]) || (x[1] - y[1]));
  return { edges, selfLoops, duplicateEdges };
}

export function emptyDropStats(): DropStats {
  return { danglingCitations: 0, selfLoops: 0, duplicateEdges: 0 };
}
