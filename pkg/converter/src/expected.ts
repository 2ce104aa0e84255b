import type { ExpectedCounts, UpstreamSpec } from "./types.js";

/** Published dataset statistics used as default verification targets.
 *  Edge counts are advisory here: upstream files contain duplicate and
 *  reverse pairs, and published numbers vary by dedup convention. */
export const EXPECTED: Record<string, ExpectedCounts> = {
  cora: { nodes: 2708, edges: 5429, features: 1433, classes: 7 },
  citeseer: { nodes: 3327, edges: 4732, features: 3703, classes: 6 },
  enzymes: { graphs: 600, classes: 6 },
};

export function specFor(dataset: string, override?: ExpectedCounts | null): UpstreamSpec {
  if (override === null) {
    return { dataset, expected: {} };
  }
  if (override !== undefined) {
    return { dataset, expected: override };
  }
  const table = EXPECTED[dataset];
  if (table === undefined) {
    return { dataset, expected: {} };
  }
  return { dataset, expected: table, edgesAdvisory: true };
}
