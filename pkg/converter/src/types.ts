export type Task = "node-classification" | "graph-classification";

/** Bundle contents in memory, pre-serialization. Edges are canonical
 *  undirected pairs with u < v, deduplicated, zero-based. */
export interface Bundle {
  name: string;
  task: Task;
  numNodes: number;
  numClasses: number;
  featureDim: number;
  edges: Array<[number, number]>;
  features: number[][];
  /** one label per node; for graph tasks this is the node's graph's label */
  labels: number[];
  graphIds?: number[];
  graphLabels?: number[];
}

/** What the conversion threw away, for the report. */
export interface DropStats {
  danglingCitations: number;
  selfLoops: number;
  duplicateEdges: number;
}

export interface ExpectedCounts {
  nodes?: number;
  edges?: number;
  features?: number;
  classes?: number;
  graphs?: number;
}

/** Verification target. When `edgesAdvisory` is set, an edge-count
 *  mismatch is reported as a note instead of a failure; published edge
 *  counts for the citation datasets depend on preprocessing choices,
 *  so the built-in table marks them advisory. Explicit --expect counts
 *  are always hard. */
export interface UpstreamSpec {
  dataset: string;
  expected: ExpectedCounts;
  edgesAdvisory?: boolean;
}

export interface CountDiff {
  field: string;
  expected: number;
  actual: number;
}

export interface BundleCounts {
  nodes: number;
  edges: number;
  features: number;
  classes: number;
  graphs?: number;
}

export interface Report {
  dataset: string;
  pass: boolean;
  counts: BundleCounts;
  diffs: CountDiff[];
  edgeNote?: string;
  dropped?: DropStats;
}

/** Raised for missing or structurally broken input files (exit code 2). */
export class SourceError extends Error {}
