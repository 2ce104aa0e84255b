import * as fs from "node:fs";
import * as path from "node:path";

import { canonicalizeEdges } from "./edges.js";
import { SourceError } from "./types.js";
import type { Bundle, DropStats } from "./types.js";

function readLines(file: string): string[] {
  if (!fs.existsSync(file)) {
    throw new SourceError(`missing source file: ${file}`);
  }
  return fs
    .readFileSync(file, "utf-8")
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
}

function readIntColumn(file: string): number[] {
  return readLines(file).map((line, ln) => {
    const v = Number(line);
    if (!Number.isInteger(v)) {
      throw new SourceError(`${path.basename(file)}:${ln + 1}: expected an integer`);
    }
    return v;
  });
}

/** Parse a graph-classification dataset in the TU file layout.
 *
 *  Required in `<dir>`:
 *      <P>_A.txt                "u, v" pairs, 1-based global node ids
 *      <P>_graph_indicator.txt  graph id (1-based) of node i on line i
 *      <P>_graph_labels.txt     one integer label per graph
 *  Optional:
 *      <P>_node_labels.txt      integer per node, one-hot encoded
 *      <P>_node_attributes.txt  comma-separated floats per node
 *
 *  Node features are attributes followed by the one-hot node-label
 *  block; with neither file present every node gets the constant
 *  feature 1.0. Graph labels can be arbitrary integers and are mapped
 *  to 0..C-1 in sorted order. Per-node labels mirror the owning
 *  graph's label.
 */
export function parseTuDataset(
  dir: string,
  prefix: string,
  name: string,
): { bundle: Bundle; dropped: DropStats } {
  const file = (suffix: string) => path.join(dir, `${prefix}_${suffix}`);

  const indicator = readIntColumn(file("graph_indicator.txt"));
  const numNodes = indicator.length;
  if (numNodes === 0) {
    throw new SourceError(`${prefix}_graph_indicator.txt: no nodes`);
  }
  const rawGraphLabels = readIntColumn(file("graph_labels.txt"));
  const numGraphs = rawGraphLabels.length;
  for (let i = 0; i < numNodes; i++) {
    const g = indicator[i]!;
    if (g < 1 || g > numGraphs) {
      throw new SourceError(
        `${prefix}_graph_indicator.txt:${i + 1}: graph id ${g} outside 1..${numGraphs}`,
      );
    }
  }
  const graphIds = indicator.map((g) => g - 1);
  const present = new Set(graphIds);
  if (present.size !== numGraphs) {
    throw new SourceError(
      `${prefix}_graph_indicator.txt: only ${present.size} of ${numGraphs} graphs have nodes`,
    );
  }

  const labelValues = [...new Set(rawGraphLabels)].sort((a, b) => a - b);
  const labelIndex = new Map(labelValues.map((v, i) => [v, i]));
  const graphLabels = rawGraphLabels.map((v) => labelIndex.get(v)!);
  const labels = graphIds.map((g) => graphLabels[g]!);

  const rawEdges: Array<[number, number]> = [];
  const edgeLines = readLines(file("A.txt"));
  for (let ln = 0; ln < edgeLines.length; ln++) {
    const parts = edgeLines[ln]!.split(",").map((s) => Number(s.trim()));
    if (parts.length !== 2 || parts.some((x) => !Number.isInteger(x))) {
      throw new SourceError(`${prefix}_A.txt:${ln + 1}: expected "u, v"`);
    }
    const u = parts[0]! - 1;
    const v = parts[1]! - 1;
    if (u < 0 || u >= numNodes || v < 0 || v >= numNodes) {
      throw new SourceError(`${prefix}_A.txt:${ln + 1}: node id outside 1..${numNodes}`);
    }
    if (graphIds[u] !== graphIds[v]) {
      throw new SourceError(
        `${prefix}_A.txt:${ln + 1}: edge joins graphs ${graphIds[u]! + 1} and ${graphIds[v]! + 1}`,
      );
    }
    rawEdges.push([u, v]);
  }
  const { edges, selfLoops, duplicateEdges } = canonicalizeEdges(rawEdges);

  let attributes: number[][] | null = null;
  const attrFile = file("node_attributes.txt");
  if (fs.existsSync(attrFile)) {
    const lines = readLines(attrFile);
    if (lines.length !== numNodes) {
      throw new SourceError(
        `${prefix}_node_attributes.txt: ${lines.length} rows, expected ${numNodes}`,
      );
    }
    attributes = lines.map((line, ln) => {
      const row = line.split(",").map((s) => Number(s.trim()));
      if (row.some((x) => !Number.isFinite(x))) {
        throw new SourceError(`${prefix}_node_attributes.txt:${ln + 1}: non-numeric value`);
      }
      return row;
    });
    const dim = attributes[0]!.length;
    if (attributes.some((r) => r.length !== dim)) {
      throw new SourceError(`${prefix}_node_attributes.txt: inconsistent column count`);
    }
  }

  let oneHot: number[][] | null = null;
  const nlFile = file("node_labels.txt");
  if (fs.existsSync(nlFile)) {
    const nodeLabels = readIntColumn(nlFile);
    if (nodeLabels.length !== numNodes) {
      throw new SourceError(
        `${prefix}_node_labels.txt: ${nodeLabels.length} rows, expected ${numNodes}`,
      );
    }
    const values = [...new Set(nodeLabels)].sort((a, b) => a - b);
    const pos = new Map(values.map((v, i) => [v, i]));
    oneHot = nodeLabels.map((v) => {
      const row = new Array<number>(values.length).fill(0);
      row[pos.get(v)!] = 1;
      return row;
    });
  }

  let features: number[][];
  if (attributes === null && oneHot === null) {
    features = Array.from({ length: numNodes }, () => [1.0]);
  } else {
    features = Array.from({ length: numNodes }, (_, i) => [
      ...(attributes ? attributes[i]! : []),
      ...(oneHot ? oneHot[i]! : []),
    ]);
  }

  const bundle: Bundle = {
    name,
    task: "graph-classification",
    numNodes,
    numClasses: labelValues.length,
    featureDim: features[0]!.length,
    edges,
    features,
    labels,
    graphIds,
    graphLabels,
  };
  return {
    bundle,
    dropped: { danglingCitations: 0, selfLoops, duplicateEdges },
  };
}
