import * as fs from "node:fs";
import * as path from "node:path";

import { SourceError } from "./types.js";
import type { Bundle, BundleCounts } from "./types.js";

/** Write the bundle directory layout consumed by the experiment
 *  package: meta.json plus edges/features/labels CSVs, with
 *  graph_index/graph_labels for graph tasks. Keys in meta.json are
 *  sorted so output is byte-stable. */
export function writeBundle(bundle: Bundle, outDir: string): void {
  fs.mkdirSync(outDir, { recursive: true });

  const meta: Record<string, unknown> = {};
  const fields: Record<string, unknown> = {
    feature_dim: bundle.featureDim,
    name: bundle.name,
    num_classes: bundle.numClasses,
    num_nodes: bundle.numNodes,
    task: bundle.task,
  };
  if (bundle.task === "graph-classification") {
    fields["num_graphs"] = bundle.graphLabels!.length;
  }
  for (const key of Object.keys(fields).sort()) {
    meta[key] = fields[key];
  }
  fs.writeFileSync(path.join(outDir, "meta.json"), JSON.stringify(meta, null, 2) + "\n");

  const edgeText = bundle.edges.map(([u, v]) => `${u},${v}`).join("\n");
  fs.writeFileSync(path.join(outDir, "edges.csv"), edgeText.length ? edgeText + "\n" : "");

  const featText = bundle.features
    .map((row) => row.map((x) => String(x)).join(","))
    .join("\n");
  fs.writeFileSync(path.join(outDir, "features.csv"), featText + "\n");

  fs.writeFileSync(path.join(outDir, "labels.csv"), bundle.labels.join("\n") + "\n");

  if (bundle.task === "graph-classification") {
    fs.writeFileSync(path.join(outDir, "graph_index.csv"), bundle.graphIds!.join("\n") + "\n");
    fs.writeFileSync(
      path.join(outDir, "graph_labels.csv"),
      bundle.graphLabels!.join("\n") + "\n",
    );
  }
}

function readDataLines(file: string): string[] {
  if (!fs.existsSync(file)) {
    throw new SourceError(`unreadable bundle: missing ${path.basename(file)}`);
  }
  return fs
    .readFileSync(file, "utf-8")
    .split("\n")
    .filter((l) => l.trim().length > 0);
}

/** Recount a bundle directory from its data files. Counts come from
 *  the files themselves, not meta.json, so tampering shows up. */
export function recountBundle(dir: string): BundleCounts {
  if (!fs.existsSync(dir) || !fs.statSync(dir).isDirectory()) {
    throw new SourceError(`unreadable bundle: not a directory: ${dir}`);
  }
  const metaFile = path.join(dir, "meta.json");
  if (!fs.existsSync(metaFile)) {
    throw new SourceError("unreadable bundle: missing meta.json");
  }
  let meta: Record<string, unknown>;
  try {
    meta = JSON.parse(fs.readFileSync(metaFile, "utf-8"));
  } catch {
    throw new SourceError("unreadable bundle: meta.json is not valid JSON");
  }

  const featureLines = readDataLines(path.join(dir, "features.csv"));
  const labelLines = readDataLines(path.join(dir, "labels.csv"));
  const nodes = featureLines.length;
  if (labelLines.length !== nodes) {
    throw new SourceError(
      `unreadable bundle: ${labelLines.length} labels for ${nodes} feature rows`,
    );
  }
  const edges = readDataLines(path.join(dir, "edges.csv")).length;
  const features = nodes === 0 ? 0 : featureLines[0]!.split(",").length;

  const counts: BundleCounts = {
    nodes,
    edges,
    features,
    classes: new Set(labelLines.map((l) => l.trim())).size,
  };
  if (meta["task"] === "graph-classification") {
    const glLines = readDataLines(path.join(dir, "graph_labels.csv"));
    counts.graphs = glLines.length;
    counts.classes = new Set(glLines.map((l) => l.trim())).size;
  }
  return counts;
}
