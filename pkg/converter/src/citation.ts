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

/** Parse a citation dataset in the .content/.cites layout.
 *
 *  `<dir>/<name>.content` holds one paper per line:
 *      paper_id  f_1 ... f_K  class_name     (whitespace separated)
 *  `<dir>/<name>.cites` holds one citation per line:
 *      cited_id  citing_id
 *
 *  Paper ids are opaque strings and become node indices in order of
 *  first appearance. Class names map to indices in sorted order so the
 *  labeling is stable regardless of file order. Citations to unknown
 *  ids are dropped and counted; the edge list is symmetrized and
 *  deduplicated.
 */
export function parseCitationDataset(
  dir: string,
  name: string,
): { bundle: Bundle; dropped: DropStats } {
  const contentLines = readLines(path.join(dir, `${name}.content`));
  if (contentLines.length === 0) {
    throw new SourceError(`${name}.content: no records`);
  }

  const ids: string[] = [];
  const indexOf = new Map<string, number>();
  const rawFeatures: number[][] = [];
  const classNames: string[] = [];

  let featureDim = -1;
  for (let ln = 0; ln < contentLines.length; ln++) {
    const parts = contentLines[ln]!.split(/\s+/);
    if (parts.length < 3) {
      throw new SourceError(`${name}.content:${ln + 1}: expected id, features, class`);
    }
    const id = parts[0]!;
    const label = parts[parts.length - 1]!;
    const feats = parts.slice(1, -1).map(Number);
    if (featureDim === -1) {
      featureDim = feats.length;
    } else if (feats.length !== featureDim) {
      throw new SourceError(
        `${name}.content:${ln + 1}: ${feats.length} features, expected ${featureDim}`,
      );
    }
    if (feats.some((x) => !Number.isFinite(x))) {
      throw new SourceError(`${name}.content:${ln + 1}: non-numeric feature`);
    }
    if (indexOf.has(id)) {
      throw new SourceError(`${name}.content:${ln + 1}: duplicate paper id ${id}`);
    }
    indexOf.set(id, ids.length);
    ids.push(id);
    rawFeatures.push(feats);
    classNames.push(label);
  }

  const classes = [...new Set(classNames)].sort();
  const classIndex = new Map(classes.map((c, i) => [c, i]));
  const labels = classNames.map((c) => classIndex.get(c)!);

  const citeLines = readLines(path.join(dir, `${name}.cites`));
  const rawEdges: Array<[number, number]> = [];
  let dangling = 0;
  for (let ln = 0; ln < citeLines.length; ln++) {
    const parts = citeLines[ln]!.split(/\s+/);
    if (parts.length !== 2) {
      throw new SourceError(`${name}.cites:${ln + 1}: expected two ids`);
    }
    const a = indexOf.get(parts[0]!);
    const b = indexOf.get(parts[1]!);
    if (a === undefined || b === undefined) {
      dangling += 1;
      continue;
    }
    rawEdges.push([a, b]);
  }
  const { edges, selfLoops, duplicateEdges } = canonicalizeEdges(rawEdges);

  const bundle: Bundle = {
    name,
    task: "node-classification",
    numNodes: ids.length,
    numClasses: classes.length,
    featureDim,
    edges,
    features: rawFeatures,
    labels,
  };
  return {
    bundle,
    dropped: { danglingCitations: dangling, selfLoops, duplicateEdges },
  };
}
