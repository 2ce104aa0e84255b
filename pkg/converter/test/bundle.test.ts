import * as fs from "node:fs";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { recountBundle, writeBundle } from "../src/bundle.js";
import { canonicalizeEdges } from "../src/edges.js";
import { SourceError } from "../src/types.js";
import type { Bundle } from "../src/types.js";
import { tempDir } from "./fixtures.js";

const NODE_BUNDLE: Bundle = {
  name: "toy",
  task: "node-classification",
  numNodes: 3,
  numClasses: 2,
  featureDim: 2,
  edges: [
    [0, 1],
    [1, 2],
  ],
  features: [
    [1, 0],
    [0.5, -1.25],
    [0, 1],
  ],
  labels: [0, 1, 1],
};

describe("bundle writer", () => {
  it("writes the exact directory layout", () => {
    const out = tempDir();
    writeBundle(NODE_BUNDLE, out);
    const meta = JSON.parse(fs.readFileSync(path.join(out, "meta.json"), "utf-8"));
    expect(meta).toEqual({
      feature_dim: 2,
      name: "toy",
      num_classes: 2,
      num_nodes: 3,
      task: "node-classification",
    });
    expect(fs.readFileSync(path.join(out, "edges.csv"), "utf-8")).toBe("0,1\n1,2\n");
    expect(fs.readFileSync(path.join(out, "features.csv"), "utf-8")).toBe(
      "1,0\n0.5,-1.25\n0,1\n",
    );
    expect(fs.readFileSync(path.join(out, "labels.csv"), "utf-8")).toBe("0\n1\n1\n");
  });

  it("sorts meta.json keys", () => {
    const out = tempDir();
    writeBundle(NODE_BUNDLE, out);
    const text = fs.readFileSync(path.join(out, "meta.json"), "utf-8");
    const keys = [...text.matchAll(/"(\w+)":/g)].map((m) => m[1]);
    expect(keys).toEqual([...keys].sort());
    expect(text.endsWith("\n")).toBe(true);
  });

  it("emits graph files for graph tasks", () => {
    const out = tempDir();
    const g: Bundle = {
      ...NODE_BUNDLE,
      task: "graph-classification",
      graphIds: [0, 0, 1],
      graphLabels: [1, 0],
    };
    writeBundle(g, out);
    const meta = JSON.parse(fs.readFileSync(path.join(out, "meta.json"), "utf-8"));
    expect(meta.num_graphs).toBe(2);
    expect(fs.readFileSync(path.join(out, "graph_index.csv"), "utf-8")).toBe("0\n0\n1\n");
    expect(fs.readFileSync(path.join(out, "graph_labels.csv"), "utf-8")).toBe("1\n0\n");
  });

  it("writes an empty edges file for edgeless bundles", () => {
    const out = tempDir();
    writeBundle({ ...NODE_BUNDLE, edges: [] }, out);
    expect(fs.readFileSync(path.join(out, "edges.csv"), "utf-8")).toBe("");
  });
});

describe("recount", () => {
  it("round-trips the writer's output", () => {
    const out = tempDir();
    writeBundle(NODE_BUNDLE, out);
    expect(recountBundle(out)).toEqual({ nodes: 3, edges: 2, features: 2, classes: 2 });
  });

  it("counts graphs and graph classes for graph tasks", () => {
    const out = tempDir();
    writeBundle(
      { ...NODE_BUNDLE, task: "graph-classification", graphIds: [0, 0, 1], graphLabels: [1, 0] },
      out,
    );
    expect(recountBundle(out)).toEqual({
      nodes: 3,
      edges: 2,
      features: 2,
      classes: 2,
      graphs: 2,
    });
  });

  it("errors on a missing directory", () => {
    expect(() => recountBundle("/no/such/dir")).toThrow(SourceError);
  });

  it("errors on missing files", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "meta.json"), "{}");
    expect(() => recountBundle(dir)).toThrow(/missing features\.csv/);
  });

  it("errors on label/feature row mismatch", () => {
    const out = tempDir();
    writeBundle(NODE_BUNDLE, out);
    fs.writeFileSync(path.join(out, "labels.csv"), "0\n1\n");
    expect(() => recountBundle(out)).toThrow(/2 labels for 3 feature rows/);
  });

  it("errors on corrupt meta.json", () => {
    const out = tempDir();
    writeBundle(NODE_BUNDLE, out);
    fs.writeFileSync(path.join(out, "meta.json"), "{broken");
    expect(() => recountBundle(out)).toThrow(/not valid JSON/);
  });
});

describe("edge canonicalization", () => {
  it("orders, dedupes, and drops loops", () => {
    const { edges, selfLoops, duplicateEdges } = canonicalizeEdges([
      [3, 1],
      [1, 3],
      [2, 2],
      [0, 1],
      [1, 0],
      [1, 2],
    ]);
    expect(edges).toEqual([
      [0, 1],
      [1, 2],
      [1, 3],
    ]);
    expect(selfLoops).toBe(1);
    expect(duplicateEdges).toBe(2);
  });

  it("handles an empty list", () => {
    expect(canonicalizeEdges([])).toEqual({ edges: [], selfLoops: 0, duplicateEdges: 0 });
  });
});
