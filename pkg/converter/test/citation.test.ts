import * as fs from "node:fs";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

import { parseCitationDataset } from "../src/citation.js";
import { SourceError } from "../src/types.js";
import { tempDir, writeMiniCitation } from "./fixtures.js";

describe("citation parser", () => {
  it("indexes nodes in first-appearance order", () => {
    const dir = tempDir();
    writeMiniCitation(dir);
    const { bundle } = parseCitationDataset(dir, "cora");
    expect(bundle.numNodes).toBe(6);
    expect(bundle.featureDim).toBe(4);
    expect(bundle.features[0]).toEqual([1, 0, 0, 1]);
    expect(bundle.features[5]).toEqual([1, 0, 1, 0]);
  });

  it("maps class names to indices in sorted order", () => {
    const dir = tempDir();
    writeMiniCitation(dir);
    const { bundle } = parseCitationDataset(dir, "cora");
    // genetic < neural < theory
    expect(bundle.labels).toEqual([0, 1, 0, 2, 1, 2]);
    expect(bundle.numClasses).toBe(3);
  });

  it("drops dangling citations and counts them", () => {
    const dir = tempDir();
    writeMiniCitation(dir);
    const { dropped } = parseCitationDataset(dir, "cora");
    expect(dropped.danglingCitations).toBe(1);
    expect(dropped.selfLoops).toBe(1);
    expect(dropped.duplicateEdges).toBe(2); // reverse pair + exact repeat
  });

  it("symmetrizes to canonical u<v edges", () => {
    const dir = tempDir();
    writeMiniCitation(dir);
    const { bundle } = parseCitationDataset(dir, "cora");
    expect(bundle.edges).toEqual([
      [0, 1],
      [0, 5],
      [2, 3],
    ]);
  });

  it("rejects inconsistent feature counts", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "cora.content"), "a\t1\t0\tx\nb\t1\ty\n");
    fs.writeFileSync(path.join(dir, "cora.cites"), "");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(SourceError);
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/2: 1 features, expected 2/);
  });

  it("rejects non-numeric features", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "cora.content"), "a\toops\tx\n");
    fs.writeFileSync(path.join(dir, "cora.cites"), "");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/non-numeric/);
  });

  it("rejects duplicate paper ids", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "cora.content"), "a\t1\tx\na\t0\ty\n");
    fs.writeFileSync(path.join(dir, "cora.cites"), "");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/duplicate paper id/);
  });

  it("rejects malformed cite lines", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "cora.content"), "a\t1\tx\nb\t0\ty\n");
    fs.writeFileSync(path.join(dir, "cora.cites"), "a b c\n");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/expected two ids/);
  });

  it("errors on missing files", () => {
    const dir = tempDir();
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/missing source file/);
    fs.writeFileSync(path.join(dir, "cora.content"), "a\t1\tx\n");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/cora\.cites/);
  });

  it("errors on an empty content file", () => {
    const dir = tempDir();
    fs.writeFileSync(path.join(dir, "cora.content"), "\n");
    fs.writeFileSync(path.join(dir, "cora.cites"), "");
    expect(() => parseCitationDataset(dir, "cora")).toThrow(/no records/);
  });
});
