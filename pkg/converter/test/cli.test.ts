import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as path from "node:path";

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { runCli } from "../src/cli.js";
import {
  MINI_CITATION_EXPECT,
  MINI_TU_EXPECT,
  tempDir,
  writeMiniCitation,
  writeMiniTu,
} from "./fixtures.js";

let logs: string[];
let errs: string[];

beforeEach(() => {
  logs = [];
  errs = [];
  vi.spyOn(console, "log").mockImplementation((msg) => logs.push(String(msg)));
  vi.spyOn(console, "error").mockImplementation((msg) => errs.push(String(msg)));
});

afterEach(() => {
  vi.restoreAllMocks();
});

function lastReport(): any {
  return JSON.parse(logs[logs.length - 1]!);
}

describe("cli convert", () => {
  it("converts a citation fixture and passes explicit expectations", () => {
    const src = tempDir();
    writeMiniCitation(src);
    const out = path.join(tempDir(), "bundle");
    const rc = runCli([
      "convert", "--dataset", "cora", "--src", src, "--out", out,
      "--expect", JSON.stringify(MINI_CITATION_EXPECT),
    ]);
    expect(rc).toBe(0);
    const report = lastReport();
    expect(report.pass).toBe(true);
    expect(report.counts.nodes).toBe(6);
    expect(report.dropped.danglingCitations).toBe(1);
    expect(fs.existsSync(path.join(out, "meta.json"))).toBe(true);
  });

  it("converts a TU fixture", () => {
    const src = tempDir();
    writeMiniTu(src);
    const out = path.join(tempDir(), "bundle");
    const rc = runCli([
      "convert", "--dataset", "enzymes", "--src", src, "--out", out,
      "--expect", JSON.stringify(MINI_TU_EXPECT),
    ]);
    expect(rc).toBe(0);
    expect(lastReport().counts.graphs).toBe(3);
    expect(fs.existsSync(path.join(out, "graph_index.csv"))).toBe(true);
  });

  it("returns 1 with a diff when counts miss the (default) published table", () => {
    const src = tempDir();
    writeMiniCitation(src);
    const out = path.join(tempDir(), "bundle");
    const rc = runCli(["convert", "--dataset", "cora", "--src", src, "--out", out]);
    expect(rc).toBe(1);
    const report = lastReport();
    expect(report.pass).toBe(false);
    expect(report.diffs.find((d: any) => d.field === "nodes")).toEqual({
      field: "nodes",
      expected: 2708,
      actual: 6,
    });
    // edge mismatch against the published number stays a note
    expect(report.diffs.find((d: any) => d.field === "edges")).toBeUndefined();
    expect(report.edgeNote).toMatch(/5429/);
  });

  it("skips all checks with --expect none", () => {
    const src = tempDir();
    writeMiniCitation(src);
    const out = path.join(tempDir(), "bundle");
    const rc = runCli([
      "convert", "--dataset", "cora", "--src", src, "--out", out, "--expect", "none",
    ]);
    expect(rc).toBe(0);
  });

  it("returns 2 on missing sources", () => {
    const rc = runCli([
      "convert", "--dataset", "cora", "--src", tempDir(), "--out", tempDir(),
    ]);
    expect(rc).toBe(2);
    expect(errs.join("\n")).toMatch(/missing source file/);
  });

  it("returns 2 on usage problems", () => {
    expect(runCli(["convert", "--dataset", "cora"])).toBe(2);
    expect(runCli(["convert", "--dataset", "mnist", "--src", "a", "--out", "b"])).toBe(2);
    expect(runCli(["bogus"])).toBe(2);
    expect(runCli([])).toBe(2);
    const src = tempDir();
    writeMiniCitation(src);
    expect(
      runCli(["convert", "--dataset", "cora", "--src", src, "--out", tempDir(),
              "--expect", "{broken"]),
    ).toBe(2);
    expect(
      runCli(["convert", "--dataset", "cora", "--src", src, "--out", tempDir(),
              "--expect", '{"bogus": 3}']),
    ).toBe(2);
  });
});

describe("cli verify", () => {
  function convertedBundle(): string {
    const src = tempDir();
    writeMiniCitation(src);
    const out = path.join(tempDir(), "bundle");
    runCli(["convert", "--dataset", "cora", "--src", src, "--out", out,
            "--expect", "none"]);
    logs = [];
    return out;
  }

  it("passes on a fresh bundle with matching expectations", () => {
    const out = convertedBundle();
    const rc = runCli(["verify", "--bundle", out,
                       "--expect", JSON.stringify(MINI_CITATION_EXPECT)]);
    expect(rc).toBe(0);
    expect(lastReport().pass).toBe(true);
  });

  it("fails after tampering", () => {
    const out = convertedBundle();
    const edges = path.join(out, "edges.csv");
    const lines = fs.readFileSync(edges, "utf-8").split("\n").filter(Boolean);
    fs.writeFileSync(edges, lines.slice(1).join("\n") + "\n");
    const rc = runCli(["verify", "--bundle", out,
                       "--expect", JSON.stringify(MINI_CITATION_EXPECT)]);
    expect(rc).toBe(1);
    expect(lastReport().diffs).toEqual([{ field: "edges", expected: 3, actual: 2 }]);
  });

  it("returns 2 on an unreadable bundle", () => {
    expect(runCli(["verify", "--bundle", tempDir()])).toBe(2);
    expect(runCli(["verify"])).toBe(2);
  });
});

describe("primary package interop", () => {
  const probe = spawnSync("python3", ["-c", "import graphcp"], { encoding: "utf-8" });
  const available = probe.status === 0;

  it.skipIf(!available)("convert-check accepts a converted citation bundle", () => {
    const src = tempDir();
    writeMiniCitation(src);
    const out = path.join(tempDir(), "bundle");
    runCli(["convert", "--dataset", "cora", "--src", src, "--out", out,
            "--expect", "none"]);
    const res = spawnSync(
      "python3", ["-m", "graphcp.cli", "convert-check", "--bundle", out],
      { encoding: "utf-8" },
    );
    expect(res.status).toBe(0);
    const info = JSON.parse(res.stdout);
    expect(info.num_nodes).toBe(6);
    expect(info.num_classes).toBe(3);
    expect(info.feature_dim).toBe(4);
    expect(info.num_edges).toBe(3);
  });

  it.skipIf(!available)("convert-check accepts a converted TU bundle", () => {
    const src = tempDir();
    writeMiniTu(src);
    const out = path.join(tempDir(), "bundle");
    runCli(["convert", "--dataset", "enzymes", "--src", src, "--out", out,
            "--expect", "none"]);
    const res = spawnSync(
      "python3", ["-m", "graphcp.cli", "convert-check", "--bundle", out],
      { encoding: "utf-8" },
    );
    expect(res.status).toBe(0);
    const info = JSON.parse(res.stdout);
    expect(info.num_graphs).toBe(3);
    expect(info.task).toBe("graph-classification");
  });
});
