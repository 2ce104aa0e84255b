#!/usr/bin/env node
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { writeBundle } from "./bundle.js";
import { parseCitationDataset } from "./citation.js";
import { specFor } from "./expected.js";
import { parseTuDataset } from "./tudataset.js";
import { SourceError } from "./types.js";
import type { Bundle, DropStats, ExpectedCounts } from "./types.js";
import { verifyBundle } from "./verify.js";

const USAGE = `usage:
  convert --dataset {cora|citeseer|enzymes} --src <dir> --out <dir> [--expect <json|none>]
  verify  --bundle <dir> [--dataset <name>] [--expect <json|none>]

exit codes: 0 pass, 1 count mismatch, 2 missing/corrupt files or bad usage`;

function parseExpect(raw: string | undefined): ExpectedCounts | null | undefined {
  if (raw === undefined) return undefined;
  if (raw === "none") return null;
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new UsageError(`--expect is not valid JSON: ${raw}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new UsageError("--expect must be a JSON object of counts");
  }
  const allowed = new Set(["nodes", "edges", "features", "classes", "graphs"]);
  for (const [k, v] of Object.entries(doc)) {
    if (!allowed.has(k) || typeof v !== "number") {
      throw new UsageError(`--expect: bad field ${k}`);
    }
  }
  return doc as ExpectedCounts;
}

class UsageError extends Error {}

function convertCommand(args: string[]): number {
  const { values } = parseArgs({
    args,
    options: {
      dataset: { type: "string" },
      src: { type: "string" },
      out: { type: "string" },
      expect: { type: "string" },
    },
  });
  const dataset = values.dataset;
  const src = values.src;
  const out = values.out;
  if (!dataset || !src || !out) {
    throw new UsageError("convert needs --dataset, --src, and --out");
  }

  let bundle: Bundle;
  let dropped: DropStats;
  if (dataset === "cora" || dataset === "citeseer") {
    ({ bundle, dropped } = parseCitationDataset(src, dataset));
  } else if (dataset === "enzymes") {
    ({ bundle, dropped } = parseTuDataset(src, "ENZYMES", dataset));
  } else {
    throw new UsageError(`unknown dataset ${dataset} (expected cora, citeseer, or enzymes)`);
  }

  writeBundle(bundle, out);
  const spec = specFor(dataset, parseExpect(values.expect));
  const report = verifyBundle(out, spec, dropped);
  console.log(JSON.stringify(report, null, 2));
  return report.pass ? 0 : 1;
}

function verifyCommand(args: string[]): number {
  const { values } = parseArgs({
    args,
    options: {
      bundle: { type: "string" },
      dataset: { type: "string" },
      expect: { type: "string" },
    },
  });
  if (!values.bundle) {
    throw new UsageError("verify needs --bundle");
  }
  const spec = specFor(values.dataset ?? "unspecified", parseExpect(values.expect));
  const report = verifyBundle(values.bundle, spec);
  console.log(JSON.stringify(report, null, 2));
  return report.pass ? 0 : 1;
}

export function runCli(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "convert") return convertCommand(rest);
    if (command === "verify") return verifyCommand(rest);
    console.error(USAGE);
    return 2;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(String(err.message));
      console.error(USAGE);
      return 2;
    }
    if (err instanceof SourceError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err
        && String((err as NodeJS.ErrnoException).code).startsWith("ERR_PARSE_ARGS")) {
      console.error(String(err.message));
      console.error(USAGE);
      return 2;
    }
    throw err;
  }
}

const isMain =
  process.argv[1] !== undefined &&
  fileURLToPath(import.meta.url) === path.resolve(process.argv[1]);
if (isMain) {
  process.exit(runCli(process.argv.slice(2)));
}
