import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export function tempDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "bundleconv-"));
}

/** 6 papers, 4 binary features, 3 classes. The cites file contains one
 *  dangling reference, one reverse duplicate, one exact duplicate, and
 *  one self loop, leaving 3 clean undirected edges. */
export function writeMiniCitation(dir: string, name = "cora"): void {
  const content = [
    "p10\t1\t0\t0\t1\tgenetic",
    "p20\t0\t1\t0\t0\tneural",
    "p30\t1\t1\t0\t0\tgenetic",
    "p40\t0\t0\t1\t0\ttheory",
    "p50\t0\t0\t0\t1\tneural",
    "p60\t1\t0\t1\t0\ttheory",
  ].join("\n");
  const cites = [
    "p10\tp20",
    "p20\tp10",
    "p30\tp40",
    "p40\tp99",
    "p50\tp50",
    "p60\tp10",
    "p30\tp40",
  ].join("\n");
  fs.writeFileSync(path.join(dir, `${name}.content`), content + "\n");
  fs.writeFileSync(path.join(dir, `${name}.cites`), cites + "\n");
}

export const MINI_CITATION_EXPECT = { nodes: 6, edges: 3, features: 4, classes: 3 };

/** 3 graphs (3+2+2 nodes), graph labels {6,2,6}, node labels in {1,2,3},
 *  2 attribute columns. A.txt carries a reverse duplicate and a self
 *  loop, leaving 4 clean undirected edges. */
export function writeMiniTu(dir: string, prefix = "ENZYMES"): void {
  const put = (suffix: string, lines: string[]) =>
    fs.writeFileSync(path.join(dir, `${prefix}_${suffix}`), lines.join("\n") + "\n");
  put("graph_indicator.txt", ["1", "1", "1", "2", "2", "3", "3"]);
  put("graph_labels.txt", ["6", "2", "6"]);
  put("A.txt", ["1, 2", "2, 1", "2, 3", "4, 5", "6, 7", "7, 7"]);
  put("node_labels.txt", ["3", "1", "1", "2", "2", "1", "3"]);
  put("node_attributes.txt", [
    "0.5, 1.25",
    "-1.0, 0.0",
    "2.5, 0.125",
    "0.0, 3.0",
    "1.5, -0.75",
    "0.25, 0.25",
    "-2.0, 1.0",
  ]);
}

export const MINI_TU_EXPECT = { graphs: 3, classes: 2, nodes: 7, edges: 4, features: 5 };
