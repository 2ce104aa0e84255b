#!/usr/bin/env python3
"""Generate a synthetic dataset bundle directory.

Writes the CSV bundle format consumed by `graphcp run` and
`graphcp convert-check`: meta.json, edges.csv, features.csv, labels.csv
(plus graph_index.csv / graph_labels.csv for graph-classification sets).

Examples:
    python3 scripts/make_bundle.py sbm --out data/sbm3 --communities 3
    python3 scripts/make_bundle.py graphs --out data/toy --num-graphs 40
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from graphcp.graph import generate_graph_dataset, generate_sbm, save_bundle


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="kind", required=True)

    sbm = sub.add_parser("sbm", help="node classification on a block model")
    sbm.add_argument("--out", required=True)
    sbm.add_argument("--seed", type=int, default=0)
    sbm.add_argument("--communities", type=int, default=3)
    sbm.add_argument("--nodes-per-community", type=int, default=100)
    sbm.add_argument("--p-in", type=float, default=0.1)
    sbm.add_argument("--p-out", type=float, default=0.02)
    sbm.add_argument("--feature-noise", type=float, default=1.0)
    sbm.add_argument("--label-noise", type=float, default=0.0)
    sbm.add_argument("--name", default="sbm")

    g = sub.add_parser("graphs", help="graph classification on random graphs")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--num-graphs", type=int, default=60)
    g.add_argument("--nodes-per-graph", type=int, default=12)
    g.add_argument("--num-classes", type=int, default=2)
    g.add_argument("--edge-p", type=float, default=0.3)
    g.add_argument("--feature-noise", type=float, default=0.5)
    g.add_argument("--name", default="graphs")
    return p.parse_args()


def main():
    args = parse_args()
    if args.kind == "sbm":
        bundle = generate_sbm(
            seed=args.seed,
            communities=args.communities,
            nodes_per_community=args.nodes_per_community,
            p_in=args.p_in,
            p_out=args.p_out,
            feature_noise=args.feature_noise,
            label_noise=args.label_noise,
            name=args.name,
        )
    else:
        bundle = generate_graph_dataset(
            seed=args.seed,
            num_graphs=args.num_graphs,
            nodes_per_graph=args.nodes_per_graph,
            num_classes=args.num_classes,
            edge_p=args.edge_p,
            feature_noise=args.feature_noise,
            name=args.name,
        )
    save_bundle(bundle, args.out)
    print(f"wrote {bundle.name!r} ({bundle.num_nodes} nodes, "
          f"{bundle.edges.shape[0]} edges, {bundle.num_classes} classes) "
          f"to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
