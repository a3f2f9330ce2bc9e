#!/usr/bin/env python3
"""Convert the Planetoid citation datasets (Cora, Citeseer) to this project's format.

Input: a directory with the original files ind.<name>.{x,y,tx,ty,allx,ally,graph,test.index}
(https://github.com/kimiyoung/planetoid/tree/master/data).

Output: edges.tsv, features.csv, labels.csv and splits.json in <out>, using the
standard public split: the first 20 labeled nodes per class for training
(|y| rows), the next 500 nodes for validation, and the 1000 listed test nodes.

    python3 docs/convert_planetoid.py --raw planetoid/data --name cora --out data/cora
"""

import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_pickle(path: Path):
    with path.open("rb") as f:
        return pickle.load(f, encoding="latin1")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--raw", type=Path, required=True, help="directory with the ind.<name>.* files")
    ap.add_argument("--name", required=True, choices=["cora", "citeseer"])
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args()

    part = {k: load_pickle(args.raw / f"ind.{args.name}.{k}") for k in ["x", "y", "tx", "ty", "allx", "ally", "graph"]}
    test_index = [int(line) for line in (args.raw / f"ind.{args.name}.test.index").read_text().split()]
    test_sorted = np.sort(test_index)

    tx, ty = part["tx"], part["ty"]
    if args.name == "citeseer":
        # Some test ids have no features; pad them as isolated, unlabeled rows.
        full = range(test_sorted.min(), test_sorted.max() + 1)
        tx_ext = sp.lil_matrix((len(full), tx.shape[1]))
        tx_ext[test_sorted - test_sorted.min(), :] = tx
        ty_ext = np.zeros((len(full), ty.shape[1]))
        ty_ext[test_sorted - test_sorted.min(), :] = ty
        tx, ty = tx_ext, ty_ext

    features = sp.vstack((part["allx"], tx)).tolil()
    labels = np.vstack((part["ally"], ty))
    features[test_index, :] = features[test_sorted, :]
    labels[test_index, :] = labels[test_sorted, :]
    features = features.toarray()
    n = features.shape[0]

    args.out.mkdir(parents=True, exist_ok=True)
    with (args.out / "features.csv").open("w") as f:
        for row in features:
            f.write(",".join(f"{v:g}" for v in row) + "\n")

    labeled = labels.sum(axis=1) > 0
    with (args.out / "labels.csv").open("w") as f:
        for i in np.flatnonzero(labeled):
            f.write(f"{i},{int(labels[i].argmax())}\n")

    edges = set()
    for src, dsts in part["graph"].items():
        for dst in dsts:
            if src != dst and src < n and dst < n:
                edges.add((min(src, dst), max(src, dst)))
    with (args.out / "edges.tsv").open("w") as f:
        for a, b in sorted(edges):
            f.write(f"{a}\t{b}\n")

    n_train = part["y"].shape[0]
    splits = {
        "train": list(range(n_train)),
        "val": list(range(n_train, n_train + 500)),
        "test": sorted(int(i) for i in test_sorted if labeled[i]),
    }
    (args.out / "splits.json").write_text(json.dumps(splits))
    print(f"{args.name}: {n} nodes, {len(edges)} edges, {features.shape[1]} features, "
          f"{labels.shape[1]} classes, train/val/test = {len(splits['train'])}/{len(splits['val'])}/{len(splits['test'])}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
