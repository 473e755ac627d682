#!/usr/bin/env python3
# Copyright 2026 The MolTop Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes deterministic Bemis-Murcko scaffold split index files.

Reproduces the OGB / pretrain-gnns scaffold splitter (80/10/10, scaffold
groups sorted by (size, first index) descending). Needs RDKit; used only to
prepare the index files shipped under data/.
"""
import argparse
import csv
import os

from rdkit.Chem.Scaffolds import MurckoScaffold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("out_dir")
    ap.add_argument("--smiles-col", default="smiles")
    args = ap.parse_args()

    with open(args.csv, newline="") as f:
        smiles = [row[args.smiles_col] for row in csv.DictReader(f)]

    groups = {}
    for i, s in enumerate(smiles):
        key = MurckoScaffold.MurckoScaffoldSmiles(smiles=s, includeChirality=True)
        groups.setdefault(key, []).append(i)
    sets = sorted(groups.values(), key=lambda g: (len(g), g[0]), reverse=True)

    n = len(smiles)
    train_cut, valid_cut = 0.8 * n, 0.9 * n
    train, valid, test = [], [], []
    for g in sets:
        if len(train) + len(g) > train_cut:
            if len(train) + len(valid) + len(g) > valid_cut:
                test.extend(g)
            else:
                valid.extend(g)
        else:
            train.extend(g)

    os.makedirs(args.out_dir, exist_ok=True)
    for name, idx in (("train", train), ("valid", valid), ("test", test)):
        with open(os.path.join(args.out_dir, name + ".csv"), "w") as f:
            f.writelines(f"{i}\n" for i in sorted(idx))
    print(len(train), len(valid), len(test))


if __name__ == "__main__":
    main()
