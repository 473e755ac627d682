#!/usr/bin/env python3
# Copyright 2026 The MolTop Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes heavy-atom and bond counts for every SMILES row using RDKit defaults.

Output columns: row,atoms,bonds,sanitized. Used as the reference for the
SMILES parser corpus test.
"""
import argparse
import csv

from rdkit import Chem, RDLogger


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("out")
    ap.add_argument("--smiles-col", default="smiles")
    args = ap.parse_args()
    RDLogger.DisableLog("rdApp.*")

    with open(args.csv, newline="") as f:
        smiles = [row[args.smiles_col] for row in csv.DictReader(f)]

    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["row", "atoms", "bonds", "sanitized"])
        for i, s in enumerate(smiles):
            mol = Chem.MolFromSmiles(s)
            if mol is None:
                w.writerow([i, 0, 0, 0])
            else:
                w.writerow([i, mol.GetNumAtoms(), mol.GetNumBonds(), 1])


if __name__ == "__main__":
    main()
