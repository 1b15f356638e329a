#!/usr/bin/env python3
"""Convert an ODDS-style .mat file (arrays X and y) to a labeled CSV.

Usage: mat_to_csv.py INPUT.mat OUTPUT.csv

Features are written as f0..f{F-1} with 17 significant digits so the
conversion is lossless; the last column is `label` (1 = anomaly).
"""

import sys

import numpy as np
import scipy.io

try:
    import h5py
except ImportError:  # only needed for MATLAB v7.3 files
    h5py = None


def load(path):
    try:
        mat = scipy.io.loadmat(path)
        return np.asarray(mat["X"], dtype=float), np.asarray(mat["y"]).ravel()
    except NotImplementedError:
        if h5py is None:
            raise
        with h5py.File(path, "r") as f:
            return np.asarray(f["X"], dtype=float).T, np.asarray(f["y"]).ravel()


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    x, y = load(sys.argv[1])
    if x.shape[0] != y.shape[0]:
        sys.exit(f"X has {x.shape[0]} rows, y has {y.shape[0]}")
    header = ",".join(f"f{j}" for j in range(x.shape[1])) + ",label"
    with open(sys.argv[2], "w") as out:
        out.write(header + "\n")
        for row, label in zip(x, y):
            out.write(",".join(f"{v:.17g}" for v in row) + f",{int(label)}\n")


if __name__ == "__main__":
    main()
