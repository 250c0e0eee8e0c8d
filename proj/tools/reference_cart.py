#!/usr/bin/env python3
# Copyright 2026 The infopursuit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent CART reference for the acceptance suite.

Trains scikit-learn's entropy decision tree on binarized MNIST pixels with the
same train set and test slice the acceptance binary uses, and prints the test
accuracy. The printed value is frozen in tests/acceptance.cpp.
"""

import argparse
import gzip
import os

import numpy as np
from sklearn.tree import DecisionTreeClassifier


def read_idx(path):
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rb") as f:
        data = f.read()
    magic = int.from_bytes(data[0:4], "big")
    ndim = magic & 0xFF
    dims = [int.from_bytes(data[4 + 4 * i:8 + 4 * i], "big") for i in range(ndim)]
    return np.frombuffer(data, dtype=np.uint8, offset=4 + 4 * ndim).reshape(dims)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("mnist_dir")
    ap.add_argument("--threshold", type=float, default=0.5)
    ap.add_argument("--train", type=int, default=0, help="first N training images, 0 for all")
    ap.add_argument("--test", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cut = int(np.floor(255 * args.threshold + 0.5))
    d = args.mnist_dir
    xtr = read_idx(os.path.join(d, "train-images.idx3-ubyte"))
    ytr = read_idx(os.path.join(d, "train-labels.idx1-ubyte"))
    xte = read_idx(os.path.join(d, "t10k-images.idx3-ubyte"))[: args.test]
    yte = read_idx(os.path.join(d, "t10k-labels.idx1-ubyte"))[: args.test]
    if args.train > 0:
        xtr, ytr = xtr[: args.train], ytr[: args.train]
    xtr = (xtr.reshape(len(xtr), -1) >= cut).astype(np.uint8)
    xte = (xte.reshape(len(xte), -1) >= cut).astype(np.uint8)

    tree = DecisionTreeClassifier(criterion="entropy", random_state=args.seed)
    tree.fit(xtr, ytr)
    acc = float((tree.predict(xte) == yte).mean())
    print(f"train={len(xtr)} test={len(xte)} depth={tree.get_depth()} leaves={tree.get_n_leaves()} accuracy={acc:.4f}")


if __name__ == "__main__":
    main()
