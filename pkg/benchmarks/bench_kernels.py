"""Compare the compiled tree-building kernel against the pure-numpy fallback.

Builds the same trees through both backends on a synthetic cell-feature
matrix (imbalanced classes, clustered means, like real page data), checks
the outputs are bit-identical, and reports per-tree timings.

Usage:
    python benchmarks/bench_kernels.py [--rows 30000] [--trees 10]
"""

import argparse
import math
import time

import numpy as np

from ccs.kernels import _pytree
from ccs.kernels import bootstrap_indices

try:
    from ccs.kernels import _ctree
except ImportError:
    _ctree = None


def make_dataset(rows: int, n_features: int, n_classes: int, seed: int):
    """Imbalanced multi-class blobs; class 0 dominates ~50:1."""
    rng = np.random.default_rng(seed)
    share = np.full(n_classes, 0.5 / (n_classes - 1))
    share[0] = 0.5 + share[0] * 0  # text-like majority class
    share[1:] /= share[1:].sum() / 0.5
    y = rng.choice(n_classes, size=rows, p=share).astype(np.int32)
    means = rng.normal(0.0, 2.0, size=(n_classes, n_features))
    X = means[y] + rng.normal(0.0, 1.0, size=(rows, n_features))
    return np.ascontiguousarray(X), y


def build_all(backend, X, y, n_classes, n_trees, min_leaf, seed):
    n, n_features = X.shape
    max_features = min(n_features, math.ceil(math.sqrt(n_features)))
    weights = np.ones(n_classes, dtype=np.float64)
    trees = []
    t0 = time.perf_counter()
    for t in range(n_trees):
        idx = bootstrap_indices(n, n, seed + 2 * t)
        trees.append(
            backend.build_tree(X, y, n_classes, idx, max_features, min_leaf, -1,
                               seed + 2 * t + 1, weights)
        )
    return time.perf_counter() - t0, trees


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=30000)
    ap.add_argument("--features", type=int, default=16)
    ap.add_argument("--classes", type=int, default=6)
    ap.add_argument("--trees", type=int, default=10)
    ap.add_argument("--min-leaf", type=int, default=2)
    ap.add_argument("--seed", type=int, default=20)
    args = ap.parse_args()

    X, y = make_dataset(args.rows, args.features, args.classes, args.seed)
    print(f"dataset: {args.rows} rows x {args.features} features, "
          f"{args.classes} classes, {args.trees} trees")

    pure_s, pure_trees = build_all(_pytree, X, y, args.classes, args.trees,
                                   args.min_leaf, args.seed)
    print(f"pure     : {pure_s:8.2f} s total  {pure_s / args.trees * 1000:8.1f} ms/tree")

    if _ctree is None:
        print("compiled : extension not built (pip install -e . rebuilds it)")
        return

    comp_s, comp_trees = build_all(_ctree, X, y, args.classes, args.trees,
                                   args.min_leaf, args.seed)
    print(f"compiled : {comp_s:8.2f} s total  {comp_s / args.trees * 1000:8.1f} ms/tree")
    print(f"speedup  : {pure_s / comp_s:8.2f} x")

    for i, (a, b) in enumerate(zip(pure_trees, comp_trees)):
        for key in a:
            if not np.array_equal(a[key], b[key]):
                raise SystemExit(f"MISMATCH: tree {i} field {key} differs between backends")
    print(f"identity : all {args.trees} trees bit-identical across backends")


if __name__ == "__main__":
    main()
