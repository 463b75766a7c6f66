"""Pure-Python (numpy) tree kernel, the fallback for ccs.kernels._ctree.

The compiled kernel and this module must produce bit-identical trees for
identical inputs. To that end all randomness comes from a counter-based
splitmix64 stream, split scores are computed with a fixed sequential
class-accumulation order, and every tie is broken by scan order
(boundaries ascending, candidate features in draw order).

Split criterion: maximize sum over the two sides of
(sum_c (w_c * n_c)^2) / (sum_c w_c * n_c), which is equivalent to
minimizing the weighted Gini impurity of the split.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return (z ^ (z >> 31)) & MASK


class _Stream:
    """Counter-based splitmix64; draw i depends only on (seed, i)."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int):
        self.seed = seed & MASK
        self.counter = 0

    def next64(self) -> int:
        self.counter += 1
        return mix64((self.seed + self.counter * GOLDEN) & MASK)

    def below(self, n: int) -> int:
        return self.next64() % n


def bootstrap_indices(n: int, m: int, seed: int) -> np.ndarray:
    """m draws with replacement from range(n), vectorized splitmix64."""
    seed = np.uint64(seed & MASK)
    golden = np.uint64(GOLDEN)
    with np.errstate(over="ignore"):
        z = seed + (np.arange(1, m + 1, dtype=np.uint64)) * golden
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z % np.uint64(n)).astype(np.int64)


def build_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    sample_idx: np.ndarray,
    max_features: int,
    min_leaf: int,
    max_depth: int,
    seed: int,
    class_weight: np.ndarray,
) -> dict:
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int32)
    samples = np.array(sample_idx, dtype=np.int64, copy=True)
    w = np.ascontiguousarray(class_weight, dtype=np.float64)
    n_features = X.shape[1]
    rng = _Stream(seed)

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    label: list[int] = []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        label.append(0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, 0, len(samples), 0)]
    fperm = np.empty(n_features, dtype=np.int64)

    while stack:
        node, start, end, depth = stack.pop()
        seg = samples[start:end]
        counts = np.bincount(y[seg], minlength=n_classes).astype(np.int64)
        weighted = w * counts
        label[node] = int(np.argmax(weighted))

        k = end - start
        pure = int(counts.max()) == k
        if pure or k < 2 * min_leaf or (0 <= max_depth <= depth):
            continue

        # Candidate features: partial Fisher-Yates (consumes exactly
        # max_features draws in both kernel implementations).
        fperm[:] = np.arange(n_features)
        for j in range(max_features):
            t = j + rng.below(n_features - j)
            fperm[j], fperm[t] = fperm[t], fperm[j]

        best_score = -np.inf
        best_feature = -1
        best_threshold = 0.0
        best_nleft = 0

        for j in range(max_features):
            f = int(fperm[j])
            v = X[seg, f]
            order = np.argsort(v, kind="stable")
            sv = v[order]
            if sv[0] == sv[-1]:
                continue
            sy = y[seg][order]

            onehot = np.zeros((k, n_classes), dtype=np.int64)
            onehot[np.arange(k), sy] = 1
            csum = onehot.cumsum(axis=0)

            nb = k - 1
            lw = np.zeros(nb)
            lsq = np.zeros(nb)
            rw = np.zeros(nb)
            rsq = np.zeros(nb)
            for c in range(n_classes):
                tl = w[c] * csum[:-1, c]
                lw += tl
                lsq += tl * tl
                tr = w[c] * (counts[c] - csum[:-1, c])
                rw += tr
                rsq += tr * tr

            sizes = np.arange(1, k)
            valid = (
                (sizes >= min_leaf)
                & ((k - sizes) >= min_leaf)
                & (sv[:-1] < sv[1:])
            )
            if not valid.any():
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                scores = lsq / lw + rsq / rw
            scores[~valid] = -np.inf
            pos = int(np.argmax(scores))
            if scores[pos] > best_score:
                a = float(sv[pos])
                b = float(sv[pos + 1])
                thr = (a + b) / 2.0
                if thr == b:
                    thr = a
                best_score = float(scores[pos])
                best_feature = f
                best_threshold = thr
                best_nleft = pos + 1

        if best_feature < 0:
            continue

        mask = X[seg, best_feature] <= best_threshold
        samples[start:end] = np.concatenate([seg[mask], seg[~mask]])
        n_left = int(mask.sum())

        feature[node] = best_feature
        threshold[node] = best_threshold
        lid = new_node()
        rid = new_node()
        left[node] = lid
        right[node] = rid
        stack.append((rid, start + n_left, end, depth + 1))
        stack.append((lid, start, start + n_left, depth + 1))

    return {
        "feature": np.array(feature, dtype=np.int32),
        "threshold": np.array(threshold, dtype=np.float64),
        "left": np.array(left, dtype=np.int32),
        "right": np.array(right, dtype=np.int32),
        "label": np.array(label, dtype=np.int32),
    }


def apply_tree(
    X: np.ndarray,
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    label: np.ndarray,
) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    idx = np.zeros(n, dtype=np.int64)
    while True:
        f = feature[idx]
        internal = f >= 0
        if not internal.any():
            break
        rows = np.nonzero(internal)[0]
        fi = f[internal]
        go_left = X[rows, fi] <= threshold[idx[rows]]
        idx[rows] = np.where(go_left, left[idx[rows]], right[idx[rows]])
    return label[idx].astype(np.int32)
