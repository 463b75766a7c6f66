"""Parity and invariant tests for the tree-building kernels.

The compiled and pure backends must emit bit-identical node arrays for
the same inputs; everything downstream (forest training, persisted
models) relies on that.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from ccs.kernels import _pytree

try:
    from ccs.kernels import _ctree
except ImportError:
    _ctree = None

BACKENDS = [_pytree] if _ctree is None else [_pytree, _ctree]

TREE_KEYS = ("feature", "threshold", "left", "right", "label")


def _random_problem(rng, trial):
    n = int(rng.integers(5, 300))
    n_features = int(rng.integers(1, 10))
    n_classes = int(rng.integers(2, 6))
    X = rng.normal(size=(n, n_features))
    if trial % 3 == 0:
        X = np.round(X, 1)  # heavy value ties
    if trial % 5 == 0:
        X[:, 0] = 1.0  # constant column
    y = rng.integers(0, n_classes, size=n).astype(np.int32)
    if trial % 2 == 0:
        w = np.ones(n_classes)
    else:
        w = rng.uniform(0.5, 3.0, size=n_classes)
    params = dict(
        max_features=int(rng.integers(1, n_features + 1)),
        min_leaf=int(rng.integers(1, 4)),
        max_depth=-1 if trial % 4 else int(rng.integers(1, 6)),
        seed=int(rng.integers(0, 2**63)),
    )
    return X, y, n_classes, w, params


def _build(mod, X, y, n_classes, w, params):
    idx = _pytree.bootstrap_indices(len(X), len(X), params["seed"])
    return mod.build_tree(
        X,
        y,
        n_classes,
        idx.copy(),
        params["max_features"],
        params["min_leaf"],
        params["max_depth"],
        params["seed"],
        w,
    )


def test_splitmix64_reference_sequence():
    # Known first outputs of the splitmix64 generator for seed 0.
    s = _pytree._Stream(0)
    assert s.next64() == 0xE220A8397B1DCDAF
    assert s.next64() == 0x6E789E6AA1B965F4
    assert s.next64() == 0x06C45D188009454F


def test_bootstrap_indices_match_scalar_stream():
    n, m, seed = 137, 200, 987654321
    got = _pytree.bootstrap_indices(n, m, seed)
    s = _pytree._Stream(seed)
    want = [s.below(n) for _ in range(m)]
    assert got.tolist() == want
    assert got.min() >= 0 and got.max() < n


@pytest.mark.skipif(_ctree is None, reason="compiled kernel not built")
def test_backends_build_identical_trees():
    rng = np.random.default_rng(20240811)
    for trial in range(12):
        X, y, n_classes, w, params = _random_problem(rng, trial)
        ta = _build(_pytree, X, y, n_classes, w, params)
        tb = _build(_ctree, X, y, n_classes, w, params)
        for key in TREE_KEYS:
            assert np.array_equal(ta[key], tb[key]), (trial, key)


@pytest.mark.skipif(_ctree is None, reason="compiled kernel not built")
def test_backends_apply_identically():
    rng = np.random.default_rng(42)
    X, y, n_classes, w, params = _random_problem(rng, 1)
    tree = _build(_pytree, X, y, n_classes, w, params)
    Xq = rng.normal(size=(64, X.shape[1]))
    pa = _pytree.apply_tree(Xq, *(tree[k] for k in TREE_KEYS))
    pb = _ctree.apply_tree(Xq, *(tree[k] for k in TREE_KEYS))
    assert np.array_equal(pa, pb)


def test_build_is_deterministic_per_seed():
    rng = np.random.default_rng(3)
    X, y, n_classes, w, params = _random_problem(rng, 2)
    t1 = _build(_pytree, X, y, n_classes, w, params)
    t2 = _build(_pytree, X, y, n_classes, w, params)
    for key in TREE_KEYS:
        assert np.array_equal(t1[key], t2[key])
    params2 = dict(params, seed=params["seed"] ^ 1)
    t3 = _build(_pytree, X, y, n_classes, w, params2)
    assert any(not np.array_equal(t1[k], t3[k]) for k in TREE_KEYS)


def _leaf_of(tree, x):
    node = 0
    while tree["feature"][node] >= 0:
        if x[tree["feature"][node]] <= tree["threshold"][node]:
            node = tree["left"][node]
        else:
            node = tree["right"][node]
    return node


def _node_depths(tree):
    depth = np.zeros(len(tree["feature"]), dtype=int)
    for i in range(len(tree["feature"])):
        if tree["feature"][i] >= 0:
            depth[tree["left"][i]] = depth[i] + 1
            depth[tree["right"][i]] = depth[i] + 1
    return depth


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_leaf_invariants(mod):
    rng = np.random.default_rng(11)
    n, n_classes, min_leaf = 180, 4, 3
    X = np.round(rng.normal(size=(n, 5)), 1)
    y = rng.integers(0, n_classes, size=n).astype(np.int32)
    idx = _pytree.bootstrap_indices(n, n, 55)
    tree = mod.build_tree(X, y, n_classes, idx.copy(), 3, min_leaf, -1, 55, np.ones(n_classes))

    routed = {}
    for i in idx:
        routed.setdefault(_leaf_of(tree, X[i]), []).append(y[i])
    for node, labels in routed.items():
        # every non-root leaf keeps at least min_leaf samples
        if node != 0:
            assert len(labels) >= min_leaf
        counts = np.bincount(labels, minlength=n_classes)
        assert tree["label"][node] == int(np.argmax(counts))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_max_depth_is_respected(mod):
    rng = np.random.default_rng(13)
    X = rng.normal(size=(256, 4))
    y = rng.integers(0, 3, size=256).astype(np.int32)
    idx = np.arange(256, dtype=np.int64)
    for max_depth in (1, 2, 4):
        tree = mod.build_tree(X, y, 3, idx.copy(), 2, 1, max_depth, 9, np.ones(3))
        depths = _node_depths(tree)
        internal = tree["feature"] >= 0
        assert depths[internal].max(initial=-1) < max_depth
        assert depths.max() <= max_depth


def test_pure_backend_env_override():
    code = (
        "import ccs.kernels as k; print(k.BACKEND)"
    )
    env = dict(os.environ, CCS_FORCE_PURE_KERNELS="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "pure"
