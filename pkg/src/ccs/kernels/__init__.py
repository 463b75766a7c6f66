"""Tree-building kernels with a compiled core and a pure-python fallback.

The compiled extension (_ctree) and the numpy fallback (_pytree) are
required to produce bit-identical trees; which one runs is an import-time
decision. Set CCS_FORCE_PURE_KERNELS=1 to skip the extension, e.g. for
benchmarking or debugging.
"""

import os

from ._pytree import GOLDEN, bootstrap_indices, mix64

_FORCE_PURE = os.environ.get("CCS_FORCE_PURE_KERNELS", "") == "1"

if not _FORCE_PURE:
    try:
        from ._ctree import apply_tree, build_tree

        BACKEND = "compiled"
    except ImportError:
        _FORCE_PURE = True

if _FORCE_PURE:
    from ._pytree import apply_tree, build_tree

    BACKEND = "pure"

__all__ = [
    "BACKEND",
    "GOLDEN",
    "apply_tree",
    "bootstrap_indices",
    "build_tree",
    "mix64",
]
