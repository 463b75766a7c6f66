"""Label-level evaluation: confusion matrix, recall, precision, F1.

recall(l) = tp / (tp + fn) and precision(l) = tp / (tp + fp), with tp read
off the confusion-matrix diagonal, fn summed over the rest of l's row and
fp over the rest of l's column (rows index true labels). Labels that never
occur in the truth have undefined recall and are excluded from the macro
averages.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import ShapeError, UnknownLabelError
from ..model import LabelSet


def evaluate(truth: Sequence[str], predicted: Sequence[str], label_set: LabelSet) -> dict:
    if len(truth) != len(predicted):
        raise ShapeError(f"{len(truth)} truth labels vs {len(predicted)} predictions")
    n = len(label_set)
    matrix = [[0] * n for _ in range(n)]
    for t, p in zip(truth, predicted):
        try:
            matrix[label_set.index(t)][label_set.index(p)] += 1
        except KeyError as exc:
            raise UnknownLabelError(f"label {exc.args[0]!r} not in label set") from None

    per_label = {}
    macro_p = []
    macro_r = []
    for i, name in enumerate(label_set.names()):
        tp = matrix[i][i]
        fn = sum(matrix[i]) - tp
        fp = sum(matrix[r][i] for r in range(n)) - tp
        support = tp + fn
        recall = tp / support if support else None
        precision = tp / (tp + fp) if tp + fp else None
        if recall is not None and precision is not None and precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = None
        per_label[name] = {
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "support": support,
            "recall": recall,
            "precision": precision,
            "f1": f1,
        }
        if support:
            macro_r.append(recall)
            macro_p.append(precision if precision is not None else 0.0)

    mp = sum(macro_p) / len(macro_p) if macro_p else 0.0
    mr = sum(macro_r) / len(macro_r) if macro_r else 0.0
    mf1 = 2 * mp * mr / (mp + mr) if mp + mr > 0 else 0.0
    return {
        "confusion_matrix": matrix,
        "labels": label_set.names(),
        "per_label": per_label,
        "macro_precision": mp,
        "macro_recall": mr,
        "macro_f1": mf1,
        "n_samples": len(truth),
    }
