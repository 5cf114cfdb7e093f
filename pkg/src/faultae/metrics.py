"""Point-level confusion counts and the derived detection scores."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyEvaluationError, ShapeError

SCORE_NAMES = ("accuracy", "precision", "recall", "specificity", "f1")
REPORT_LABELS = {
    "accuracy": "Accuracy",
    "precision": "Precision",
    "recall": "Recall",
    "specificity": "Specificity",
    "f1": "F1-score",
}


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def transpose(self) -> "ConfusionCounts":
        return ConfusionCounts(self.tp, self.fn, self.fp, self.tn)


def confusion(pred, truth) -> ConfusionCounts:
    """Count outcomes with fault (nonzero) as the positive class."""
    p = np.asarray(pred) != 0
    t = np.asarray(truth) != 0
    if p.shape != t.shape or p.ndim != 1:
        raise ShapeError(f"prediction shape {p.shape} != truth shape {t.shape}")
    if p.size == 0:
        raise EmptyEvaluationError("nothing to evaluate")
    tp = int(np.count_nonzero(p & t))
    fp = int(np.count_nonzero(p & ~t))
    fn = int(np.count_nonzero(~p & t))
    return ConfusionCounts(tp, fp, fn, p.size - tp - fp - fn)


def _ratio(num, den):
    return num / den if den > 0 else None


def scores(counts: ConfusionCounts) -> dict:
    """Accuracy, precision, recall, specificity and F1 as fractions.

    A score whose denominator is zero is ``None`` (undefined), never 0 or 1.
    """
    if counts.total == 0:
        raise EmptyEvaluationError("all confusion counts are zero")
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    f1 = None
    if precision is not None and recall is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    return {
        "accuracy": (counts.tp + counts.tn) / counts.total,
        "precision": precision,
        "recall": recall,
        "specificity": _ratio(counts.tn, counts.tn + counts.fp),
        "f1": f1,
    }


def report_dict(counts: ConfusionCounts) -> dict:
    """Scores in percent under their table names, plus the raw counts."""
    s = scores(counts)
    out = {REPORT_LABELS[k]: (None if s[k] is None else 100.0 * s[k]) for k in SCORE_NAMES}
    out["confusion"] = asdict(counts)
    return out


def format_table(counts: ConfusionCounts) -> str:
    rep = report_dict(counts)
    lines = [f"{'Metric':<12} {'Value (%)':>10}"]
    for key in SCORE_NAMES:
        val = rep[REPORT_LABELS[key]]
        text = "undefined" if val is None else f"{val:.2f}"
        lines.append(f"{REPORT_LABELS[key]:<12} {text:>10}")
    lines.append(f"TP={counts.tp} FP={counts.fp} FN={counts.fn} TN={counts.tn}")
    return "\n".join(lines)


def write_report_json(counts: ConfusionCounts, path) -> None:
    Path(path).write_text(json.dumps(report_dict(counts), indent=2, sort_keys=True) + "\n")


def write_confusion_csv(counts: ConfusionCounts, path) -> None:
    """2x2 matrix, rows = actual (fault, normal), columns = predicted (fault, normal)."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["actual\\predicted", "fault", "normal"])
        w.writerow(["fault", counts.tp, counts.fn])
        w.writerow(["normal", counts.fp, counts.tn])
