"""Detection-quality bookkeeping over a corpus of program variants.

The positive class is Buggy throughout: a true positive is a buggy program
the oracle flagged. Thresholded verdicts are re-derived from each
program's stored healthy-policy ratio, so sweeping thresholds needs no
retraining.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyCorpusError, EmptyMatrixError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ClassificationMetrics:
    """Accuracy, precision, recall, and F1; None where undefined."""

    accuracy: float | None
    precision: float | None
    recall: float | None
    f1: float | None


def confusion_metrics(matrix: ConfusionMatrix) -> ClassificationMetrics:
    """Standard detection metrics from a confusion matrix.

    A metric whose denominator is zero comes back as None rather than a
    made-up number; an entirely empty matrix is an error.
    """
    if matrix.total == 0:
        raise EmptyMatrixError("confusion matrix has no entries")
    accuracy = (matrix.tp + matrix.tn) / matrix.total
    precision = (
        matrix.tp / (matrix.tp + matrix.fp) if matrix.tp + matrix.fp > 0 else None
    )
    recall = matrix.tp / (matrix.tp + matrix.fn) if matrix.tp + matrix.fn > 0 else None
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return ClassificationMetrics(accuracy, precision, recall, f1)


@dataclass(frozen=True)
class ProgramRecord:
    """One judged program: its healthy-policy vote and its true label."""

    true_count: int
    policy_count: int
    ground_truth_buggy: bool
    name: str = ""

    def __post_init__(self):
        if self.policy_count < 1:
            raise ValueError("policy_count must be at least 1")
        if not 0 <= self.true_count <= self.policy_count:
            raise ValueError("true_count must lie in [0, policy_count]")

    @property
    def ratio(self) -> float:
        return self.true_count / self.policy_count

    def predicted_buggy(self, theta: float) -> bool:
        return self.ratio < theta


def confusion_at(records, theta: float) -> ConfusionMatrix:
    """Confusion matrix when verdicts are cut at threshold ``theta``."""
    tp = fp = tn = fn = 0
    for rec in records:
        predicted = rec.predicted_buggy(theta)
        if rec.ground_truth_buggy:
            if predicted:
                tp += 1
            else:
                fn += 1
        else:
            if predicted:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp, fp, tn, fn)


def roc_sweep(records, thresholds) -> list[tuple[float, float, float]]:
    """(threshold, FPR, TPR) per threshold, verdicts re-derived per cut.

    Thresholds must be sorted ascending. A class absent from the corpus
    contributes rate 0 for its axis.
    """
    records = list(records)
    if not records:
        raise EmptyCorpusError("no program records to sweep")
    thresholds = list(thresholds)
    if any(b > a for a, b in zip(thresholds[1:], thresholds)):
        raise ValueError("thresholds must be sorted ascending")

    points = []
    for theta in thresholds:
        m = confusion_at(records, theta)
        tpr = m.tp / (m.tp + m.fn) if m.tp + m.fn > 0 else 0.0
        fpr = m.fp / (m.fp + m.tn) if m.fp + m.tn > 0 else 0.0
        points.append((theta, fpr, tpr))
    return points


DEFAULT_ROC_THRESHOLDS = tuple(round(0.1 * i, 1) for i in range(11))
