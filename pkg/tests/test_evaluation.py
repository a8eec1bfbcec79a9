import numpy as np
import pytest

from fuzzoracle import (
    ConfusionMatrix,
    ProgramRecord,
    confusion_at,
    confusion_metrics,
    roc_sweep,
)
from fuzzoracle.errors import EmptyCorpusError, EmptyMatrixError
from fuzzoracle.evaluation import DEFAULT_ROC_THRESHOLDS


class TestConfusionMetrics:
    def test_reference_fixture(self):
        # 22 programs: 10 caught, 10 missed, 2 clean kept clean.
        m = confusion_metrics(ConfusionMatrix(tp=10, fp=0, tn=2, fn=10))
        assert m.accuracy == 12 / 22
        assert m.precision == 1.0
        assert m.recall == 0.5
        assert m.f1 == pytest.approx(2 / 3)
        assert round(m.accuracy, 2) == 0.55
        assert round(m.f1, 2) == 0.67

    def test_undefined_precision(self):
        m = confusion_metrics(ConfusionMatrix(tp=0, fp=0, tn=3, fn=2))
        assert m.precision is None
        assert m.f1 is None
        assert m.recall == 0.0

    def test_undefined_recall(self):
        m = confusion_metrics(ConfusionMatrix(tp=0, fp=2, tn=3, fn=0))
        assert m.recall is None

    def test_empty_matrix(self):
        with pytest.raises(EmptyMatrixError):
            confusion_metrics(ConfusionMatrix())

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionMatrix(tp=-1)

    def test_random_matrices_against_hand_formulas(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            tp, fp, tn, fn = (int(v) for v in rng.integers(0, 30, 4))
            if tp + fp + tn + fn == 0:
                continue
            m = confusion_metrics(ConfusionMatrix(tp, fp, tn, fn))
            assert m.accuracy == pytest.approx((tp + tn) / (tp + fp + tn + fn))
            if tp + fp:
                assert m.precision == pytest.approx(tp / (tp + fp))
            if tp + fn:
                assert m.recall == pytest.approx(tp / (tp + fn))
            if m.precision and m.recall:
                expected = 2 * m.precision * m.recall / (m.precision + m.recall)
                assert m.f1 == pytest.approx(expected)


def corpus(rng, size=20, policies=10):
    return [
        ProgramRecord(
            int(rng.integers(0, policies + 1)), policies, bool(rng.integers(0, 2))
        )
        for _ in range(size)
    ]


class TestRocSweep:
    def test_endpoints(self):
        rng = np.random.default_rng(1)
        records = corpus(rng)
        points = roc_sweep(records, [0.0, 1.01])
        theta0 = points[0]
        assert theta0[1] == 0.0 and theta0[2] == 0.0
        above_one = points[-1]
        assert above_one[1] == 1.0 and above_one[2] == 1.0

    def test_monotone_in_threshold(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            records = corpus(rng)
            points = roc_sweep(records, DEFAULT_ROC_THRESHOLDS)
            for (t1, f1, p1), (t2, f2, p2) in zip(points, points[1:]):
                assert t2 >= t1
                assert f2 >= f1
                assert p2 >= p1

    def test_matches_brute_force_recount(self):
        rng = np.random.default_rng(3)
        records = corpus(rng, size=40)
        points = roc_sweep(records, DEFAULT_ROC_THRESHOLDS)
        for theta, fpr, tpr in points:
            tp = sum(1 for r in records if r.ground_truth_buggy and r.ratio < theta)
            fn = sum(1 for r in records if r.ground_truth_buggy and r.ratio >= theta)
            fp = sum(1 for r in records if not r.ground_truth_buggy and r.ratio < theta)
            tn = sum(1 for r in records if not r.ground_truth_buggy and r.ratio >= theta)
            assert tpr == (tp / (tp + fn) if tp + fn else 0.0)
            assert fpr == (fp / (fp + tn) if fp + tn else 0.0)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            roc_sweep([], [0.5])

    def test_unsorted_thresholds_rejected(self):
        rng = np.random.default_rng(4)
        with pytest.raises(ValueError):
            roc_sweep(corpus(rng), [0.5, 0.2])

    def test_default_grid_has_eleven_points(self):
        assert len(DEFAULT_ROC_THRESHOLDS) == 11
        assert DEFAULT_ROC_THRESHOLDS[0] == 0.0
        assert DEFAULT_ROC_THRESHOLDS[-1] == 1.0


class TestConfusionAt:
    def test_totals_match_corpus_size(self):
        rng = np.random.default_rng(5)
        records = corpus(rng, size=12)
        m = confusion_at(records, 0.7)
        assert m.total == 12

    def test_boundary_ratio_is_non_buggy(self):
        # ratio exactly at the threshold is judged NonBuggy.
        record = ProgramRecord(7, 10, ground_truth_buggy=True)
        m = confusion_at([record], 0.7)
        assert m.fn == 1 and m.tp == 0
