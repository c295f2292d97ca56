import numpy as np
import pytest
from sklearn.metrics import roc_auc_score

from midpredict import (
    ConfusionMatrix,
    ValidationError,
    auc,
    auc_standard_error,
    auc_z_test,
    confusion,
    roc_points,
    score_correlation,
)
from midpredict.evaluation import comparison_report, write_roc_tsv

from _oracles import pair_count_auc


def labels_from01(flags):
    return ["conflict" if f else "peace" for f in flags]


class TestConfusion:
    def test_published_svm_counts(self):
        cm = ConfusionMatrix(tc=295, fp=97, tp=20914, fc=5431)
        assert cm.peace_accuracy == pytest.approx(0.794, abs=5e-4)
        assert cm.conflict_accuracy == pytest.approx(0.753, abs=5e-4)
        assert cm.total == 26737

    def test_published_nn_counts(self):
        cm = ConfusionMatrix(tc=297, fp=95, tp=19464, fc=6881)
        assert cm.peace_accuracy == pytest.approx(0.739, abs=5e-4)
        assert cm.conflict_accuracy == pytest.approx(0.758, abs=5e-4)

    def test_counting(self):
        cm = confusion(
            ["conflict", "peace", "conflict", "peace"],
            ["conflict", "conflict", "peace", "peace"],
        )
        assert (cm.tc, cm.fp, cm.fc, cm.tp) == (1, 1, 1, 1)

    def test_perfect_prediction(self):
        actual = ["conflict", "peace", "peace"]
        cm = confusion(actual, actual)
        assert cm.fp == 0 and cm.fc == 0

    def test_totals_always_match(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n = int(rng.integers(1, 50))
            pred = labels_from01(rng.integers(0, 2, n))
            act = labels_from01(rng.integers(0, 2, n))
            assert confusion(pred, act).total == n

    def test_errors(self):
        with pytest.raises(ValueError, match="length"):
            confusion(["peace"], ["peace", "conflict"])
        with pytest.raises(ValueError, match="empty"):
            confusion([], [])
        with pytest.raises(ValueError, match="label"):
            confusion(["war"], ["peace"])


class TestRoc:
    def test_perfect_separation(self):
        curve = roc_points([0.9, 0.1], ["conflict", "peace"])
        assert curve.points() == [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
        assert auc(curve) == 1.0

    def test_all_tied_scores(self):
        curve = roc_points([0.3, 0.3, 0.3], ["conflict", "peace", "conflict"])
        assert curve.points() == [(0.0, 0.0), (1.0, 1.0)]
        assert auc(curve) == 0.5

    def test_hand_enumerated_thresholds(self):
        curve = roc_points(
            [0.8, 0.6, 0.4, 0.2], ["conflict", "peace", "conflict", "peace"]
        )
        np.testing.assert_array_equal(curve.thresholds, [np.inf, 0.8, 0.6, 0.4, 0.2])
        assert curve.points() == [
            (0.0, 0.0),
            (0.0, 0.5),
            (0.5, 0.5),
            (0.5, 1.0),
            (1.0, 1.0),
        ]

    def test_monotone_and_endpoints(self):
        rng = np.random.default_rng(2)
        scores = rng.normal(size=60)
        actual = labels_from01(rng.integers(0, 2, 60))
        curve = roc_points(scores, actual)
        assert (np.diff(curve.fpr) >= 0).all() and (np.diff(curve.tpr) >= 0).all()
        assert curve.points()[0] == (0.0, 0.0)
        assert curve.points()[-1] == (1.0, 1.0)

    def test_single_class_rejected(self):
        with pytest.raises(ValidationError, match="class"):
            roc_points([0.1, 0.2], ["peace", "peace"])


class TestAuc:
    def test_equals_pair_counting_exactly(self):
        rng = np.random.default_rng(3)
        for trial in range(30):
            n = int(rng.integers(5, 200))
            flags = rng.integers(0, 2, n)
            if flags.all() or not flags.any():
                continue
            # quantized scores force plenty of ties
            scores = np.round(rng.normal(size=n), 1)
            a = auc(roc_points(scores, labels_from01(flags)))
            assert a == pair_count_auc(scores, flags)

    def test_matches_sklearn(self):
        rng = np.random.default_rng(4)
        flags = rng.integers(0, 2, 100)
        flags[0], flags[1] = 0, 1
        scores = rng.normal(size=100)
        a = auc(roc_points(scores, labels_from01(flags)))
        assert a == pytest.approx(roc_auc_score(flags, scores), abs=1e-12)

    def test_negating_scores_flips_auc(self):
        rng = np.random.default_rng(5)
        flags = rng.integers(0, 2, 40)
        flags[:2] = [0, 1]
        scores = rng.normal(size=40)
        labels = labels_from01(flags)
        a1 = auc(roc_points(scores, labels))
        a2 = auc(roc_points(-scores, labels))
        assert a1 + a2 == pytest.approx(1.0, abs=1e-12)

    def test_flip_labels_and_scores_preserves_auc(self):
        rng = np.random.default_rng(6)
        flags = rng.integers(0, 2, 40)
        flags[:2] = [0, 1]
        scores = rng.normal(size=40)
        a1 = auc(roc_points(scores, labels_from01(flags)))
        a2 = auc(roc_points(-scores, labels_from01(1 - flags)))
        assert a1 == pytest.approx(a2, abs=1e-12)


class TestStandardError:
    def test_single_pair_collapses(self):
        assert auc_standard_error(0.5, 1, 1) == pytest.approx(0.5, abs=1e-15)

    def test_against_direct_formula(self):
        a, nc, npc = 0.84, 392, 26345
        q1 = a / (2 - a)
        q2 = 2 * a * a / (1 + a)
        expected = np.sqrt(
            (a * (1 - a) + (nc - 1) * (q1 - a * a) + (npc - 1) * (q2 - a * a)) / (nc * npc)
        )
        assert auc_standard_error(a, nc, npc) == pytest.approx(expected, rel=1e-15)

    def test_monotone_in_counts(self):
        prev = np.inf
        for n in (10, 50, 200, 1000):
            se = auc_standard_error(0.8, n, n * 10)
            assert se < prev
            prev = se

    def test_degenerate_flagged(self):
        with pytest.raises(ValidationError, match="zero-variance"):
            auc_standard_error(1.0, 5, 5)
        with pytest.raises(ValidationError, match="zero-variance"):
            auc_standard_error(0.0, 5, 5)


class TestZTest:
    def test_equal_aucs_give_zero(self):
        assert auc_z_test(0.8, 0.01, 0.8, 0.02, 0.3) == 0.0

    def test_uncorrelated_example(self):
        z = auc_z_test(0.84, 0.01, 0.81, 0.01, 0.0)
        assert z == pytest.approx(0.03 / np.sqrt(2e-4), rel=1e-12)

    def test_antisymmetry(self):
        z1 = auc_z_test(0.84, 0.011, 0.81, 0.009, 0.4)
        z2 = auc_z_test(0.81, 0.009, 0.84, 0.011, 0.4)
        assert z1 == pytest.approx(-z2, rel=1e-15)

    def test_nonpositive_variance_rejected(self):
        with pytest.raises(ValueError, match="variance"):
            auc_z_test(0.8, 0.01, 0.7, 0.01, 1.0)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            auc_z_test(0.8, -0.01, 0.7, 0.01, 0.0)
        with pytest.raises(ValueError):
            auc_z_test(0.8, 0.01, 0.7, 0.01, 1.5)


class TestScoreCorrelation:
    def test_identical_scores_give_one(self):
        rng = np.random.default_rng(7)
        scores = rng.normal(size=30)
        labels = labels_from01(rng.integers(0, 2, 30))
        labels[0], labels[1] = "peace", "conflict"
        assert score_correlation(scores, scores, labels) == pytest.approx(1.0)

    def test_single_class_rejected(self):
        with pytest.raises(ValidationError):
            score_correlation([1, 2], [1, 2], ["peace", "peace"])


def test_roc_tsv_format(tmp_path):
    curve = roc_points([0.9, 0.1], ["conflict", "peace"])
    out = tmp_path / "roc.tsv"
    write_roc_tsv(curve, out, header_lines=["seed: 1"])
    lines = out.read_text().splitlines()
    assert lines[0] == "# seed: 1"
    assert lines[1] == "threshold\tfpr\tsensitivity"
    assert lines[2].split("\t") == ["inf", "0.0", "0.0"]
    assert len(lines) == 2 + 3


def test_comparison_report_verdicts():
    significant = comparison_report("a", 0.84, 0.01022, "b", 0.81, 0.00998, 0.3937)
    assert "significant at 95% (|z| > 1.96): yes" in significant
    not_significant = comparison_report("a", 0.82, 0.01, "b", 0.81, 0.01, 0.0)
    assert "significant at 95% (|z| > 1.96): no" in not_significant


def test_compare_aucs_bundles_fields():
    from midpredict import compare_aucs

    cmp = compare_aucs(0.84, 0.01022, 0.81, 0.00998, 0.3937)
    assert cmp.z == pytest.approx(2.697, abs=0.005)
    assert cmp.significant_95
    assert (cmp.a1, cmp.a2, cmp.r) == (0.84, 0.81, 0.3937)
