import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphcp.conformal import ConformalResult
from graphcp.metrics import (
    accuracy,
    combined_measure,
    ece,
    empirical_coverage,
    empirical_inefficiency,
    empty_set_rate,
    mce,
    point_predictions,
    reliability,
)
from graphcp.numerics import make_rng
from oracles import ece_mce_by_hand, reliability_by_hand


def fake_result(hits, sizes, n_empty=0):
    hits = np.asarray(hits, dtype=bool)
    sizes = np.asarray(sizes, dtype=np.int64)
    return ConformalResult(
        threshold=1.0,
        test_indices=np.arange(hits.size),
        membership=np.zeros((hits.size, 1), dtype=bool),
        set_sizes=sizes,
        hits=hits,
        n_empty=n_empty,
        forced_count=0,
        cal_scores=np.zeros(0),
    )


class TestCoverageInefficiency:
    def test_all_covered(self):
        assert empirical_coverage(fake_result([1] * 5, [1] * 5)) == 1.0

    def test_none_covered(self):
        assert empirical_coverage(fake_result([0] * 5, [1] * 5)) == 0.0

    def test_nine_of_ten(self):
        assert empirical_coverage(fake_result([1] * 9 + [0], [1] * 10)) == 0.9

    def test_all_singletons(self):
        assert empirical_inefficiency(fake_result([1] * 4, [1, 1, 1, 1])) == 1.0

    def test_all_full_c7(self):
        assert empirical_inefficiency(fake_result([1] * 3, [7, 7, 7])) == 7.0

    def test_mixed_sizes(self):
        assert empirical_inefficiency(fake_result([1] * 3, [1, 2, 3])) == 2.0

    def test_empty_rate(self):
        assert empty_set_rate(fake_result([0] * 4, [0, 0, 1, 2], n_empty=2)) == 0.5

    def test_no_items_error(self):
        with pytest.raises(ValueError):
            empirical_coverage(fake_result([], []))


class TestPointPredictions:
    def test_tie_goes_to_lowest_index(self):
        probs = np.array([[0.4, 0.4, 0.2], [0.3, 0.3, 0.4]])
        assert point_predictions(probs).tolist() == [0, 2]

    def test_accuracy(self):
        probs = np.array([[0.9, 0.1], [0.2, 0.8], [0.6, 0.4]])
        assert accuracy(probs, np.array([0, 1, 1])) == pytest.approx(2.0 / 3.0)

    def test_accuracy_scale_invariant(self):
        # softmax sharpening moves confidence, never the argmax
        rng = make_rng(0)
        logits = rng.normal(size=(40, 5))
        labels = rng.integers(0, 5, size=40)
        from graphcp.numerics import softmax_rows
        a1 = accuracy(softmax_rows(logits), labels)
        a2 = accuracy(softmax_rows(logits * 7.0), labels)
        assert a1 == a2


class TestReliability:
    def test_all_confident_correct(self):
        probs = np.tile(np.array([1.0, 0.0, 0.0]), (10, 1))
        d = reliability(probs, np.zeros(10, dtype=np.int64))
        assert d.counts[-1] == 10
        assert d.counts[:-1].sum() == 0
        assert d.acc[-1] == 1.0
        assert d.conf[-1] == 1.0

    def test_boundary_confidence_closes_bin(self):
        # conf exactly m/M belongs to bin m, not m+1
        m = 20
        for k in (1, 5, 10, 19):
            c = k / m
            probs = np.array([[c, 1.0 - c]]) if c >= 0.5 else np.array([[c, (1 - c) / 1.0]])
            conf = max(c, 1 - c)
            d = reliability(np.array([[conf, 1.0 - conf]]), np.array([0]), num_bins=m)
            want_bin = int(np.ceil(conf * m)) - 1
            assert d.counts[want_bin] == 1

    def test_six_samples_two_bins_hand(self):
        # three at conf 0.55 (2 right), three at conf 0.95 (1 right)
        rows = [[0.55, 0.45]] * 3 + [[0.95, 0.05]] * 3
        labels = np.array([0, 0, 1, 0, 1, 1])
        d = reliability(np.array(rows), labels, num_bins=20)
        counts, acc, conf = reliability_by_hand([0.55] * 3 + [0.95] * 3,
                                                [1, 1, 0, 1, 0, 0], 20)
        assert np.array_equal(d.counts, counts)
        live = counts > 0
        assert np.allclose(d.acc[live], acc[live], atol=1e-15)
        assert np.allclose(d.conf[live], conf[live], atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_matches_loop_oracle(self, seed):
        rng = make_rng(seed)
        probs = rng.dirichlet(np.ones(4), size=25)
        labels = rng.integers(0, 4, size=25)
        d = reliability(probs, labels, num_bins=10)
        conf = probs.max(axis=1)
        correct = (np.argmax(probs, axis=1) == labels)
        counts, acc, cf = reliability_by_hand(conf, correct, 10)
        assert np.array_equal(d.counts, counts)
        live = counts > 0
        assert np.allclose(d.acc[live], acc[live], atol=1e-12)
        assert np.allclose(d.conf[live], cf[live], atol=1e-12)

    def test_bins_partition(self):
        rng = make_rng(1)
        probs = rng.dirichlet(np.ones(3), size=500)
        d = reliability(probs, rng.integers(0, 3, size=500), num_bins=20)
        assert d.counts.sum() == 500


class TestEceMce:
    def test_perfectly_calibrated_zero(self):
        # conf 0.75 with exactly 3 of 4 correct in that bin
        rows = np.tile(np.array([0.75, 0.25]), (4, 1))
        labels = np.array([0, 0, 0, 1])
        d = reliability(rows, labels, num_bins=4)
        assert ece(d) == 0.0
        assert mce(d) == 0.0

    def test_single_bin_gap(self):
        rows = np.tile(np.array([0.9, 0.1]), (10, 1))
        labels = np.array([0] * 6 + [1] * 4)  # acc 0.6 at conf 0.9
        d = reliability(rows, labels, num_bins=20)
        assert ece(d) == pytest.approx(0.3, abs=1e-12)
        assert mce(d) == pytest.approx(0.3, abs=1e-12)

    def test_two_bin_hand_example(self):
        # 30 samples at conf 0.7 with 18 right, 70 at conf 0.3 with 35 right
        rows = ([[0.7, 0.1, 0.1, 0.1]] * 30
                + [[0.3, 0.24, 0.23, 0.23]] * 70)
        labels = np.array([0] * 18 + [1] * 12 + [0] * 35 + [1] * 35)
        d = reliability(np.array(rows), labels, num_bins=20)
        assert ece(d) == pytest.approx(0.17, abs=1e-12)
        assert mce(d) == pytest.approx(0.2, abs=1e-12)
        e, m = ece_mce_by_hand(d.counts, d.acc, d.conf)
        assert ece(d) == pytest.approx(e, abs=1e-15)
        assert mce(d) == pytest.approx(m, abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 100_000))
    def test_ece_never_exceeds_mce(self, seed):
        rng = make_rng(seed)
        n = int(rng.integers(1, 60))
        probs = rng.dirichlet(np.full(3, 0.7), size=n)
        labels = rng.integers(0, 3, size=n)
        d = reliability(probs, labels)
        assert ece(d) <= mce(d) + 1e-15

    def test_empty_diagram_errors(self):
        d = reliability(np.zeros((0, 3)), np.zeros(0, dtype=np.int64))
        with pytest.raises(ValueError):
            ece(d)


class TestCombined:
    def test_simple_ratio(self):
        assert combined_measure(0.2, 0.8) == pytest.approx(0.25, abs=1e-15)

    def test_zero_mce(self):
        assert combined_measure(0.0, 0.5) == 0.0

    def test_zero_accuracy_is_none(self):
        assert combined_measure(0.2, 0.0) is None

    def test_negative_accuracy_rejected(self):
        with pytest.raises(ValueError):
            combined_measure(0.2, -0.1)
