#!/usr/bin/env python3
"""
评估测试：计数、P/R/F1、宏/微平均、分组报告与窗口扫描
"""

import logging

import numpy as np
import pytest

from aspectmill.data.taxonomy import PolarityLabel
from aspectmill.errors import ConfigError, InvariantViolation, LengthMismatchError
from aspectmill.models.architectures import gold_labels
from aspectmill.models.bundle import Architecture, SentencePrediction
from aspectmill.tools.evaluation import (
    ASPECT_POLARITY,
    ASPECTS,
    CATEGORIES,
    INFERRED_CATEGORIES,
    POLARITY,
    ConfusionCounts,
    Scores,
    best_and_worst_labels,
    build_report,
    count_label,
    evaluate_bundle,
    evaluate_predictions,
    f1_score,
    macro_average,
    micro_average,
    prf,
    window_sweep,
)


def _perfect(corpus, taxonomy, with_aspect_polarities=False):
    predictions = []
    for sentence in corpus.sentences():
        gold = gold_labels(sentence, taxonomy)
        if not gold.polar:
            polarity = PolarityLabel.NEUTRAL
        else:
            polarity = PolarityLabel.POSITIVE if gold.positive else PolarityLabel.NEGATIVE
        predictions.append(
            SentencePrediction(
                categories=tuple(c for c in taxonomy.category_names if c in gold.categories),
                aspects=tuple(a for a in taxonomy.aspects if a in gold.aspects),
                polarity=polarity,
                aspect_polarities=(
                    {a: p if p is not PolarityLabel.MIXED else PolarityLabel.POSITIVE for a, p in gold.aspect_polarities.items()}
                    if with_aspect_polarities
                    else None
                ),
            )
        )
    return predictions


class TestCounting:
    def test_count_label(self):
        counts = count_label([True, True, False, False], [True, False, True, False])
        assert counts == ConfusionCounts(tp=1, fp=1, fn=1, tn=1)
        assert counts.total == 4

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            count_label([True], [True, False])

    def test_prf(self):
        scores = prf(ConfusionCounts(tp=3, fp=1, fn=2))
        assert scores.precision == pytest.approx(0.75)
        assert scores.recall == pytest.approx(0.6)
        assert scores.f1 == pytest.approx(2 / 3, abs=1e-4)

    def test_undefined(self):
        no_predictions = prf(ConfusionCounts(fn=3))
        assert no_predictions.precision is None
        assert no_predictions.recall == 0.0
        assert no_predictions.f1 is None
        assert no_predictions.undefined
        all_wrong = prf(ConfusionCounts(fp=2, fn=3))
        assert (all_wrong.precision, all_wrong.recall, all_wrong.f1) == (0.0, 0.0, None)

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(1, 40))
            gold = list(rng.random(n) < rng.random())
            predicted = list(rng.random(n) < rng.random())
            tp = sum(1 for g, p in zip(gold, predicted) if g and p)
            fp = sum(1 for g, p in zip(gold, predicted) if p and not g)
            fn = sum(1 for g, p in zip(gold, predicted) if g and not p)
            scores = prf(count_label(gold, predicted))
            precision = tp / (tp + fp) if tp + fp else None
            recall = tp / (tp + fn) if tp + fn else None
            assert scores.precision == precision
            assert scores.recall == recall
            if precision is None or recall is None or precision + recall == 0:
                assert scores.f1 is None
            else:
                assert scores.f1 == pytest.approx(2 * precision * recall / (precision + recall), abs=1e-12)

    @pytest.mark.parametrize(
        "p, r, f",
        [
            (70, 35, 46), (72, 44, 55), (79, 16, 26), (72, 27, 39),
            (71, 31, 43), (72, 38, 50), (71, 44, 54), (61, 70, 65),
            (73, 29, 41), (75, 36, 49), (74, 17, 28), (65, 30, 41),
            (78, 92, 84), (63, 60, 61), (75, 18, 29), (88, 99, 93),
            (76, 91, 83), (57, 40, 47), (86, 10, 18), (93, 100, 96),
        ],
    )
    def test_rounded_percentage_triples_consistent(self, p, r, f):
        assert abs(100 * f1_score(p / 100, r / 100) - f) <= 1.0

    def test_f1_between_precision_and_recall(self):
        rng = np.random.default_rng(11)
        for p, r in rng.random((200, 2)):
            f = f1_score(float(p), float(r))
            assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


class TestAveraging:
    def test_macro(self):
        averaged = macro_average([Scores(precision=1.0, recall=1.0, f1=1.0), Scores(precision=0.5, recall=0.5, f1=0.5)])
        assert (averaged.precision, averaged.recall, averaged.f1) == (0.75, 0.75, 0.75)
        assert averaged.undefined_labels == 0

    def test_macro_counts_undefined_as_zero(self):
        averaged = macro_average([Scores(precision=1.0, recall=1.0, f1=1.0), Scores(precision=None, recall=0.0, f1=None)])
        assert averaged.f1 == 0.5
        assert averaged.undefined_labels == 1

    def test_micro_pools_counts(self):
        counts = [ConfusionCounts(tp=1), ConfusionCounts(fp=1, fn=1)]
        averaged = micro_average(counts)
        pooled = prf(ConfusionCounts(tp=1, fp=1, fn=1))
        assert (averaged.precision, averaged.recall, averaged.f1) == (pooled.precision, pooled.recall, pooled.f1)

    def test_identical_labels_micro_equals_macro(self):
        counts = [ConfusionCounts(tp=4, fp=2, fn=1, tn=9)] * 5
        micro = micro_average(counts)
        macro = macro_average([prf(c) for c in counts])
        assert micro.f1 == pytest.approx(macro.f1)
        assert micro.precision == pytest.approx(macro.precision)

    def test_brute_force_report_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            n_units = int(rng.integers(1, 21))
            labels = [f"l{i}" for i in range(int(rng.integers(1, 6)))]
            gold = [{name for name in labels if rng.random() < 0.4} for _ in range(n_units)]
            predicted = [{name for name in labels if rng.random() < 0.4} for _ in range(n_units)]
            report = build_report("oracle", labels, gold, predicted)

            f1s, tp_sum, fp_sum, fn_sum = [], 0, 0, 0
            for name in labels:
                tp = sum(1 for g, p in zip(gold, predicted) if name in g and name in p)
                fp = sum(1 for g, p in zip(gold, predicted) if name in p and name not in g)
                fn = sum(1 for g, p in zip(gold, predicted) if name in g and name not in p)
                tp_sum, fp_sum, fn_sum = tp_sum + tp, fp_sum + fp, fn_sum + fn
                precision = tp / (tp + fp) if tp + fp else 0.0
                recall = tp / (tp + fn) if tp + fn else 0.0
                f1s.append(2 * precision * recall / (precision + recall) if precision + recall else 0.0)
            assert abs(report.macro.f1 - sum(f1s) / len(f1s)) <= 1e-12

            micro_p = tp_sum / (tp_sum + fp_sum) if tp_sum + fp_sum else None
            micro_r = tp_sum / (tp_sum + fn_sum) if tp_sum + fn_sum else None
            assert report.micro.precision == micro_p
            assert report.micro.recall == micro_r

    def test_empty(self):
        with pytest.raises(ValueError):
            macro_average([])
        with pytest.raises(ValueError):
            micro_average([])


class TestReports:
    def test_warning_for_undefined_labels(self, caplog):
        with caplog.at_level(logging.WARNING, logger="aspectmill.tools.evaluation"):
            report = build_report("demo", ["a", "b"], [{"a"}, set()], [{"a"}, set()])
        assert report.undefined_count == 1
        assert report.label("b").scores.undefined
        assert "未定义" in caplog.text

    def test_perfect_predictor(self, tiny_corpus, small_taxonomy):
        reports = evaluate_predictions(
            Architecture.HIERARCHICAL, small_taxonomy, tiny_corpus, _perfect(tiny_corpus, small_taxonomy)
        )
        assert [r.group for r in reports] == [CATEGORIES, INFERRED_CATEGORIES, ASPECTS, POLARITY]
        for report in reports[:3]:
            assert report.micro.f1 == 1.0
            assert report.macro.f1 == 1.0

    def test_flat_has_no_inferred_report(self, tiny_corpus, small_taxonomy):
        reports = evaluate_predictions(
            Architecture.FLAT, small_taxonomy, tiny_corpus, _perfect(tiny_corpus, small_taxonomy)
        )
        assert [r.group for r in reports] == [CATEGORIES, ASPECTS, POLARITY]

    def test_polarity_report_counts_mixed_as_both(self, tiny_corpus, small_taxonomy):
        reports = evaluate_predictions(
            Architecture.FLAT, small_taxonomy, tiny_corpus, _perfect(tiny_corpus, small_taxonomy)
        )
        polarity = next(r for r in reports if r.group == POLARITY)
        assert polarity.label("Negative").counts == ConfusionCounts(tp=1, fn=1, tn=3)
        assert polarity.label("Polar").scores.f1 == 1.0

    def test_gating_violation_rejected(self, tiny_corpus, small_taxonomy):
        predictions = _perfect(tiny_corpus, small_taxonomy)
        predictions[0] = SentencePrediction(categories=(), aspects=("Basic Tuition",), polarity=PolarityLabel.NEGATIVE)
        with pytest.raises(InvariantViolation):
            evaluate_predictions(Architecture.HIERARCHICAL, small_taxonomy, tiny_corpus, predictions)
        # prop 允许 aspect 否决类别判断
        evaluate_predictions(Architecture.PROPAGATION, small_taxonomy, tiny_corpus, predictions)

    def test_aspect_polarity_units(self, tiny_corpus, small_taxonomy):
        predictions = _perfect(tiny_corpus, small_taxonomy, with_aspect_polarities=True)
        # 第 3 句无标注，额外预测一个 aspect
        predictions[2] = SentencePrediction(
            categories=("Support and Organization",),
            aspects=("Organization",),
            polarity=PolarityLabel.POSITIVE,
            aspect_polarities={"Organization": PolarityLabel.POSITIVE},
        )
        reports = evaluate_predictions(Architecture.ASPECT_POLARITY, small_taxonomy, tiny_corpus, predictions)
        assert reports[-1].group == ASPECT_POLARITY
        polar = reports[-1].label("Polar").counts
        assert polar == ConfusionCounts(tp=4, fp=1, fn=0, tn=1)

    def test_prediction_count_mismatch(self, tiny_corpus, small_taxonomy):
        with pytest.raises(LengthMismatchError):
            evaluate_predictions(Architecture.FLAT, small_taxonomy, tiny_corpus, [])

    def test_best_and_worst(self):
        report = build_report(
            "demo",
            ["a", "b", "c"],
            [{"a", "b"}, {"a"}, {"c"}],
            [{"a"}, {"a", "b"}, set()],
        )
        best, worst = best_and_worst_labels(report, 2)
        assert [e.label for e in best] == ["a", "b"]
        assert [e.label for e in worst] == ["b", "c"]


@pytest.mark.slow
@pytest.mark.parametrize("architecture", list(Architecture))
def test_separable_corpus_end_to_end(separable_bundles, separable, architecture):
    reports = {r.group: r for r in evaluate_bundle(separable_bundles[architecture], separable)}
    assert reports[CATEGORIES].micro.f1 >= 0.95
    assert reports[ASPECTS].micro.f1 >= 0.95
    assert reports[POLARITY].micro.f1 >= 0.9


class TestWindowSweep:
    def test_sweep(self, separable_bundles, separable):
        bundle = separable_bundles[Architecture.ASPECT_POLARITY]
        results = window_sweep(bundle, separable, [1, None])
        assert [n for n, _ in results] == [1, None]
        assert all(report.group == ASPECT_POLARITY for _, report in results)
        whole = next(r for r in evaluate_bundle(bundle, separable) if r.group == ASPECT_POLARITY)
        assert results[1][1] == whole

    def test_requires_aspect_polarity_bundle(self, separable_bundles, separable):
        with pytest.raises(ConfigError):
            window_sweep(separable_bundles[Architecture.FLAT], separable, [1])
