#!/usr/bin/env python3
"""
评估工具

按标签统计 TP/FP/FN/TN，计算 precision、recall、F1 及其宏平均和微平均。
0/0 的指标记为未定义 (None)：宏平均时按 0 计入并计数告警。
"""

import logging
from typing import Dict, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..data.corpus import AnnotatedCorpus, Sentence
from ..data.taxonomy import MIXED_SCORE, PolarityLabel, Taxonomy
from ..errors import ConfigError, InvariantViolation, LengthMismatchError
from ..models.architectures import (
    gating_violations,
    gold_labels,
    infer_categories,
    predict_corpus,
)
from ..models.bundle import Architecture, ModelBundle, SentencePrediction

logger = logging.getLogger(__name__)

# 报告分组
CATEGORIES = "categories"
INFERRED_CATEGORIES = "inferred-categories"
ASPECTS = "aspects"
POLARITY = "polarity"
ASPECT_POLARITY = "aspect-polarity"

POLAR_LABEL = "Polar"
POLARITY_LABELS = (
    PolarityLabel.POSITIVE.value,
    PolarityLabel.NEGATIVE.value,
    PolarityLabel.NEUTRAL.value,
    POLAR_LABEL,
)


class ConfusionCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + other.tp,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
            tn=self.tn + other.tn,
        )


class Scores(BaseModel):
    """单个标签的 P/R/F1，None 表示 0/0 未定义"""

    model_config = ConfigDict(frozen=True)

    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]

    @property
    def undefined(self) -> bool:
        return self.precision is None or self.recall is None or self.f1 is None


class Averaged(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]
    undefined_labels: int = 0


class LabelMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    counts: ConfusionCounts
    scores: Scores
    accuracy: Optional[float]


class MetricsReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    group: str
    labels: Tuple[LabelMetrics, ...]
    macro: Averaged
    micro: Averaged

    @property
    def undefined_count(self) -> int:
        return self.macro.undefined_labels

    def label(self, name: str) -> LabelMetrics:
        for entry in self.labels:
            if entry.label == name:
                return entry
        raise KeyError(name)


def count_label(gold: Sequence[bool], predicted: Sequence[bool]) -> ConfusionCounts:
    """同一句子列表上的 gold / 预测成员关系 → 2×2 计数"""
    if len(gold) != len(predicted):
        raise LengthMismatchError(f"gold 与预测长度不一致: {len(gold)} != {len(predicted)}")
    tp = fp = fn = tn = 0
    for g, p in zip(gold, predicted):
        if g and p:
            tp += 1
        elif p:
            fp += 1
        elif g:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator else None


def f1_score(precision: Optional[float], recall: Optional[float]) -> Optional[float]:
    """2PR/(P+R)；P 或 R 未定义、或 P+R = 0 时未定义"""
    if precision is None or recall is None or precision + recall == 0:
        return None
    return 2 * precision * recall / (precision + recall)


def prf(counts: ConfusionCounts) -> Scores:
    precision = _ratio(counts.tp, counts.tp + counts.fp)
    recall = _ratio(counts.tp, counts.tp + counts.fn)
    return Scores(precision=precision, recall=recall, f1=f1_score(precision, recall))


def _zero(value: Optional[float]) -> float:
    return 0.0 if value is None else value


def macro_average(scores: Sequence[Scores]) -> Averaged:
    """各标签指标的算术平均；未定义值按 0 计入"""
    if not scores:
        raise ValueError("宏平均至少需要一个标签")
    n = len(scores)
    return Averaged(
        precision=sum(_zero(s.precision) for s in scores) / n,
        recall=sum(_zero(s.recall) for s in scores) / n,
        f1=sum(_zero(s.f1) for s in scores) / n,
        undefined_labels=sum(1 for s in scores if s.undefined),
    )


def micro_average(counts: Sequence[ConfusionCounts]) -> Averaged:
    """先汇总各标签的 TP/FP/FN 再计算"""
    if not counts:
        raise ValueError("微平均至少需要一个标签")
    pooled = ConfusionCounts()
    for c in counts:
        pooled = pooled + c
    scores = prf(pooled)
    return Averaged(
        precision=scores.precision,
        recall=scores.recall,
        f1=scores.f1,
        undefined_labels=1 if scores.undefined else 0,
    )


def build_report(
    group: str,
    labels: Sequence[str],
    gold: Sequence[Set[str]],
    predicted: Sequence[Set[str]],
) -> MetricsReport:
    """
    由逐单元（句子或句子-aspect 对）的标签集合生成一个分组报告

    Args:
        group: 分组名
        labels: 参与评估的标签（决定报告行顺序）
        gold: 每个单元的 gold 标签集合
        predicted: 每个单元的预测标签集合
    """
    if len(gold) != len(predicted):
        raise LengthMismatchError(f"gold 与预测单元数不一致: {len(gold)} != {len(predicted)}")
    entries = []
    for name in labels:
        counts = count_label([name in g for g in gold], [name in p for p in predicted])
        entries.append(
            LabelMetrics(
                label=name,
                counts=counts,
                scores=prf(counts),
                accuracy=_ratio(counts.tp + counts.tn, counts.total),
            )
        )
    report = MetricsReport(
        group=group,
        labels=tuple(entries),
        macro=macro_average([e.scores for e in entries]),
        micro=micro_average([e.counts for e in entries]),
    )
    if report.undefined_count:
        logger.warning(f"{group}: {report.undefined_count} 个标签存在未定义 (0/0) 指标，按 0 计入宏平均")
    return report


def _polarity_set(label: PolarityLabel) -> Set[str]:
    result = {label.value}
    if label is not PolarityLabel.NEUTRAL:
        result.add(POLAR_LABEL)
    return result


def _gold_score_set(score: int) -> Set[str]:
    """与训练目标相同的规则：99 同时计为正和负"""
    result: Set[str] = set()
    if score > 0:
        result.add(PolarityLabel.POSITIVE.value)
    if score < 0 or score == MIXED_SCORE:
        result.add(PolarityLabel.NEGATIVE.value)
    result.add(POLAR_LABEL if score != 0 else PolarityLabel.NEUTRAL.value)
    return result


def evaluate_predictions(
    architecture: Architecture,
    taxonomy: Taxonomy,
    corpus: AnnotatedCorpus,
    predictions: Sequence[SentencePrediction],
) -> List[MetricsReport]:
    """
    按分组评估预测：categories、inferred-categories（flat 不输出）、aspects、polarity，
    aspect-polarity 架构另外输出以 (句子, aspect) 对为单元的 aspect-polarity 报告
    """
    sentences = corpus.sentence_list()
    if len(sentences) != len(predictions):
        raise LengthMismatchError(f"句子数与预测数不一致: {len(sentences)} != {len(predictions)}")
    golds = [gold_labels(s, taxonomy) for s in sentences]

    reports = [
        build_report(
            CATEGORIES,
            taxonomy.category_names,
            [set(g.categories) for g in golds],
            [set(p.categories) for p in predictions],
        )
    ]

    if architecture is not Architecture.FLAT:
        inferred = [set(infer_categories(p.aspects, taxonomy)) for p in predictions]
        if architecture in (Architecture.HIERARCHICAL, Architecture.ASPECT_POLARITY):
            broken = [i for i, p in enumerate(predictions) if gating_violations(p, taxonomy)]
            if broken:
                raise InvariantViolation(f"推断类别超出预测类别: 句子 {broken[:10]}")
        reports.append(
            build_report(
                INFERRED_CATEGORIES,
                taxonomy.category_names,
                [set(g.categories) for g in golds],
                inferred,
            )
        )

    reports.append(
        build_report(
            ASPECTS,
            taxonomy.aspects,
            [set(g.aspects) for g in golds],
            [set(p.aspects) for p in predictions],
        )
    )

    gold_polarity = []
    for g in golds:
        labels: Set[str] = set()
        if g.positive:
            labels.add(PolarityLabel.POSITIVE.value)
        if g.negative:
            labels.add(PolarityLabel.NEGATIVE.value)
        labels.add(POLAR_LABEL if g.polar else PolarityLabel.NEUTRAL.value)
        gold_polarity.append(labels)
    reports.append(
        build_report(
            POLARITY,
            POLARITY_LABELS,
            gold_polarity,
            [_polarity_set(p.polarity) for p in predictions],
        )
    )

    if architecture is Architecture.ASPECT_POLARITY:
        reports.append(_aspect_polarity_report(sentences, predictions))
    return reports


def _aspect_polarity_report(
    sentences: Sequence[Sentence], predictions: Sequence[SentencePrediction]
) -> MetricsReport:
    """单元为 gold 与预测 (句子, aspect) 对的并集；缺失一侧的标签集合为空"""
    gold_units: List[Set[str]] = []
    predicted_units: List[Set[str]] = []
    for sentence, prediction in zip(sentences, predictions):
        gold_scores: Dict[str, int] = {a.aspect: a.score for a in sentence.annotations}
        predicted = prediction.aspect_polarities or {}
        for aspect in sorted(set(gold_scores) | set(predicted)):
            gold_units.append(_gold_score_set(gold_scores[aspect]) if aspect in gold_scores else set())
            predicted_units.append(_polarity_set(predicted[aspect]) if aspect in predicted else set())
    return build_report(ASPECT_POLARITY, POLARITY_LABELS, gold_units, predicted_units)


def evaluate_bundle(bundle: ModelBundle, corpus: AnnotatedCorpus) -> List[MetricsReport]:
    bundle.check_taxonomy(corpus.taxonomy)
    logger.info(f"评估 {bundle.architecture.value} 模型: {corpus.sentence_count} 个句子")
    predictions = predict_corpus(bundle, corpus)
    return evaluate_predictions(bundle.architecture, bundle.taxonomy, corpus, predictions)


def window_sweep(
    bundle: ModelBundle, corpus: AnnotatedCorpus, windows: Sequence[Optional[int]]
) -> List[Tuple[Optional[int], MetricsReport]]:
    """对 aspect-polarity 模型包逐个窗口大小重新评估 aspect-polarity 报告"""
    if bundle.architecture is not Architecture.ASPECT_POLARITY:
        raise ConfigError(f"窗口扫描只适用于 aspect-polarity 模型包，当前为 {bundle.architecture.value}")
    results = []
    for n in windows:
        variant = bundle.model_copy(update={"window": n})
        reports = evaluate_bundle(variant, corpus)
        results.append((n, next(r for r in reports if r.group == ASPECT_POLARITY)))
    return results


def best_and_worst_labels(
    report: MetricsReport, k: int
) -> Tuple[List[LabelMetrics], List[LabelMetrics]]:
    """F1 最高与最低的 k 个标签（未定义按 0，同值按标签名）"""
    by_best = sorted(report.labels, key=lambda e: (-_zero(e.scores.f1), e.label))
    by_worst = sorted(report.labels, key=lambda e: (_zero(e.scores.f1), e.label))
    return by_best[:k], by_worst[:k]
