#!/usr/bin/env python3
"""
报告格式化

table 格式为制表符分隔的文本表（统计表、结构对比表、极性表），
machine 格式为键排序的 JSON，两种输出都是确定的。
"""

import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..config import format_window
from ..data.corpus import (
    NO_LABEL,
    OTHER_CATEGORY,
    CorpusStats,
    LabelCounts,
    RankingEntry,
    aspect_polarity_ranking,
    polarity_ranking,
)
from ..data.taxonomy import Taxonomy
from .evaluation import (
    ASPECT_POLARITY,
    ASPECTS,
    CATEGORIES,
    INFERRED_CATEGORIES,
    POLARITY,
    LabelMetrics,
    MetricsReport,
    best_and_worst_labels,
)

TABLE = "table"
MACHINE = "machine"
OUTPUT_FORMATS = (TABLE, MACHINE)

GROUP_TITLES = {
    CATEGORIES: "Categories",
    INFERRED_CATEGORIES: "Categ. (Infer.)",
    ASPECTS: "Aspects",
    POLARITY: "Agnostic",
    ASPECT_POLARITY: "Specific",
}
STRUCTURE_GROUPS = (CATEGORIES, INFERRED_CATEGORIES, ASPECTS)
POLARITY_GROUPS = (POLARITY, ASPECT_POLARITY)

# 最佳/最差 aspect 列表长度
EXTREMES = 5


def percent(value: Optional[float]) -> str:
    """百分数保留一位小数；未定义输出 n/a"""
    return "n/a" if value is None else f"{100.0 * value:.1f}"


def _row(*cells: Any) -> str:
    return "\t".join(str(c) for c in cells)


def _dumps(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


# ==================== 语料统计 ====================


def _counts_row(label: str, c: LabelCounts) -> str:
    return _row(label, c.occurrence, c.positive, c.negative, c.neutral, c.mixed)


def _ranking_rows(entries: Sequence[RankingEntry]) -> List[str]:
    lines = [_row("Label", "pos/(pos+neg)", "Pos", "Neg", "Occ", "pos/occ", "neg/occ")]
    for e in entries:
        lines.append(
            _row(
                e.label,
                percent(e.ratio),
                e.positive,
                e.negative,
                e.occurrence,
                percent(e.positive_share),
                percent(e.negative_share),
            )
        )
    return lines


def render_stats_table(stats: CorpusStats, taxonomy: Taxonomy) -> str:
    lines = [_row("Label", "Occ", "Pos", "Neg", "Neutral", "Mixed")]
    for category in taxonomy.categories:
        lines.append(_counts_row(category.name, stats.categories[category.name]))
        for aspect in category.aspects:
            lines.append(_counts_row(f"  {aspect}", stats.aspects[aspect]))
    lines.append(_row(OTHER_CATEGORY, stats.no_label_sentences, "", "", "", ""))
    lines.append(_row(f"  {NO_LABEL}", stats.no_label_sentences, "", "", "", ""))
    lines.append("")
    lines.append(_row("reviews", stats.review_count))
    lines.append(_row("sentences", stats.sentence_count))
    lines.append(_row("annotations", stats.annotation_count))
    lines.append(_row("no-label sentences", stats.no_label_sentences))
    lines.append(_row("multi-aspect sentences", stats.multi_aspect_sentences))
    lines.append(_row("sentences per review", f"{stats.sentences_per_review:.2f}"))
    lines.append(_row("annotations per sentence", f"{stats.annotations_per_sentence:.2f}"))
    lines.append("")
    lines.append("# ranking: categories by pos/(pos+neg), descending")
    lines.extend(_ranking_rows(polarity_ranking(stats)))
    lines.append("")
    lines.append("# ranking: aspects by pos/(pos+neg), descending")
    lines.extend(_ranking_rows(aspect_polarity_ranking(stats)))
    return "\n".join(lines) + "\n"


def render_stats_machine(stats: CorpusStats) -> str:
    payload = stats.model_dump()
    payload["ranking"] = [e.model_dump() for e in polarity_ranking(stats)]
    payload["aspect_ranking"] = [e.model_dump() for e in aspect_polarity_ranking(stats)]
    return _dumps(payload)


def render_stats(stats: CorpusStats, taxonomy: Taxonomy, output_format: str = TABLE) -> str:
    if output_format == MACHINE:
        return render_stats_machine(stats)
    return render_stats_table(stats, taxonomy)


# ==================== 评估结果 ====================


def _label_rows(entries: Sequence[LabelMetrics]) -> List[str]:
    lines = [_row("Label", "TP", "FP", "FN", "TN", "P", "R", "F1", "Acc")]
    for e in entries:
        c, s = e.counts, e.scores
        lines.append(
            _row(e.label, c.tp, c.fp, c.fn, c.tn, percent(s.precision), percent(s.recall), percent(s.f1), percent(e.accuracy))
        )
    return lines


def render_metrics_table(results: Sequence[Tuple[str, Sequence[MetricsReport]]]) -> str:
    """
    results: (模型名, 报告列表) 序列；一个模型时即 eval 的输出，多个时为对比表
    """
    lines = ["# structure: macro / micro averages (%)"]
    lines.append(_row("Model", "Group", "macro P", "macro R", "macro F1", "micro P", "micro R", "micro F1"))
    for model, reports in results:
        for report in reports:
            if report.group not in STRUCTURE_GROUPS:
                continue
            m, u = report.macro, report.micro
            lines.append(
                _row(
                    model,
                    GROUP_TITLES[report.group],
                    percent(m.precision),
                    percent(m.recall),
                    percent(m.f1),
                    percent(u.precision),
                    percent(u.recall),
                    percent(u.f1),
                )
            )

    lines.append("")
    lines.append("# polarity: per label (%)")
    lines.append(_row("Model", "Unit", "Label", "P", "R", "F1", "Acc"))
    for model, reports in results:
        for report in reports:
            if report.group not in POLARITY_GROUPS:
                continue
            for e in report.labels:
                lines.append(
                    _row(
                        model,
                        GROUP_TITLES[report.group],
                        e.label,
                        percent(e.scores.precision),
                        percent(e.scores.recall),
                        percent(e.scores.f1),
                        percent(e.accuracy),
                    )
                )

    for model, reports in results:
        aspect_report = next((r for r in reports if r.group == ASPECTS), None)
        if aspect_report is None:
            continue
        best, worst = best_and_worst_labels(aspect_report, EXTREMES)
        lines.append("")
        lines.append(f"# {model}: aspects per label")
        lines.extend(_label_rows(aspect_report.labels))
        lines.append(_row("best", ", ".join(e.label for e in best)))
        lines.append(_row("worst", ", ".join(e.label for e in worst)))

    warnings = sum(r.undefined_count for _, reports in results for r in reports)
    lines.append("")
    lines.append(_row("warnings", f"{warnings} label(s) with undefined (0/0) metrics counted as 0"))
    return "\n".join(lines) + "\n"


def render_metrics_machine(results: Sequence[Tuple[str, Sequence[MetricsReport]]]) -> str:
    payload: List[Dict[str, Any]] = []
    for model, reports in results:
        payload.append(
            {
                "model": model,
                "reports": [
                    {**r.model_dump(), "undefined_count": r.undefined_count} for r in reports
                ],
            }
        )
    return _dumps(payload)


def render_metrics(
    results: Sequence[Tuple[str, Sequence[MetricsReport]]], output_format: str = TABLE
) -> str:
    if output_format == MACHINE:
        return render_metrics_machine(results)
    return render_metrics_table(results)


def render_sweep(
    results: Sequence[Tuple[Optional[int], MetricsReport]], output_format: str = TABLE
) -> str:
    """窗口扫描：每个 n 一组 aspect-polarity 指标"""
    if output_format == MACHINE:
        return _dumps([{"n": format_window(n), "report": r.model_dump()} for n, r in results])
    lines = [_row("n", "Label", "P", "R", "F1", "Acc")]
    for n, report in results:
        for e in report.labels:
            lines.append(
                _row(
                    format_window(n),
                    e.label,
                    percent(e.scores.precision),
                    percent(e.scores.recall),
                    percent(e.scores.f1),
                    percent(e.accuracy),
                )
            )
        lines.append(_row(format_window(n), "micro F1", "", "", percent(report.micro.f1), ""))
    return "\n".join(lines) + "\n"
