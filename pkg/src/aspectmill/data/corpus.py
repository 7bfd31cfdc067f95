#!/usr/bin/env python3
"""
标注语料模块

读取、校验、划分与统计按句切分的评论语料。
语料文件为 JSON Lines：每行一条 review 记录。
"""

import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..errors import (
    ConfigError,
    CorpusError,
    DuplicateReviewError,
    OutputError,
    ScoreRangeError,
    TooFewReviewsError,
    UnknownAspectError,
)
from .taxonomy import PolarityLabel, Taxonomy, is_valid_score, polarity_from_score

logger = logging.getLogger(__name__)

# 统计表中“无标签”句子的合成行
OTHER_CATEGORY = "Other"
NO_LABEL = "No Label"


class Annotation(BaseModel):
    """一个 (aspect, 极性分数) 标注元组"""

    model_config = ConfigDict(frozen=True)

    aspect: str
    score: int

    @field_validator("aspect")
    @classmethod
    def _trim(cls, value: str) -> str:
        return value.strip()

    @field_validator("score")
    @classmethod
    def _score_range(cls, value: int) -> int:
        if not is_valid_score(value):
            raise ScoreRangeError(value)
        return value

    @property
    def polarity(self) -> PolarityLabel:
        return polarity_from_score(self.score)


class Sentence(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    annotations: Tuple[Annotation, ...] = ()

    @field_validator("text")
    @classmethod
    def _non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("句子文本为空")
        return value

    @field_validator("annotations")
    @classmethod
    def _unique_aspects(cls, value: Tuple[Annotation, ...]) -> Tuple[Annotation, ...]:
        aspects = [a.aspect for a in value]
        if len(aspects) != len(set(aspects)):
            raise ValueError(f"同一句子中 aspect 重复: {aspects}")
        return value

    @property
    def aspects(self) -> List[str]:
        return [a.aspect for a in self.annotations]


class Review(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    sentences: Tuple[Sentence, ...] = Field(min_length=1)


class AnnotatedCorpus(BaseModel):
    """一组 review 及其所依据的标签体系，加载后不可变"""

    model_config = ConfigDict(frozen=True)

    reviews: Tuple[Review, ...]
    taxonomy: Taxonomy

    def sentences(self) -> Iterator[Sentence]:
        for review in self.reviews:
            yield from review.sentences

    def sentence_list(self) -> List[Sentence]:
        return list(self.sentences())

    @property
    def sentence_count(self) -> int:
        return sum(len(r.sentences) for r in self.reviews)

    @property
    def annotation_count(self) -> int:
        return sum(len(s.annotations) for s in self.sentences())


def _check_review(review: Review, taxonomy: Taxonomy, record: Optional[int]) -> None:
    for sentence in review.sentences:
        for annotation in sentence.annotations:
            if not taxonomy.has_aspect(annotation.aspect):
                raise UnknownAspectError(annotation.aspect, record=record)


def _without_annotations(line: str, record: int) -> Any:
    """解析原始记录并去掉每个句子的 annotations 字段，不校验其内容"""
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise CorpusError(f"JSON 解析失败: {e.msg}", record=record) from None
    if isinstance(data, dict) and isinstance(data.get("sentences"), list):
        for sentence in data["sentences"]:
            if isinstance(sentence, dict):
                sentence.pop("annotations", None)
    return data


def build_corpus(reviews: Sequence[Review], taxonomy: Taxonomy) -> AnnotatedCorpus:
    """从内存中的 review 构建并校验语料"""
    seen = set()
    for review in reviews:
        if review.id in seen:
            raise DuplicateReviewError(f"review id 重复: {review.id!r}")
        seen.add(review.id)
        _check_review(review, taxonomy, None)
    return AnnotatedCorpus(reviews=tuple(reviews), taxonomy=taxonomy)


def parse_review(line: str, record: int, ignore_annotations: bool = False) -> Review:
    try:
        if ignore_annotations:
            return Review.model_validate(_without_annotations(line, record))
        return Review.model_validate_json(line)
    except ScoreRangeError as e:
        raise ScoreRangeError(e.score, record=record) from None
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ()))
        raise CorpusError(f"{where}: {first.get('msg')}", record=record) from None


def load_corpus(
    path: Union[str, Path], taxonomy: Taxonomy, ignore_annotations: bool = False
) -> AnnotatedCorpus:
    """
    加载 JSON Lines 语料；记录编号为 1 起始的行号

    ignore_annotations 为真时在校验前丢弃标注（预测只需要文本），标注本身的错误不会报出
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CorpusError(f"无法读取语料文件 {path}: {e}") from e

    reviews: List[Review] = []
    seen: Dict[str, int] = {}
    for record, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        review = parse_review(line, record, ignore_annotations)
        if review.id in seen:
            raise DuplicateReviewError(
                f"review id {review.id!r} 与第 {seen[review.id]} 条记录重复", record=record
            )
        seen[review.id] = record
        _check_review(review, taxonomy, record)
        reviews.append(review)

    corpus = AnnotatedCorpus(reviews=tuple(reviews), taxonomy=taxonomy)
    logger.info(
        f"加载语料 {path}: {len(reviews)} 条评论, {corpus.sentence_count} 个句子, "
        f"{corpus.annotation_count} 个标注"
    )
    return corpus


def dump_corpus(corpus: AnnotatedCorpus) -> str:
    return "".join(review.model_dump_json() + "\n" for review in corpus.reviews)


def save_corpus(corpus: AnnotatedCorpus, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(dump_corpus(corpus), encoding="utf-8")
    except OSError as e:
        raise OutputError(path, e.strerror or str(e)) from e


class LabelCounts(BaseModel):
    """单个标签的出现次数与极性分布"""

    occurrence: int = 0
    positive: int = 0
    negative: int = 0
    neutral: int = 0
    mixed: int = 0

    def add(self, other: "LabelCounts") -> "LabelCounts":
        return LabelCounts(
            occurrence=self.occurrence + other.occurrence,
            positive=self.positive + other.positive,
            negative=self.negative + other.negative,
            neutral=self.neutral + other.neutral,
            mixed=self.mixed + other.mixed,
        )


class CorpusStats(BaseModel):
    review_count: int
    sentence_count: int
    annotation_count: int
    no_label_sentences: int
    multi_aspect_sentences: int
    aspects: Dict[str, LabelCounts]
    categories: Dict[str, LabelCounts]
    sentences_per_review: float
    annotations_per_sentence: float


_POLARITY_FIELD = {
    PolarityLabel.POSITIVE: "positive",
    PolarityLabel.NEGATIVE: "negative",
    PolarityLabel.NEUTRAL: "neutral",
    PolarityLabel.MIXED: "mixed",
}


def compute_stats(corpus: AnnotatedCorpus) -> CorpusStats:
    """按类别与 aspect 统计出现次数和极性分布；与 review 顺序无关"""
    taxonomy = corpus.taxonomy
    tallies: Counter = Counter()
    sentence_count = 0
    annotation_count = 0
    no_label = 0
    multi_aspect = 0

    for sentence in corpus.sentences():
        sentence_count += 1
        annotation_count += len(sentence.annotations)
        if not sentence.annotations:
            no_label += 1
        if len(sentence.annotations) > 1:
            multi_aspect += 1
        for annotation in sentence.annotations:
            tallies[(annotation.aspect, "occurrence")] += 1
            tallies[(annotation.aspect, _POLARITY_FIELD[annotation.polarity])] += 1

    aspects = {
        aspect: LabelCounts(**{field: tallies[(aspect, field)] for field in LabelCounts.model_fields})
        for aspect in taxonomy.aspects
    }
    categories: Dict[str, LabelCounts] = {}
    for category in taxonomy.categories:
        total = LabelCounts()
        for aspect in category.aspects:
            total = total.add(aspects[aspect])
        categories[category.name] = total

    review_count = len(corpus.reviews)
    return CorpusStats(
        review_count=review_count,
        sentence_count=sentence_count,
        annotation_count=annotation_count,
        no_label_sentences=no_label,
        multi_aspect_sentences=multi_aspect,
        aspects=aspects,
        categories=categories,
        sentences_per_review=sentence_count / review_count if review_count else 0.0,
        annotations_per_sentence=annotation_count / sentence_count if sentence_count else 0.0,
    )


def split_corpus(
    corpus: AnnotatedCorpus, test_fraction: float, seed: int
) -> Tuple[AnnotatedCorpus, AnnotatedCorpus]:
    """按 review 粒度划分训练/测试集，给定 seed 时结果确定"""
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"测试集比例必须在 (0, 1) 内: {test_fraction}")
    total = len(corpus.reviews)
    if total < 2:
        raise TooFewReviewsError(f"至少需要 2 条评论才能划分，当前 {total} 条")

    # 取半进一：2.5 → 3
    n_test = min(max(int(test_fraction * total + 0.5), 1), total - 1)
    order = np.random.default_rng(seed).permutation(total)
    test_idx = set(int(i) for i in order[:n_test])

    train = tuple(r for i, r in enumerate(corpus.reviews) if i not in test_idx)
    test = tuple(r for i, r in enumerate(corpus.reviews) if i in test_idx)
    logger.info(f"划分语料: 训练 {len(train)} 条, 测试 {len(test)} 条 (seed={seed})")
    return (
        AnnotatedCorpus(reviews=train, taxonomy=corpus.taxonomy),
        AnnotatedCorpus(reviews=test, taxonomy=corpus.taxonomy),
    )


class RankingEntry(BaseModel):
    """极性排名的一行；ratio = pos / (pos + neg)，无极性提及时为 None"""

    label: str
    positive: int
    negative: int
    occurrence: int
    ratio: Optional[float]
    positive_share: Optional[float]
    negative_share: Optional[float]


def _rank(counts: Dict[str, LabelCounts]) -> List[RankingEntry]:
    entries = []
    for label, c in counts.items():
        polar = c.positive + c.negative
        entries.append(
            RankingEntry(
                label=label,
                positive=c.positive,
                negative=c.negative,
                occurrence=c.occurrence,
                ratio=c.positive / polar if polar else None,
                positive_share=c.positive / c.occurrence if c.occurrence else None,
                negative_share=c.negative / c.occurrence if c.occurrence else None,
            )
        )
    # 有定义的比例降序，同值按名称升序；无定义的排在最后
    entries.sort(key=lambda e: (e.ratio is None, -(e.ratio or 0.0), e.label))
    return entries


def polarity_ranking(stats: CorpusStats) -> List[RankingEntry]:
    return _rank(stats.categories)


def aspect_polarity_ranking(stats: CorpusStats) -> List[RankingEntry]:
    return _rank(stats.aspects)
