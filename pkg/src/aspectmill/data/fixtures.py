#!/usr/bin/env python3
"""
合成语料生成

- table1_corpus: 逐 aspect 复现课程评论语料统计表 (Occ/Pos/Neg) 的语料
- separable_corpus: 每个 aspect 有唯一线索词的可分语料，用于端到端检查
"""

import re
from typing import Dict, List, Tuple

import numpy as np

from ..errors import TaxonomyMismatchError
from .corpus import AnnotatedCorpus, Annotation, Review, Sentence, build_corpus
from .taxonomy import Taxonomy

# aspect -> (Occ, Pos, Neg)；剩余提及按中性编码
TABLE1_COUNTS: Dict[str, Tuple[int, int, int]] = {
    "Average Demand": (60, 23, 25),
    "Up-To-Date": (58, 35, 20),
    "Practical Relevance": (50, 36, 8),
    "Quality of Contents": (229, 143, 66),
    "Exams": (77, 35, 19),
    "Production Quality": (7, 5, 2),
    "Accessibility": (22, 20, 2),
    "Extent of Materials": (28, 21, 3),
    "Exercise Materials": (44, 29, 13),
    "Supervision": (487, 409, 61),
    "Revision Time": (89, 78, 10),
    "Organization": (173, 107, 54),
    "Teaching Competence": (124, 101, 13),
    "Didactics of Materials": (308, 220, 72),
    "Justified Grading": (20, 15, 3),
    "Revision Quality": (75, 48, 22),
    "Usefulness": (119, 84, 28),
    "Activity": (35, 29, 6),
    "User-Friendliness": (20, 8, 11),
    "Features": (22, 18, 2),
    "Basic Tuition": (78, 48, 17),
    "Additional Charges": (10, 7, 3),
    "Scholarships": (2, 0, 0),
    "Seminar Contents": (84, 59, 14),
    "Management": (18, 12, 5),
    "Locations": (9, 7, 2),
    "Communications": (16, 15, 1),
    "Flexibility": (103, 96, 2),
    "Recommendation": (77, 71, 4),
    "Personal Benefit": (74, 61, 6),
    "Overall Satisfaction": (236, 215, 17),
    "Learning Effort": (82, 29, 45),
}
TABLE1_REVIEWS = 394
TABLE1_SENTENCES = 2481
TABLE1_NO_LABEL = 345

_POLARITY_WORDS = {5: "good", -5: "bad", 0: "okay"}


def cue_token(aspect: str) -> str:
    """aspect 的唯一线索词，如 "Basic Tuition" -> "cuebasictuition" """
    return "cue" + re.sub(r"[^0-9a-z]", "", aspect.lower())


def _chunk_reviews(sentences: List[Sentence], n_reviews: int, prefix: str) -> List[Review]:
    base, extra = divmod(len(sentences), n_reviews)
    reviews = []
    start = 0
    for index in range(n_reviews):
        size = base + (1 if index < extra else 0)
        reviews.append(Review(id=f"{prefix}{index + 1:04d}", sentences=tuple(sentences[start:start + size])))
        start += size
    return reviews


def table1_corpus(taxonomy: Taxonomy) -> AnnotatedCorpus:
    """确定性地生成统计表语料：394 条评论、2481 个句子、345 个无标签句子"""
    missing = [a for a in taxonomy.aspects if a not in TABLE1_COUNTS]
    if missing:
        raise TaxonomyMismatchError(f"统计表语料只适用于默认标签体系，缺少计数的 aspect: {missing}")
    items: List[Annotation] = []
    for aspect in taxonomy.aspects:
        occ, pos, neg = TABLE1_COUNTS[aspect]
        items += [Annotation(aspect=aspect, score=5)] * pos
        items += [Annotation(aspect=aspect, score=-5)] * neg
        items += [Annotation(aspect=aspect, score=0)] * (occ - pos - neg)

    labelled = TABLE1_SENTENCES - TABLE1_NO_LABEL
    buckets: List[List[Annotation]] = [[] for _ in range(labelled)]
    # 轮转分配；单个 aspect 的提及数小于句子数，因此同一句内不会重复
    for index, item in enumerate(items):
        buckets[index % labelled].append(item)

    sentences = []
    for bucket in buckets:
        text = " and ".join(f"the {a.aspect.lower()} was {_POLARITY_WORDS[a.score]}" for a in bucket)
        sentences.append(Sentence(text=text, annotations=tuple(bucket)))
    sentences += [Sentence(text="nothing else to report")] * TABLE1_NO_LABEL

    return build_corpus(_chunk_reviews(sentences, TABLE1_REVIEWS, "t1-"), taxonomy)


def separable_corpus(
    taxonomy: Taxonomy, sentences_per_aspect: int = 6, seed: int = 7
) -> AnnotatedCorpus:
    """
    每个 aspect 有唯一线索词，极性由 "was great/awful/okay" 决定。

    句子顺序由 seed 打乱，每 4 句组成一条评论。
    """
    sentences: List[Sentence] = []
    scores = (6, -6, 0)
    words = {6: "great", -6: "awful", 0: "okay"}
    for aspect in taxonomy.aspects:
        for index in range(sentences_per_aspect):
            score = scores[index % len(scores)]
            sentences.append(
                Sentence(
                    text=f"the {cue_token(aspect)} was {words[score]}",
                    annotations=(Annotation(aspect=aspect, score=score),),
                )
            )
    for _ in range(max(1, len(taxonomy.aspects) // 2)):
        sentences.append(Sentence(text="nothing relevant here"))

    order = np.random.default_rng(seed).permutation(len(sentences))
    shuffled = [sentences[int(i)] for i in order]
    n_reviews = max(2, (len(shuffled) + 3) // 4)
    return build_corpus(_chunk_reviews(shuffled, n_reviews, "syn-"), taxonomy)
