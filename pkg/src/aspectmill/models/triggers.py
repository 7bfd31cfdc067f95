"""
aspect 触发词选择

对每个 aspect，选出与 "该 aspect 是否出现" 互信息最高的 k 个 unigram。
互信息基于二值×二值列联表，四个单元格都做加一平滑，单位为 nat。
"""

import logging
from collections import Counter
from typing import Dict, List, Tuple

import numpy as np

from ..data.corpus import AnnotatedCorpus
from ..data.taxonomy import Taxonomy
from ..features.tokenizer import tokenize

logger = logging.getLogger(__name__)

SMOOTHING = 1.0


def mutual_information(n11: float, n10: float, n01: float, n00: float) -> float:
    """
    单个 2×2 列联表的互信息

    n11: 含该词且标注了该 aspect 的句子数；n10: 含该词未标注；
    n01: 不含该词但标注；n00: 都不含。
    """
    cells = np.array([[n11, n10], [n01, n00]], dtype=np.float64) + SMOOTHING
    joint = cells / cells.sum()
    return float(np.sum(joint * np.log(joint / np.outer(joint.sum(axis=1), joint.sum(axis=0)))))


def _mutual_information_vector(
    n11: np.ndarray, n10: np.ndarray, n01: np.ndarray, n00: np.ndarray
) -> np.ndarray:
    cells = np.stack([n11, n10, n01, n00]).astype(np.float64) + SMOOTHING
    joint = cells / cells.sum(axis=0)
    term_yes = joint[0] + joint[1]
    aspect_yes = joint[0] + joint[2]
    marginals = np.stack(
        [term_yes * aspect_yes, term_yes * (1 - aspect_yes), (1 - term_yes) * aspect_yes, (1 - term_yes) * (1 - aspect_yes)]
    )
    return np.sum(joint * np.log(joint / marginals), axis=0)


def ranked_terms(corpus: AnnotatedCorpus, taxonomy: Taxonomy) -> Dict[str, List[Tuple[str, float]]]:
    """每个 aspect 的 (词, 互信息) 列表，互信息降序，同值按字典序"""

    term_df: Counter = Counter()
    joint: Dict[str, Counter] = {aspect: Counter() for aspect in taxonomy.aspects}
    aspect_df: Counter = Counter()
    n_sentences = 0
    for sentence in corpus.sentences():
        n_sentences += 1
        terms = set(tokenize(sentence.text))
        term_df.update(terms)
        for aspect in set(sentence.aspects):
            aspect_df[aspect] += 1
            joint[aspect].update(terms)

    vocabulary: List[str] = sorted(term_df)
    df = np.array([term_df[t] for t in vocabulary], dtype=np.float64)
    ranking: Dict[str, List[Tuple[str, float]]] = {}
    for aspect in taxonomy.aspects:
        n11 = np.array([joint[aspect][t] for t in vocabulary], dtype=np.float64)
        n10 = df - n11
        n01 = aspect_df[aspect] - n11
        n00 = n_sentences - df - n01
        mi = _mutual_information_vector(n11, n10, n01, n00) if vocabulary else np.array([])
        order = sorted(range(len(vocabulary)), key=lambda i: (-mi[i], vocabulary[i]))
        ranking[aspect] = [(vocabulary[i], float(mi[i])) for i in order]
    return ranking


def select_trigger_terms(
    corpus: AnnotatedCorpus, taxonomy: Taxonomy, k: int
) -> Dict[str, Tuple[str, ...]]:
    """每个 aspect 的前 k 个触发词；k 超过词表大小时返回全部"""
    if k < 1:
        raise ValueError(f"k 必须为正整数: {k}")
    triggers = {
        aspect: tuple(term for term, _ in ranked[:k])
        for aspect, ranked in ranked_terms(corpus, taxonomy).items()
    }
    logger.info(f"已为 {len(triggers)} 个 aspect 选出触发词 (k={k})")
    return triggers
