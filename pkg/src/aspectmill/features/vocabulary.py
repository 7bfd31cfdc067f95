#!/usr/bin/env python3
"""
词表

把 unigram / bigram / trigram 名称映射为稠密整数 id，并记录文档频率。
文档即句子；拟合后冻结，预测时的未知特征直接丢弃。
"""

import logging
import math
from collections import Counter
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, PrivateAttr, model_validator

from ..errors import EmptyTrainingSetError

logger = logging.getLogger(__name__)

MAX_ORDER = 3
NGRAM_JOINER = " "


def ngrams(tokens: Sequence[str], order: int) -> List[str]:
    """相邻 order 个 token 组成的 n-gram 名称（token 内不含空白）"""
    return [NGRAM_JOINER.join(tokens[i:i + order]) for i in range(len(tokens) - order + 1)]


def gram_order(name: str) -> int:
    return name.count(NGRAM_JOINER) + 1


class Vocabulary(BaseModel):
    model_config = ConfigDict(frozen=True)

    terms: Tuple[str, ...]
    df: Tuple[int, ...]
    n_documents: int

    _index: Dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> "Vocabulary":
        if len(self.terms) != len(self.df):
            raise ValueError("terms 与 df 长度不一致")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("词表中存在重复项")
        for term, count in zip(self.terms, self.df):
            if not 1 <= count <= self.n_documents:
                raise ValueError(f"df({term!r})={count} 不在 [1, {self.n_documents}] 内")
        return self

    def model_post_init(self, __context: Any) -> None:
        self._index = {term: i for i, term in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def id_of(self, name: str) -> Optional[int]:
        return self._index.get(name)

    def doc_freq(self, name: str) -> int:
        term_id = self.id_of(name)
        return 0 if term_id is None else self.df[term_id]

    def idf(self, name: str) -> float:
        """ln(N / df)；未收录的词返回 0"""
        count = self.doc_freq(name)
        return math.log(self.n_documents / count) if count else 0.0


def fit_vocabulary(train_sentences: Iterable[Sequence[str]]) -> Vocabulary:
    """统计 1~3 元语法的文档频率；id 按 (阶数, 名称) 排序分配，与语料顺序无关"""
    doc_freq: Counter = Counter()
    n_documents = 0
    for tokens in train_sentences:
        n_documents += 1
        grams = set()
        for order in range(1, MAX_ORDER + 1):
            grams.update(ngrams(tokens, order))
        doc_freq.update(grams)

    if n_documents == 0:
        raise EmptyTrainingSetError("无法在空训练集上拟合词表")

    terms = sorted(doc_freq, key=lambda name: (gram_order(name), name))
    logger.debug(f"词表拟合完成: {n_documents} 个句子, {len(terms)} 个特征")
    return Vocabulary(
        terms=tuple(terms),
        df=tuple(doc_freq[t] for t in terms),
        n_documents=n_documents,
    )
