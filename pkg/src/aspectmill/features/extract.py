#!/usr/bin/env python3
"""
特征抽取

把一个句子的 token 序列转换为稀疏特征向量 {feature id: 值}。
每个特征族占用独立的 id 命名空间（高 32 位为族编号）：
- TEXT:     词表 id（tf·idf 用 unigram，n-gram 指示特征用 bigram/trigram）
- LEXICON:  词典计数/先验分数，id 由 "词典名:槽位" 的 CRC32 得到
- NEGATION: 否定叉积特征 NEG⊗w，id 由 w 的 CRC32 得到
- CATEGORY: 类别预测传播特征（见 models.architectures）
"""

import math
import zlib
from collections import Counter
from enum import Enum, IntEnum
from typing import AbstractSet, Dict, Iterable, List, Optional, Sequence

from ..errors import LexiconError
from .lexicon import Lexicon, LexiconKind, negation_triggers
from .vocabulary import Vocabulary, ngrams

FeatureVector = Dict[int, float]

_LOCAL_BITS = 32
_LOCAL_MASK = (1 << _LOCAL_BITS) - 1


class Family(IntEnum):
    TEXT = 1
    LEXICON = 2
    NEGATION = 3
    CATEGORY = 4


class Profile(str, Enum):
    ASPECT = "AspectProfile"
    POLARITY = "PolarityProfile"


ASPECT_LEXICON_KINDS = frozenset({LexiconKind.ASPECT_CUE, LexiconKind.CATEGORY_CUE})
POLARITY_LEXICON_KINDS = frozenset(
    {
        LexiconKind.POLARITY_WORD,
        LexiconKind.DIMINISHER,
        LexiconKind.INTENSIFIER,
        LexiconKind.PRIOR_SCORED,
    }
)


def feature_id(family: Family, local: int) -> int:
    return (int(family) << _LOCAL_BITS) | (local & _LOCAL_MASK)


def hashed_feature_id(family: Family, key: str) -> int:
    return feature_id(family, zlib.crc32(key.encode("utf-8")))


def family_of(fid: int) -> Family:
    return Family(fid >> _LOCAL_BITS)


def _put(vector: FeatureVector, fid: int, value: float) -> None:
    if value != 0.0 and math.isfinite(value):
        vector[fid] = value


def merge(*vectors: FeatureVector) -> FeatureVector:
    """按分量合并；各族命名空间不相交，不会发生覆盖"""
    merged: FeatureVector = {}
    for vector in vectors:
        merged.update(vector)
    return merged


def tfidf_features(tokens: Sequence[str], vocab: Vocabulary) -> FeatureVector:
    """tf(t) · ln(N / df(t))；df = N 的词权重为 0 被省略，未登录词省略"""
    vector: FeatureVector = {}
    for term, tf in Counter(tokens).items():
        term_id = vocab.id_of(term)
        if term_id is None:
            continue
        _put(vector, feature_id(Family.TEXT, term_id), tf * math.log(vocab.n_documents / vocab.df[term_id]))
    return vector


def ngram_features(
    tokens: Sequence[str], vocab: Vocabulary, orders: Iterable[int] = (2, 3)
) -> FeatureVector:
    """已收录的 bigram/trigram 出现指示（值恒为 1）"""
    vector: FeatureVector = {}
    for order in orders:
        for gram in ngrams(tokens, order):
            term_id = vocab.id_of(gram)
            if term_id is not None:
                vector[feature_id(Family.TEXT, term_id)] = 1.0
    return vector


def lexicon_features(
    tokens: Sequence[str],
    lexicons: Sequence[Lexicon],
    kinds: Optional[AbstractSet[LexiconKind]] = None,
) -> FeatureVector:
    """
    词典特征：

    - AspectCue / CategoryCue / PolarityWord / Diminisher / Intensifier：匹配 token 数
    - PriorScored：正先验之和、负先验绝对值之和、零先验匹配数
    - Negation 词典不产生特征（作为否定触发词使用）
    """
    vector: FeatureVector = {}
    for lexicon in lexicons:
        if lexicon.kind is LexiconKind.NEGATION:
            continue
        if kinds is not None and lexicon.kind not in kinds:
            continue
        matches = [t for t in tokens if t in lexicon.entries]
        if lexicon.kind is LexiconKind.PRIOR_SCORED:
            priors = [lexicon.entries[t] or 0.0 for t in matches]
            _put(vector, hashed_feature_id(Family.LEXICON, f"{lexicon.name}:pos"), sum(p for p in priors if p > 0))
            _put(vector, hashed_feature_id(Family.LEXICON, f"{lexicon.name}:neg"), sum(-p for p in priors if p < 0))
            _put(vector, hashed_feature_id(Family.LEXICON, f"{lexicon.name}:zero"), float(sum(1 for p in priors if p == 0)))
        else:
            _put(vector, hashed_feature_id(Family.LEXICON, f"{lexicon.name}:count"), float(len(matches)))
    return vector


def lexicon_feature_id(lexicon_name: str, slot: str) -> int:
    return hashed_feature_id(Family.LEXICON, f"{lexicon_name}:{slot}")


def lexicon_slots(lexicon: Lexicon) -> List[str]:
    if lexicon.kind is LexiconKind.NEGATION:
        return []
    if lexicon.kind is LexiconKind.PRIOR_SCORED:
        return ["pos", "neg", "zero"]
    return ["count"]


def check_lexicon_feature_ids(lexicons: Sequence[Lexicon]) -> None:
    """
    词典特征 id 必须一一对应 "词典名:槽位"

    重名词典或 CRC32 碰撞会让两个特征共用一个权重，此时抛出 LexiconError。
    """
    owners: Dict[int, str] = {}
    for lexicon in lexicons:
        for slot in lexicon_slots(lexicon):
            key = f"{lexicon.name}:{slot}"
            fid = hashed_feature_id(Family.LEXICON, key)
            if fid in owners:
                raise LexiconError(f"词典特征 id 冲突: {owners[fid]!r} 与 {key!r}（检查是否有重名词典）")
            owners[fid] = key


def negation_feature_id(token: str) -> int:
    return hashed_feature_id(Family.NEGATION, token)


def negation_features(tokens: Sequence[str], triggers: AbstractSet[str]) -> FeatureVector:
    """
    第一个否定触发词之后的每个 token w 生成二值特征 NEG⊗w

    特征是二值的，重复出现的 w 只占一个分量。
    """
    for position, token in enumerate(tokens):
        if token in triggers:
            return {negation_feature_id(w): 1.0 for w in tokens[position + 1:]}
    return {}


def assemble(
    tokens: Sequence[str],
    vocab: Vocabulary,
    lexicons: Sequence[Lexicon],
    profile: Profile,
) -> FeatureVector:
    if profile is Profile.ASPECT:
        return merge(
            tfidf_features(tokens, vocab),
            ngram_features(tokens, vocab, orders=(2, 3)),
            lexicon_features(tokens, lexicons, ASPECT_LEXICON_KINDS),
        )
    return merge(
        ngram_features(tokens, vocab, orders=(2,)),
        lexicon_features(tokens, lexicons, POLARITY_LEXICON_KINDS),
        negation_features(tokens, negation_triggers(lexicons)),
    )
