"""
数据层

标签体系、标注语料以及合成的测试语料。
"""

from .corpus import (
    AnnotatedCorpus,
    Annotation,
    CorpusStats,
    Review,
    Sentence,
    compute_stats,
    load_corpus,
    save_corpus,
    split_corpus,
)
from .taxonomy import PolarityLabel, Taxonomy, default_taxonomy, load_taxonomy, parse_taxonomy

__all__ = [
    "AnnotatedCorpus",
    "Annotation",
    "CorpusStats",
    "Review",
    "Sentence",
    "compute_stats",
    "load_corpus",
    "save_corpus",
    "split_corpus",
    "PolarityLabel",
    "Taxonomy",
    "default_taxonomy",
    "load_taxonomy",
    "parse_taxonomy",
]
