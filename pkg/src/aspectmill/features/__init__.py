"""
特征层

分词、词表、词典与稀疏特征向量。
"""

from .extract import FeatureVector, Profile, assemble
from .lexicon import Lexicon, LexiconKind, load_lexicon, load_lexicon_dir
from .tokenizer import tokenize
from .vocabulary import Vocabulary, fit_vocabulary

__all__ = [
    "FeatureVector",
    "Profile",
    "assemble",
    "Lexicon",
    "LexiconKind",
    "load_lexicon",
    "load_lexicon_dir",
    "tokenize",
    "Vocabulary",
    "fit_vocabulary",
]
