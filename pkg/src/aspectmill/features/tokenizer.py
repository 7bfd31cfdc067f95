"""
分词

小写化，按 Unicode 空白切分，首尾标点逐个拆成独立 token，
否定缩写后缀 "n't" 单独成 token。
"""

import unicodedata
from typing import List

NEGATION_SUFFIX = "n't"
_APOSTROPHES = {"’": "'", "ʼ": "'"}


def _is_punct(char: str) -> bool:
    return unicodedata.category(char).startswith("P")


def tokenize(text: str) -> List[str]:
    tokens: List[str] = []
    for chunk in text.lower().split():
        for src, dst in _APOSTROPHES.items():
            chunk = chunk.replace(src, dst)
        start, end = 0, len(chunk)
        while start < end and _is_punct(chunk[start]):
            start += 1
        while end > start and _is_punct(chunk[end - 1]):
            end -= 1

        tokens.extend(chunk[:start])
        core = chunk[start:end]
        if core.endswith(NEGATION_SUFFIX) and len(core) > len(NEGATION_SUFFIX):
            tokens.extend([core[: -len(NEGATION_SUFFIX)], NEGATION_SUFFIX])
        elif core:
            tokens.append(core)
        tokens.extend(chunk[end:])
    return tokens
