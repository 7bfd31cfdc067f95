#!/usr/bin/env python3
"""
标签体系模块

两层标签结构（类别 → aspect）以及极性标签空间。
标签体系是配置而非代码：默认体系以文本文件形式随包发布。
"""

import hashlib
import logging
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import (
    DuplicateNameError,
    EmptyCategoryError,
    ScoreRangeError,
    TaxonomyError,
    UnknownAspectError,
)

logger = logging.getLogger(__name__)

MIXED_SCORE = 99
COMMENT_CHAR = ";"
CATEGORY_PREFIX = "#"


class PolarityLabel(str, Enum):
    """极性标签；Mixed 只出现在标注中，分类器从不输出"""

    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"
    MIXED = "Mixed"


def is_valid_score(score: int) -> bool:
    return -9 <= score <= 9 or score == MIXED_SCORE


def polarity_from_score(p: int) -> PolarityLabel:
    """把 [-9, 9] ∪ {99} 的标注分数映射为极性标签"""
    if not is_valid_score(p):
        raise ScoreRangeError(p)
    if p == MIXED_SCORE:
        return PolarityLabel.MIXED
    if p > 0:
        return PolarityLabel.POSITIVE
    if p < 0:
        return PolarityLabel.NEGATIVE
    return PolarityLabel.NEUTRAL


class Category(BaseModel):
    """一个类别及其下属 aspect（保持文件顺序）"""

    model_config = ConfigDict(frozen=True)

    name: str
    aspects: Tuple[str, ...]


class Taxonomy(BaseModel):
    """两层标签体系，加载后不可变"""

    model_config = ConfigDict(frozen=True)

    categories: Tuple[Category, ...]
    version: str = ""

    @model_validator(mode="after")
    def _check(self) -> "Taxonomy":
        if not self.categories:
            raise EmptyCategoryError("标签体系中没有任何类别")
        seen_categories = set()
        owner: Dict[str, str] = {}
        for category in self.categories:
            if category.name in seen_categories:
                raise DuplicateNameError(f"类别名重复: {category.name!r}")
            seen_categories.add(category.name)
            if not category.aspects:
                raise EmptyCategoryError(f"类别 {category.name!r} 下没有 aspect")
            for aspect in category.aspects:
                if aspect in owner:
                    raise DuplicateNameError(
                        f"aspect 名重复: {aspect!r}（{owner[aspect]} / {category.name}）"
                    )
                owner[aspect] = category.name
        digest = "sha256:" + hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()[:16]
        if self.version and self.version != digest:
            raise TaxonomyError(f"版本标记与内容不符: {self.version} != {digest}")
        object.__setattr__(self, "version", digest)
        return self

    @property
    def category_names(self) -> List[str]:
        return [c.name for c in self.categories]

    @property
    def aspects(self) -> List[str]:
        """所有 aspect，按类别与文件顺序展开"""
        return [a for c in self.categories for a in c.aspects]

    def category(self, name: str) -> Category:
        for category in self.categories:
            if category.name == name:
                return category
        raise KeyError(name)

    def category_of(self, aspect: str) -> str:
        name = aspect.strip()
        for category in self.categories:
            if name in category.aspects:
                return category.name
        raise UnknownAspectError(aspect)

    def has_aspect(self, aspect: str) -> bool:
        name = aspect.strip()
        return any(name in c.aspects for c in self.categories)

    def to_text(self) -> str:
        """规范形式：文件顺序，单个结尾换行"""
        lines: List[str] = []
        for category in self.categories:
            lines.append(f"{CATEGORY_PREFIX} {category.name}")
            lines.extend(category.aspects)
        return "\n".join(lines) + "\n"


def parse_taxonomy(text: str) -> Taxonomy:
    """解析行式标签体系配置"""
    categories: List[Tuple[str, List[str]]] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split(COMMENT_CHAR, 1)[0].strip()
        if not line:
            continue
        if line.startswith(CATEGORY_PREFIX):
            name = line[len(CATEGORY_PREFIX):].strip()
            if not name:
                raise TaxonomyError("类别名为空", line=line_no)
            categories.append((name, []))
            continue
        if not categories:
            raise TaxonomyError(f"aspect {line!r} 出现在任何类别之前", line=line_no)
        categories[-1][1].append(line)

    return Taxonomy(
        categories=tuple(Category(name=name, aspects=tuple(aspects)) for name, aspects in categories)
    )


def load_taxonomy(path: Union[str, Path]) -> Taxonomy:
    """从文件加载并校验标签体系"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TaxonomyError(f"无法读取标签体系文件 {path}: {e}") from e
    taxonomy = parse_taxonomy(text)
    logger.info(
        f"加载标签体系 {path}: {len(taxonomy.categories)} 个类别, {len(taxonomy.aspects)} 个 aspect"
    )
    return taxonomy


def default_taxonomy_text() -> str:
    return resources.files("aspectmill.resources").joinpath("default_taxonomy.txt").read_text(
        encoding="utf-8"
    )


def default_taxonomy() -> Taxonomy:
    """随包发布的默认体系（8 个类别，32 个 aspect）"""
    return parse_taxonomy(default_taxonomy_text())


def category_of(taxonomy: Taxonomy, aspect: str) -> str:
    return taxonomy.category_of(aspect)


def resolve_taxonomy(path: Optional[Union[str, Path]]) -> Taxonomy:
    return load_taxonomy(path) if path is not None else default_taxonomy()
