#!/usr/bin/env python3
"""
模型包

train 的可序列化产物：全部分类器、架构元数据、词表、词典及其摘要、
标签体系副本、aspect 触发词与窗口大小。单文件 JSON，带格式版本号。
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..config import TrainConfig
from ..data.taxonomy import PolarityLabel, Taxonomy
from ..errors import BundleFormatError, LexiconError, OutputError, TaxonomyMismatchError
from ..features.lexicon import Lexicon
from ..features.vocabulary import Vocabulary
from .learner import LinearModel

logger = logging.getLogger(__name__)

FORMAT_NAME = "aspectmill-bundle"
FORMAT_VERSION = 1

POLAR = "polar"
POSITIVE = "positive"
NEGATIVE = "negative"
POLARITY_DETECTORS = (POLAR, POSITIVE, NEGATIVE)


class Architecture(str, Enum):
    FLAT = "flat"
    HIERARCHICAL = "hier"
    PROPAGATION = "prop"
    ASPECT_POLARITY = "aspect-polarity"


class ModelBundle(BaseModel):
    model_config = ConfigDict(frozen=True)

    format: str = FORMAT_NAME
    version: int = FORMAT_VERSION
    architecture: Architecture
    taxonomy: Taxonomy
    vocabulary: Vocabulary
    lexicons: Tuple[Lexicon, ...] = ()
    lexicon_digests: Dict[str, str] = Field(default_factory=dict)
    category_models: Dict[str, LinearModel]
    aspect_models: Dict[str, LinearModel]
    polarity_models: Dict[str, LinearModel]
    trigger_terms: Dict[str, Tuple[str, ...]] = Field(default_factory=dict)
    window: Optional[int] = None
    train_config: TrainConfig = TrainConfig()
    label_sizes: Dict[str, int] = Field(default_factory=dict)
    label_accuracy: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> "ModelBundle":
        if set(self.category_models) != set(self.taxonomy.category_names):
            raise BundleFormatError("类别模型与标签体系的类别集合不一致")
        if set(self.aspect_models) != set(self.taxonomy.aspects):
            raise BundleFormatError("aspect 模型与标签体系的 aspect 集合不一致")
        if set(self.polarity_models) != set(POLARITY_DETECTORS):
            raise BundleFormatError(f"极性模型必须恰好为 {POLARITY_DETECTORS}")
        if self.architecture is Architecture.ASPECT_POLARITY:
            if set(self.trigger_terms) != set(self.taxonomy.aspects):
                raise BundleFormatError("aspect-polarity 模型包缺少部分 aspect 的触发词")
        if self.window is not None and self.window < 0:
            raise BundleFormatError(f"窗口大小不能为负: {self.window}")
        return self

    def check_lexicons(self, lexicons: Sequence[Lexicon]) -> None:
        """给定词典目录必须与训练时的词典摘要一致"""
        given = {lex.name: lex.digest() for lex in lexicons}
        if given != self.lexicon_digests:
            raise LexiconError(
                f"词典与模型包不一致: 模型包 {sorted(self.lexicon_digests)}, 给定 {sorted(given)}"
            )

    def check_taxonomy(self, taxonomy: Taxonomy) -> None:
        if taxonomy.version != self.taxonomy.version:
            raise TaxonomyMismatchError(
                f"标签体系不一致: 模型包 {self.taxonomy.version}, 给定 {taxonomy.version}"
            )


class SentencePrediction(BaseModel):
    """
    一个句子的预测结果。

    polarity 为句级极性；aspect_polarities 仅 aspect-polarity 架构输出。
    Mixed 永远不会出现在预测中。
    """

    model_config = ConfigDict(frozen=True)

    categories: Tuple[str, ...]
    aspects: Tuple[str, ...]
    polarity: PolarityLabel
    aspect_polarities: Optional[Dict[str, PolarityLabel]] = None


def dump_bundle(bundle: ModelBundle) -> str:
    return bundle.model_dump_json()


def save_bundle(bundle: ModelBundle, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(dump_bundle(bundle) + "\n", encoding="utf-8")
    except OSError as e:
        raise OutputError(path, e.strerror or str(e)) from e
    logger.info(f"模型包已写入 {path} ({bundle.architecture.value})")


def parse_bundle(text: str) -> ModelBundle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BundleFormatError(f"模型包不是合法 JSON: {e}") from e
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise BundleFormatError("不是 aspectmill 模型包")
    if data.get("version") != FORMAT_VERSION:
        raise BundleFormatError(
            f"模型包格式版本不匹配: 文件 {data.get('version')}, 当前支持 {FORMAT_VERSION}"
        )
    try:
        return ModelBundle.model_validate(data)
    except ValidationError as e:
        raise BundleFormatError(f"模型包内容非法: {e.errors()[0].get('msg')}") from e


def load_bundle(path: Union[str, Path]) -> ModelBundle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BundleFormatError(f"无法读取模型包 {path}: {e}") from e
    bundle = parse_bundle(text)
    logger.info(f"加载模型包 {path}: 架构 {bundle.architecture.value}")
    return bundle
