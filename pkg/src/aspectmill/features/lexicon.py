#!/usr/bin/env python3
"""
词典

词典文件格式（UTF-8）：
    kind: PolarityWord
    ; 注释
    term
    term<TAB>prior
词典名取文件名（不含扩展名）。
"""

import hashlib
import logging
import math
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import LexiconError

logger = logging.getLogger(__name__)

KIND_HEADER = "kind:"
COMMENT_CHAR = ";"
LEXICON_SUFFIXES = (".txt", ".lex", ".tsv")


class LexiconKind(str, Enum):
    ASPECT_CUE = "AspectCue"
    CATEGORY_CUE = "CategoryCue"
    POLARITY_WORD = "PolarityWord"
    DIMINISHER = "Diminisher"
    INTENSIFIER = "Intensifier"
    PRIOR_SCORED = "PriorScored"
    NEGATION = "Negation"


class Lexicon(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: LexiconKind
    entries: Dict[str, Optional[float]]

    @model_validator(mode="after")
    def _check(self) -> "Lexicon":
        for term, prior in self.entries.items():
            if term != term.lower() or not term.strip():
                raise LexiconError(f"词典 {self.name}: 词条必须为小写非空: {term!r}")
            if self.kind is LexiconKind.PRIOR_SCORED:
                if prior is None or not math.isfinite(prior):
                    raise LexiconError(f"词典 {self.name}: 词条 {term!r} 缺少有限的先验分数")
            elif prior is not None:
                raise LexiconError(f"词典 {self.name}: {self.kind.value} 词典不接受先验分数 ({term!r})")
        return self

    def to_text(self) -> str:
        lines = [f"{KIND_HEADER} {self.kind.value}"]
        for term in sorted(self.entries):
            prior = self.entries[term]
            lines.append(term if prior is None else f"{term}\t{prior!r}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return "sha256:" + hashlib.sha256(
            f"{self.name}\n{self.to_text()}".encode("utf-8")
        ).hexdigest()


def parse_lexicon(text: str, name: str) -> Lexicon:
    kind: Optional[LexiconKind] = None
    entries: Dict[str, Optional[float]] = {}
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split(COMMENT_CHAR, 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith(KIND_HEADER):
            value = line[len(KIND_HEADER):].strip()
            try:
                kind = LexiconKind(value)
            except ValueError:
                raise LexiconError(f"未知词典类型: {value!r}", line=line_no) from None
            continue
        if kind is None:
            raise LexiconError("缺少 'kind: <Kind>' 头部", line=line_no)

        term, _, prior_text = line.partition("\t")
        term = term.strip().lower()
        prior: Optional[float] = None
        if prior_text.strip():
            try:
                prior = float(prior_text)
            except ValueError:
                raise LexiconError(f"无法解析先验分数: {prior_text!r}", line=line_no) from None
        if term in entries:
            raise LexiconError(f"词条重复: {term!r}", line=line_no)
        entries[term] = prior

    if kind is None:
        raise LexiconError(f"词典 {name} 缺少 'kind: <Kind>' 头部")
    return Lexicon(name=name, kind=kind, entries=entries)


def load_lexicon(path: Union[str, Path]) -> Lexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LexiconError(f"无法读取词典文件 {path}: {e}") from e
    return parse_lexicon(text, path.stem)


def load_lexicon_dir(directory: Union[str, Path]) -> List[Lexicon]:
    """按文件名顺序加载目录中的全部词典"""
    directory = Path(directory)
    if not directory.is_dir():
        raise LexiconError(f"词典目录不存在: {directory}")
    lexicons = [
        load_lexicon(path)
        for path in sorted(directory.iterdir())
        if path.is_file() and path.suffix in LEXICON_SUFFIXES
    ]
    logger.info(f"从 {directory} 加载 {len(lexicons)} 个词典: {[lex.name for lex in lexicons]}")
    return lexicons


@lru_cache(maxsize=1)
def default_negation_lexicon() -> Lexicon:
    text = resources.files("aspectmill.resources").joinpath("negation.txt").read_text(encoding="utf-8")
    return parse_lexicon(text, "negation")


def negation_triggers(lexicons: Sequence[Lexicon]) -> FrozenSet[str]:
    """Negation 词典的并集；没有时使用默认触发词"""
    found = [lex for lex in lexicons if lex.kind is LexiconKind.NEGATION]
    if not found:
        found = [default_negation_lexicon()]
    return frozenset(term for lex in found for term in lex.entries)
