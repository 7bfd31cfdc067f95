#!/usr/bin/env python3
"""
CLI 工具函数模块
提供通用的辅助函数
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..config import parse_window
from ..errors import (
    AspectMillError,
    BundleFormatError,
    CorpusError,
    InvariantViolation,
    LexiconError,
    OutputError,
    TaxonomyError,
    TaxonomyMismatchError,
)
from ..models.bundle import SentencePrediction

# 错误类型 → 建议操作
_HINTS = {
    TaxonomyError: ["检查标签体系文件：'# 类别' 行后跟 aspect 行，名称不可重复"],
    CorpusError: ["检查语料文件：每行一个 JSON 对象 {id, sentences: [{text, annotations}]}"],
    LexiconError: ["检查词典目录是否存在，文件是否以 'kind: <Kind>' 开头", "预测时必须使用训练时的同一组词典"],
    BundleFormatError: ["确认模型包由当前版本的 aspectmill train 生成"],
    TaxonomyMismatchError: ["使用训练模型包时的同一份标签体系"],
    InvariantViolation: ["这是内部错误，请附上日志报告问题"],
    OutputError: ["确认输出目录存在且可写"],
}


def _hints_for(error: AspectMillError) -> List[str]:
    for error_type, hints in _HINTS.items():
        if isinstance(error, error_type):
            return hints
    return ["使用 --help 查看参数说明"]


def _create_failure_response(action: str, error: AspectMillError) -> str:
    """创建标准化的失败响应（写到 stderr）"""
    response = f"""# ❌ {action}失败

## 🔍 失败状态
- **错误类型**: {type(error).__name__}
- **错误信息**: {error}
- **退出码**: {error.exit_code}

## 🎯 建议操作
"""
    for i, hint in enumerate(_hints_for(error), 1):
        response += f"{i}. {hint}\n"
    return response


def parse_windows(text: str) -> List[Optional[int]]:
    """解析逗号分隔的窗口列表，如 "1,2,5,inf" """
    return [parse_window(part) for part in text.split(",") if part.strip()]


def prediction_record(review_id: str, index: int, text: str, prediction: SentencePrediction) -> Dict[str, Any]:
    """predict 输出的一行记录"""
    record: Dict[str, Any] = {
        "review": review_id,
        "sentence": index,
        "text": text,
        "categories": list(prediction.categories),
        "aspects": list(prediction.aspects),
        "polarity": prediction.polarity.value,
    }
    if prediction.aspect_polarities is not None:
        record["aspect_polarities"] = {
            aspect: label.value for aspect, label in sorted(prediction.aspect_polarities.items())
        }
    return record


def render_jsonl(records: Sequence[Dict[str, Any]]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


def write_output(text: str, output: Optional[Union[str, Path]], stream) -> None:
    """写到 --output 指定的文件，未指定时写到 stream"""
    if output is None:
        stream.write(text)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(output, e.strerror or str(e)) from e
