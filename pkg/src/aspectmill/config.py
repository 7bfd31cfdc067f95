"""
配置与默认值

所有默认超参数集中在 DEFAULTS 一张表中，CLI 与库函数都从这里取值。
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

# 默认值表
DEFAULTS: Dict[str, Any] = {
    "epochs": 20,
    "learning_rate": 0.1,
    "l2": 1e-4,
    "threshold": 0.5,
    "seed": 13,
    "shuffle": True,
    "class_weighting": False,
    "class_weight_cap": 10.0,
    "k": 10,
    "window": None,  # None 表示整句 (n = inf)
    "split": 104 / 394,
    "format": "table",
}

# 日志级别环境变量
LOG_ENV_VAR = "ASPECTMILL_LOG"


class TrainConfig(BaseModel):
    """单个二分类器的训练参数"""

    model_config = ConfigDict(frozen=True)

    epochs: int = Field(default=DEFAULTS["epochs"], ge=1)
    learning_rate: float = Field(default=DEFAULTS["learning_rate"], gt=0)
    l2: float = Field(default=DEFAULTS["l2"], ge=0)
    seed: int = DEFAULTS["seed"]
    shuffle: bool = DEFAULTS["shuffle"]
    threshold: float = Field(default=DEFAULTS["threshold"], gt=0, lt=1)
    class_weighting: bool = DEFAULTS["class_weighting"]
    class_weight_cap: float = Field(default=DEFAULTS["class_weight_cap"], gt=0)

    @field_validator("learning_rate", "l2")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("必须是有限数值")
        return value


def parse_window(text: str) -> Optional[int]:
    """解析 --n 参数："inf" 表示整句窗口"""
    value = text.strip().lower()
    if value in ("inf", "infinity", "∞"):
        return None
    n = int(value)
    if n < 0:
        raise ValueError(f"窗口大小不能为负: {n}")
    return n


def format_window(window: Optional[int]) -> str:
    return "inf" if window is None else str(window)


class RunConfig(BaseModel):
    """一次 CLI 运行的完整有效配置"""

    model_config = ConfigDict(frozen=True)

    command: str
    taxonomy: Optional[Path] = None
    corpus: Optional[Path] = None
    test_corpus: Optional[Path] = None
    bundle: Optional[Path] = None
    architecture: str = "hier"
    lexicons: Optional[Path] = None
    train: TrainConfig = TrainConfig()
    k: int = Field(default=DEFAULTS["k"], ge=1)
    window: Optional[int] = DEFAULTS["window"]
    windows: Tuple[Optional[int], ...] = (1, 2, 5, None)
    split: Optional[float] = None
    output_format: str = DEFAULTS["format"]
    output: Optional[Path] = None
    train_out: Optional[Path] = None
    test_out: Optional[Path] = None
    check: bool = False

    @field_validator("split")
    @classmethod
    def _fraction(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and not 0.0 < value < 1.0:
            raise ValueError(f"划分比例必须在 (0, 1) 内: {value}")
        return value

    def echo(self) -> List[str]:
        """按键名排序的 key=value 列表，用于日志回显"""
        flat: Dict[str, Any] = {}
        for key, value in self.model_dump().items():
            if key == "train":
                for sub_key, sub_value in value.items():
                    flat[f"train.{sub_key}"] = sub_value
            elif key == "window":
                flat[key] = format_window(value)
            elif key == "windows":
                flat[key] = ",".join(format_window(n) for n in value)
            else:
                flat[key] = value
        return [f"{key}={flat[key]}" for key in sorted(flat)]
