#!/usr/bin/env python3
"""
二分类线性模型

L2 正则化的逻辑回归，使用随机梯度下降训练。
每个类别、aspect 和极性判断各用一个该模型（one-vs-rest）。
"""

import logging
import math
import zlib
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import TrainConfig
from ..errors import ConfigError, EmptyTrainingSetError
from ..features.extract import FeatureVector

logger = logging.getLogger(__name__)

Example = Tuple[FeatureVector, bool]

# 常量模型使用的 logit，σ(-30) ≈ 9.4e-14
CONSTANT_LOGIT = 30.0
# 缩放因子低于该值时把缩放折回权重
_MIN_SCALE = 1e-9


class LinearModel(BaseModel):
    """权重 + 偏置 + 判定阈值，以及训练元数据"""

    model_config = ConfigDict(frozen=True)

    weights: Dict[int, float]
    bias: float
    threshold: float = Field(default=0.5, gt=0, lt=1)
    epochs: int = 0
    learning_rate: float = 0.0
    l2: float = 0.0
    seed: int = 0
    positive_weight: float = 1.0


def derive_seed(seed: int, label: str) -> int:
    """每个标签独立的种子：seed ⊕ crc32(label)，与调度顺序无关"""
    return (seed ^ zlib.crc32(label.encode("utf-8"))) & 0xFFFFFFFF


def sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def decision_value(model: LinearModel, features: FeatureVector) -> float:
    weights = model.weights
    return model.bias + sum(weights.get(fid, 0.0) * value for fid, value in features.items())


def score(model: LinearModel, features: FeatureVector) -> float:
    """σ(w·x + b)；模型中不存在的特征不起作用"""
    return sigmoid(decision_value(model, features))


def predict(model: LinearModel, features: FeatureVector) -> bool:
    return score(model, features) >= model.threshold


def constant_model(label: bool, config: TrainConfig) -> LinearModel:
    """没有训练数据时使用的常量模型"""
    return LinearModel(
        weights={},
        bias=CONSTANT_LOGIT if label else -CONSTANT_LOGIT,
        threshold=config.threshold,
        seed=config.seed,
    )


def _columns(examples: Sequence[Example]) -> Tuple[List[int], List[Tuple[np.ndarray, np.ndarray]]]:
    # 值为 0 的分量不占列
    nonzero = [[(fid, value) for fid, value in features.items() if value != 0.0] for features, _ in examples]
    columns = sorted({fid for items in nonzero for fid, _ in items})
    position = {fid: i for i, fid in enumerate(columns)}
    rows = [
        (
            np.array([position[fid] for fid, _ in items], dtype=np.intp),
            np.array([value for _, value in items], dtype=np.float64),
        )
        for items in nonzero
    ]
    return columns, rows


def _positive_weight(labels: np.ndarray, config: TrainConfig) -> float:
    if not config.class_weighting:
        return 1.0
    positives = float(labels.sum())
    negatives = float(len(labels) - positives)
    if positives == 0 or negatives == 0:
        return 1.0
    return min(negatives / positives, config.class_weight_cap)


def train_binary(
    examples: Sequence[Example], config: TrainConfig, seed: Optional[int] = None
) -> LinearModel:
    """
    SGD 最小化 mean(logloss) + (l2 / 2)·||w||²

    Args:
        examples: (特征向量, 标签) 列表
        config: 训练参数
        seed: 覆盖 config.seed，用于按标签派生种子

    权重以 w = scale · v 的形式保存，L2 衰减只更新 scale，
    因此每步代价与样本的非零特征数成正比。
    """
    if not examples:
        raise EmptyTrainingSetError("训练样本为空")
    seed = config.seed if seed is None else seed
    lr, l2 = config.learning_rate, config.l2
    decay = 1.0 - lr * l2
    if decay <= 0.0:
        raise ConfigError(f"learning_rate * l2 必须小于 1 (当前 {lr * l2})")

    columns, rows = _columns(examples)
    labels = np.array([1.0 if label else 0.0 for _, label in examples])
    positive_weight = _positive_weight(labels, config)

    v = np.zeros(len(columns))
    scale = 1.0
    bias = 0.0
    rng = np.random.default_rng(seed)
    order = np.arange(len(examples))

    for epoch in range(config.epochs):
        if config.shuffle:
            order = rng.permutation(len(examples))
        for i in order:
            idx, values = rows[i]
            y = labels[i]
            p = sigmoid(scale * float(v[idx] @ values) + bias)
            g = (p - y) * (positive_weight if y else 1.0)
            scale *= decay
            if scale < _MIN_SCALE:
                v *= scale
                scale = 1.0
            if idx.size:
                v[idx] -= (lr * g / scale) * values
            bias -= lr * g
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(f"epoch {epoch + 1}/{config.epochs}: bias={bias:.4f}")

    w = scale * v
    if not (np.all(np.isfinite(w)) and math.isfinite(bias)):
        raise ConfigError("训练发散：权重出现非有限值，请降低学习率")
    return LinearModel(
        weights={fid: float(w[i]) for i, fid in enumerate(columns) if w[i] != 0.0},
        bias=float(bias),
        threshold=config.threshold,
        epochs=config.epochs,
        learning_rate=lr,
        l2=l2,
        seed=seed,
        positive_weight=positive_weight,
    )


def training_accuracy(model: LinearModel, examples: Sequence[Example]) -> float:
    if not examples:
        return 0.0
    correct = sum(1 for features, label in examples if predict(model, features) == label)
    return correct / len(examples)


def to_dense(examples: Sequence[Example], columns: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """把稀疏样本展开为稠密矩阵，仅用于小规模检查"""
    position = {fid: i for i, fid in enumerate(columns)}
    X = np.zeros((len(examples), len(columns)))
    for row, (features, _) in enumerate(examples):
        for fid, value in features.items():
            if fid in position:
                X[row, position[fid]] = value
    y = np.array([1.0 if label else 0.0 for _, label in examples])
    return X, y


def logistic_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """mean(log(1 + e^z) - y·z) + (l2 / 2)·||w||²"""
    z = X @ w + b
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))


def logistic_gradient(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> Tuple[np.ndarray, float]:
    z = X @ w + b
    p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-np.abs(z))), np.exp(-np.abs(z)) / (1.0 + np.exp(-np.abs(z))))
    residual = p - y
    return X.T @ residual / len(y) + l2 * w, float(np.mean(residual))
