"""
模型层

二分类学习器、四种模型结构与模型包序列化。
"""

from .architectures import predict_corpus, predict_sentence, train_bundle
from .bundle import Architecture, ModelBundle, SentencePrediction, load_bundle, save_bundle
from .learner import LinearModel, train_binary

__all__ = [
    "predict_corpus",
    "predict_sentence",
    "train_bundle",
    "Architecture",
    "ModelBundle",
    "SentencePrediction",
    "load_bundle",
    "save_bundle",
    "LinearModel",
    "train_binary",
]
