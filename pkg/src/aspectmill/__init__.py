"""
aspectmill: 评论句子的层级 aspect 分类

把按句切分的课程评论分类到两层标签体系（类别 → aspect），
并判断每个句子或每个 aspect 的情感极性。

Features:
- 🏷️ 可配置的两层标签体系，默认内置 8 个类别、32 个 aspect
- 🧱 四种模型结构：flat / hier / prop / aspect-polarity
- 📊 宏平均与微平均 P/R/F1，含推断类别与极性报告
- 📦 单文件、带版本号的模型包
- 🔁 给定 seed 时训练、预测、评估结果完全确定
"""

__version__ = "1.0.0"
__author__ = "Mudrobot"
__email__ = "mudrobot@example.com"
__description__ = "评论句子的层级 aspect / 类别 / 极性分类"
__url__ = "https://github.com/mudrobot/aspectmill"

# 导出主要组件
from .data import AnnotatedCorpus, Taxonomy, compute_stats, default_taxonomy, load_corpus, load_taxonomy
from .models import Architecture, ModelBundle, load_bundle, predict_sentence, save_bundle, train_bundle
from .tools import evaluate_bundle

__all__ = [
    "__version__",
    "__author__",
    "__description__",
    "AnnotatedCorpus",
    "Taxonomy",
    "compute_stats",
    "default_taxonomy",
    "load_corpus",
    "load_taxonomy",
    "Architecture",
    "ModelBundle",
    "load_bundle",
    "save_bundle",
    "predict_sentence",
    "train_bundle",
    "evaluate_bundle",
]
