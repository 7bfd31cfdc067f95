"""
aspectmill 异常定义

库函数统一抛出 AspectMillError 的子类，CLI 层负责捕获并转换为退出码。
"""

from typing import Optional


class AspectMillError(Exception):
    """所有 aspectmill 错误的基类（退出码 1）"""

    exit_code = 1


class ConfigError(AspectMillError):
    """参数或配置非法"""


class TaxonomyError(AspectMillError):
    """标签体系文件解析或校验失败"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"第 {line} 行: {message}"
        super().__init__(message)


class DuplicateNameError(TaxonomyError):
    """类别名或 aspect 名重复"""


class EmptyCategoryError(TaxonomyError):
    """类别下没有任何 aspect，或体系中没有类别"""


class UnknownAspectError(AspectMillError):
    """引用了标签体系中不存在的 aspect"""

    def __init__(self, aspect: str, record: Optional[int] = None):
        self.aspect = aspect
        self.record = record
        where = f"第 {record} 条记录: " if record is not None else ""
        super().__init__(f"{where}未知 aspect: {aspect!r}")


class ScoreRangeError(AspectMillError):
    """极性分数不在 [-9, 9] ∪ {99} 内"""

    def __init__(self, score: int, record: Optional[int] = None):
        self.score = score
        self.record = record
        where = f"第 {record} 条记录: " if record is not None else ""
        super().__init__(f"{where}极性分数越界: {score}（允许 -9..9 或 99）")


class CorpusError(AspectMillError):
    """语料记录无法解析"""

    def __init__(self, message: str, record: Optional[int] = None):
        self.record = record
        if record is not None:
            message = f"第 {record} 条记录: {message}"
        super().__init__(message)


class DuplicateReviewError(CorpusError):
    """review id 重复"""


class TooFewReviewsError(AspectMillError):
    """划分训练/测试集时 review 数量不足"""


class EmptyTrainingSetError(AspectMillError):
    """训练集为空"""


class LengthMismatchError(AspectMillError):
    """gold 与预测序列长度不一致"""


class TaxonomyMismatchError(AspectMillError):
    """模型包与语料/标签体系不一致"""


class LexiconError(AspectMillError):
    """词典文件解析失败或与模型包记录的摘要不符"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"第 {line} 行: {message}"
        super().__init__(message)


class BundleFormatError(AspectMillError):
    """模型包格式或版本不匹配"""


class InvariantViolation(AspectMillError):
    """内部不变式被破坏（退出码 2）"""

    exit_code = 2


class OutputError(AspectMillError):
    """输出文件无法写入（目录不存在、无权限等）"""

    def __init__(self, path, reason: str):
        self.path = str(path)
        super().__init__(f"无法写入 {self.path}: {reason}")
