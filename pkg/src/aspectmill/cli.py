#!/usr/bin/env python3
"""
aspectmill 命令行入口

子命令：train / predict / eval / stats / compare / sweep / split。
退出码：0 成功，1 输入或参数错误，2 内部不变式被破坏。
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from . import __version__
from .config import DEFAULTS, LOG_ENV_VAR, RunConfig, TrainConfig, format_window, parse_window
from .data.corpus import AnnotatedCorpus, compute_stats, load_corpus, save_corpus, split_corpus
from .data.taxonomy import Taxonomy, resolve_taxonomy
from .errors import AspectMillError, ConfigError
from .features.lexicon import Lexicon, load_lexicon_dir
from .models.architectures import check_gating, predict_sentence, train_bundle
from .models.bundle import Architecture, ModelBundle, load_bundle, save_bundle
from .tools.evaluation import evaluate_bundle, window_sweep
from .tools.report import OUTPUT_FORMATS, render_metrics, render_stats, render_sweep
from .tools.utils import (
    _create_failure_response,
    parse_windows,
    prediction_record,
    render_jsonl,
    write_output,
)

logger = logging.getLogger(__name__)

_ACTIONS = {
    "train": "训练",
    "predict": "预测",
    "eval": "评估",
    "stats": "统计",
    "compare": "结构对比",
    "sweep": "窗口扫描",
    "split": "语料划分",
}


class _Parser(argparse.ArgumentParser):
    """参数错误按输入错误处理（退出码 1），而不是 argparse 默认的 2"""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(f"参数错误: {message}")


def setup_logging() -> None:
    level_name = os.environ.get(LOG_ENV_VAR, "INFO").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    logging.getLogger().setLevel(level)


def _add_train_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("训练参数")
    group.add_argument("--arch", default="hier", choices=[a.value for a in Architecture])
    group.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    group.add_argument("--epochs", type=int, default=DEFAULTS["epochs"])
    group.add_argument("--lr", type=float, default=DEFAULTS["learning_rate"])
    group.add_argument("--l2", type=float, default=DEFAULTS["l2"])
    group.add_argument("--k", type=int, default=DEFAULTS["k"], help="每个 aspect 的触发词数")
    group.add_argument("--n", type=parse_window, default=DEFAULTS["window"], help="窗口大小，整数或 inf")
    group.add_argument("--class-weighting", action="store_true", help="正例加权 min(neg/pos, 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aspectmill", description="评论句子的层级 aspect / 类别 / 极性分类")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--taxonomy", type=Path, help="标签体系文件（默认使用内置体系）")
    common.add_argument("--lexicons", type=Path, help="词典目录")
    common.add_argument("--format", dest="output_format", default=DEFAULTS["format"], choices=OUTPUT_FORMATS)
    common.add_argument("--output", type=Path, help="输出文件（默认标准输出）")

    train = sub.add_parser("train", parents=[common], help="训练并写出模型包")
    train.add_argument("--corpus", type=Path, required=True)
    train.add_argument("--bundle", type=Path, required=True, help="模型包输出路径")
    train.add_argument("--split", type=float, help="先按 review 划分，只用训练部分")
    _add_train_options(train)

    predict = sub.add_parser("predict", parents=[common], help="对语料逐句预测（输出 JSON Lines）")
    predict.add_argument("--bundle", type=Path, required=True)
    predict.add_argument("--corpus", type=Path, required=True, help="输入语料，标注可省略且被忽略")
    predict.add_argument("--check", action="store_true", help="检查层级门控不变式")

    evaluate = sub.add_parser("eval", parents=[common], help="在带标注的测试语料上评估模型包")
    evaluate.add_argument("--bundle", type=Path, required=True)
    evaluate.add_argument("--test-corpus", type=Path)
    evaluate.add_argument("--corpus", type=Path, help="--test-corpus 的别名")

    stats = sub.add_parser("stats", parents=[common], help="语料统计与极性排名")
    stats.add_argument("--corpus", type=Path, required=True)

    compare = sub.add_parser("compare", parents=[common], help="训练并对比全部四种结构")
    compare.add_argument("--corpus", type=Path, required=True)
    compare.add_argument("--test-corpus", type=Path, help="未给出时按 --split 从 --corpus 划分")
    compare.add_argument("--split", type=float, default=DEFAULTS["split"])
    _add_train_options(compare)

    sweep = sub.add_parser("sweep", parents=[common], help="aspect-polarity 模型包的窗口大小扫描")
    sweep.add_argument("--bundle", type=Path, required=True)
    sweep.add_argument("--test-corpus", type=Path)
    sweep.add_argument("--corpus", type=Path, help="--test-corpus 的别名")
    sweep.add_argument("--windows", type=parse_windows, default=[1, 2, 5, None], help="如 1,2,5,inf")

    split = sub.add_parser("split", parents=[common], help="按 review 划分语料并写出两个文件")
    split.add_argument("--corpus", type=Path, required=True)
    split.add_argument("--split", type=float, default=DEFAULTS["split"])
    split.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    split.add_argument("--train-out", type=Path, required=True)
    split.add_argument("--test-out", type=Path, required=True)
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    try:
        train = TrainConfig(
            epochs=get("epochs", DEFAULTS["epochs"]),
            learning_rate=get("lr", DEFAULTS["learning_rate"]),
            l2=get("l2", DEFAULTS["l2"]),
            seed=get("seed", DEFAULTS["seed"]),
            class_weighting=get("class_weighting", DEFAULTS["class_weighting"]),
        )
        return RunConfig(
            command=args.command,
            taxonomy=get("taxonomy"),
            corpus=get("corpus"),
            test_corpus=get("test_corpus"),
            bundle=get("bundle"),
            architecture=get("arch", "hier"),
            lexicons=get("lexicons"),
            train=train,
            k=get("k", DEFAULTS["k"]),
            window=get("n", DEFAULTS["window"]),
            windows=tuple(get("windows", (1, 2, 5, None))),
            split=get("split"),
            output_format=get("output_format", DEFAULTS["format"]),
            output=get("output"),
            train_out=get("train_out"),
            test_out=get("test_out"),
            check=get("check", False),
        )
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ()))
        raise ConfigError(f"参数非法 {where}: {first.get('msg')}") from None


def _lexicons(config: RunConfig) -> List[Lexicon]:
    return [] if config.lexicons is None else load_lexicon_dir(config.lexicons)


def _bundle_for(config: RunConfig) -> ModelBundle:
    """加载模型包，并按给定的标签体系与词典做一致性检查"""
    bundle = load_bundle(config.bundle)
    if config.taxonomy is not None:
        bundle.check_taxonomy(resolve_taxonomy(config.taxonomy))
    if config.lexicons is not None:
        bundle.check_lexicons(load_lexicon_dir(config.lexicons))
    return bundle


def _test_corpus(config: RunConfig, taxonomy: Taxonomy) -> AnnotatedCorpus:
    path = config.test_corpus or config.corpus
    if path is None:
        raise ConfigError("需要 --test-corpus")
    return load_corpus(path, taxonomy)


def cmd_train(config: RunConfig) -> int:
    taxonomy = resolve_taxonomy(config.taxonomy)
    lexicons = _lexicons(config)
    corpus = load_corpus(config.corpus, taxonomy)
    if config.split is not None:
        corpus, _ = split_corpus(corpus, config.split, config.train.seed)
    bundle = train_bundle(
        corpus,
        taxonomy,
        config.architecture,
        config.train,
        lexicons,
        k=config.k,
        window=config.window,
    )
    save_bundle(bundle, config.bundle)
    return 0


def cmd_predict(config: RunConfig) -> int:
    bundle = _bundle_for(config)
    corpus = load_corpus(config.corpus, bundle.taxonomy, ignore_annotations=True)
    gated = bundle.architecture in (Architecture.HIERARCHICAL, Architecture.ASPECT_POLARITY)
    records = []
    for review in corpus.reviews:
        for index, sentence in enumerate(review.sentences):
            prediction = predict_sentence(bundle, sentence)
            if config.check and gated:
                check_gating(prediction, bundle.taxonomy)
            records.append(prediction_record(review.id, index, sentence.text, prediction))
    if config.check:
        logger.info(f"门控检查通过: {len(records)} 个句子")
    write_output(render_jsonl(records), config.output, sys.stdout)
    logger.info(f"已输出 {len(records)} 条预测")
    return 0


def cmd_eval(config: RunConfig) -> int:
    bundle = _bundle_for(config)
    corpus = _test_corpus(config, bundle.taxonomy)
    reports = evaluate_bundle(bundle, corpus)
    write_output(render_metrics([(bundle.architecture.value, reports)], config.output_format), config.output, sys.stdout)
    return 0


def cmd_stats(config: RunConfig) -> int:
    taxonomy = resolve_taxonomy(config.taxonomy)
    corpus = load_corpus(config.corpus, taxonomy)
    write_output(render_stats(compute_stats(corpus), taxonomy, config.output_format), config.output, sys.stdout)
    return 0


def cmd_compare(config: RunConfig) -> int:
    taxonomy = resolve_taxonomy(config.taxonomy)
    lexicons = _lexicons(config)
    corpus = load_corpus(config.corpus, taxonomy)
    if config.test_corpus is not None:
        train_part, test_part = corpus, load_corpus(config.test_corpus, taxonomy)
    else:
        train_part, test_part = split_corpus(corpus, config.split or DEFAULTS["split"], config.train.seed)
    results = []
    for architecture in Architecture:
        bundle = train_bundle(
            train_part, taxonomy, architecture, config.train, lexicons, k=config.k, window=config.window
        )
        results.append((architecture.value, evaluate_bundle(bundle, test_part)))
    write_output(render_metrics(results, config.output_format), config.output, sys.stdout)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    bundle = _bundle_for(config)
    corpus = _test_corpus(config, bundle.taxonomy)
    logger.info(f"窗口扫描: {', '.join(format_window(n) for n in config.windows)}")
    results = window_sweep(bundle, corpus, config.windows)
    write_output(render_sweep(results, config.output_format), config.output, sys.stdout)
    return 0


def cmd_split(config: RunConfig) -> int:
    taxonomy = resolve_taxonomy(config.taxonomy)
    corpus = load_corpus(config.corpus, taxonomy)
    train_part, test_part = split_corpus(corpus, config.split or DEFAULTS["split"], config.train.seed)
    save_corpus(train_part, config.train_out)
    save_corpus(test_part, config.test_out)
    logger.info(f"已写出 {config.train_out} 与 {config.test_out}")
    return 0


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "train": cmd_train,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "stats": cmd_stats,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "split": cmd_split,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数：返回退出码"""
    setup_logging()
    command = "运行"
    try:
        args = build_parser().parse_args(argv)
        command = _ACTIONS.get(args.command, command)
        config = build_run_config(args)
        logger.info(f"aspectmill {__version__} {config.command}")
        for line in config.echo():
            logger.info(f"  {line}")
        return COMMANDS[config.command](config)
    except AspectMillError as e:
        logger.debug("失败详情", exc_info=True)
        sys.stderr.write(_create_failure_response(command, e))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
