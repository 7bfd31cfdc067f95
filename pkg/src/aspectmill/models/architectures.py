#!/usr/bin/env python3
"""
模型结构

四种结构共享同一套二分类器，区别只在训练范围和预测时的组合方式：

- flat:            所有类别、aspect、极性分类器相互独立
- hier:            类别分类器先判定，只对命中的类别运行其 aspect 分类器；
                   极性先判断是否有倾向，再判断正/负
- prop:            类别分类器的输出作为 aspect 分类器的额外特征，
                   所有分类器总是运行，aspect 可以 "否决" 上层判断
- aspect-polarity: aspect 集合与 hier 相同，极性在每个 aspect 的
                   触发词窗口上单独判断
"""

import logging
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from ..config import DEFAULTS, TrainConfig
from ..data.corpus import AnnotatedCorpus, Sentence
from ..data.taxonomy import MIXED_SCORE, PolarityLabel, Taxonomy
from ..errors import EmptyTrainingSetError, InvariantViolation, TaxonomyMismatchError
from ..features.extract import (
    FeatureVector,
    Family,
    Profile,
    assemble,
    check_lexicon_feature_ids,
    feature_id,
    merge,
)
from ..features.lexicon import Lexicon
from ..features.tokenizer import tokenize
from ..features.vocabulary import Vocabulary, fit_vocabulary
from .bundle import (
    NEGATIVE,
    POLAR,
    POLARITY_DETECTORS,
    POSITIVE,
    Architecture,
    ModelBundle,
    SentencePrediction,
)
from .learner import (
    LinearModel,
    constant_model,
    derive_seed,
    predict,
    score,
    train_binary,
    training_accuracy,
)
from .triggers import select_trigger_terms

logger = logging.getLogger(__name__)


def category_key(name: str) -> str:
    return f"category:{name}"


def aspect_key(name: str) -> str:
    return f"aspect:{name}"


def polarity_key(detector: str) -> str:
    return f"polarity:{detector}"


class SentenceLabels(BaseModel):
    """一个句子的 gold 标签；训练目标和评估共用这一条规则"""

    model_config = ConfigDict(frozen=True)

    aspects: FrozenSet[str]
    categories: FrozenSet[str]
    polar: bool
    positive: bool
    negative: bool
    aspect_polarities: Dict[str, PolarityLabel]


def gold_labels(sentence: Sentence, taxonomy: Taxonomy) -> SentenceLabels:
    """
    分数 ≠ 0 为有倾向；> 0 为正；< 0 为负；99 (Mixed) 同时为正和负
    """
    scores = [a.score for a in sentence.annotations]
    aspects = frozenset(sentence.aspects)
    return SentenceLabels(
        aspects=aspects,
        categories=frozenset(taxonomy.category_of(a) for a in aspects),
        polar=any(s != 0 for s in scores),
        positive=any(s > 0 for s in scores),
        negative=any(s < 0 or s == MIXED_SCORE for s in scores),
        aspect_polarities={a.aspect: a.polarity for a in sentence.annotations},
    )


def build_targets(corpus: AnnotatedCorpus, taxonomy: Taxonomy) -> Dict[str, List[bool]]:
    """
    每个标签的训练目标，按 corpus.sentences() 顺序对齐

    键为 "category:<名>"、"aspect:<名>" 与 "polarity:polar|positive|negative"。
    """
    labels = [gold_labels(s, taxonomy) for s in corpus.sentences()]
    targets: Dict[str, List[bool]] = {}
    for name in taxonomy.category_names:
        targets[category_key(name)] = [name in g.categories for g in labels]
    for name in taxonomy.aspects:
        targets[aspect_key(name)] = [name in g.aspects for g in labels]
    targets[polarity_key(POLAR)] = [g.polar for g in labels]
    targets[polarity_key(POSITIVE)] = [g.positive for g in labels]
    targets[polarity_key(NEGATIVE)] = [g.negative for g in labels]
    return targets


def category_feature_id(taxonomy: Taxonomy, category: str) -> int:
    return feature_id(Family.CATEGORY, taxonomy.category_names.index(category))


def propagation_features(taxonomy: Taxonomy, predicted: Sequence[str]) -> FeatureVector:
    """每个类别一个二值特征 CAT⊗c；只存命中的类别，未命中即为 0"""
    fired = set(predicted)
    return {category_feature_id(taxonomy, name): 1.0 for name in taxonomy.category_names if name in fired}


def infer_categories(aspects: Sequence[str], taxonomy: Taxonomy) -> FrozenSet[str]:
    """预测 aspect 所属类别的并集"""
    return frozenset(taxonomy.category_of(a) for a in aspects)


def resolve_polarity(
    polar: bool, positive_score: float, negative_score: float, threshold: float
) -> PolarityLabel:
    """
    无倾向 → Neutral；只有一个检测器命中时取它；
    都命中或都未命中时取原始分数较高者，完全相等取 Positive
    """
    if not polar:
        return PolarityLabel.NEUTRAL
    positive = positive_score >= threshold
    negative = negative_score >= threshold
    if positive and not negative:
        return PolarityLabel.POSITIVE
    if negative and not positive:
        return PolarityLabel.NEGATIVE
    return PolarityLabel.POSITIVE if positive_score >= negative_score else PolarityLabel.NEGATIVE


def window_indices(positions: Sequence[int], n: Optional[int], length: int) -> List[int]:
    """所有 [pos-n, pos+n] 窗口的并集（截断到句子范围）；n 为 None 时为整句"""
    if n is None:
        return list(range(length))
    covered = set()
    for pos in positions:
        covered.update(range(max(0, pos - n), min(length, pos + n + 1)))
    return sorted(covered)


def gating_violations(prediction: SentencePrediction, taxonomy: Taxonomy) -> List[str]:
    """所属类别不在预测类别集合中的 aspect"""
    categories = set(prediction.categories)
    return [a for a in prediction.aspects if taxonomy.category_of(a) not in categories]


def check_gating(prediction: SentencePrediction, taxonomy: Taxonomy) -> None:
    violations = gating_violations(prediction, taxonomy)
    if violations:
        raise InvariantViolation(
            f"层级门控被破坏: aspect {violations} 的类别不在预测类别 {list(prediction.categories)} 中"
        )


# ==================== 训练 ====================


class _TrainingView(NamedTuple):
    vocabulary: Vocabulary
    aspect_x: List[FeatureVector]
    polarity_x: List[FeatureVector]
    targets: Dict[str, List[bool]]


class _Trainer:
    """逐标签训练并记录训练集大小与训练准确率"""

    def __init__(self, config: TrainConfig):
        self.config = config
        self.sizes: Dict[str, int] = {}
        self.accuracy: Dict[str, float] = {}

    def fit(self, key: str, features: Sequence[FeatureVector], labels: Sequence[bool]) -> LinearModel:
        examples = list(zip(features, labels))
        self.sizes[key] = len(examples)
        if not examples:
            logger.info(f"{key}: 无训练句子，使用常量负模型")
            return constant_model(False, self.config)
        model = train_binary(examples, self.config, seed=derive_seed(self.config.seed, key))
        accuracy = training_accuracy(model, examples)
        self.accuracy[key] = accuracy
        positives = sum(1 for label in labels if label)
        logger.info(f"{key}: {len(examples)} 个句子 (正例 {positives}), 训练准确率 {accuracy:.3f}")
        return model

    def fit_subset(
        self,
        key: str,
        features: Sequence[FeatureVector],
        labels: Sequence[bool],
        scope: Sequence[bool],
    ) -> LinearModel:
        """只在 scope 为真的句子上训练"""
        chosen = [i for i, keep in enumerate(scope) if keep]
        return self.fit(key, [features[i] for i in chosen], [labels[i] for i in chosen])


def _prepare(
    corpus: AnnotatedCorpus, taxonomy: Taxonomy, lexicons: Sequence[Lexicon]
) -> _TrainingView:
    if corpus.taxonomy.version != taxonomy.version:
        raise TaxonomyMismatchError(
            f"语料的标签体系 {corpus.taxonomy.version} 与给定标签体系 {taxonomy.version} 不一致"
        )
    check_lexicon_feature_ids(lexicons)
    tokens = [tokenize(s.text) for s in corpus.sentences()]
    if not tokens:
        raise EmptyTrainingSetError("训练语料中没有句子")
    vocabulary = fit_vocabulary(tokens)
    return _TrainingView(
        vocabulary=vocabulary,
        aspect_x=[assemble(t, vocabulary, lexicons, Profile.ASPECT) for t in tokens],
        polarity_x=[assemble(t, vocabulary, lexicons, Profile.POLARITY) for t in tokens],
        targets=build_targets(corpus, taxonomy),
    )


def _train_categories(view: _TrainingView, taxonomy: Taxonomy, trainer: _Trainer) -> Dict[str, LinearModel]:
    return {
        name: trainer.fit(category_key(name), view.aspect_x, view.targets[category_key(name)])
        for name in taxonomy.category_names
    }


def _train_polarity(view: _TrainingView, trainer: _Trainer, cascade: bool) -> Dict[str, LinearModel]:
    """cascade 为真时正/负检测器只在 gold 有倾向的句子上训练"""
    polar = view.targets[polarity_key(POLAR)]
    scope = polar if cascade else [True] * len(polar)
    models = {POLAR: trainer.fit(polarity_key(POLAR), view.polarity_x, polar)}
    for detector in (POSITIVE, NEGATIVE):
        key = polarity_key(detector)
        models[detector] = trainer.fit_subset(key, view.polarity_x, view.targets[key], scope)
    return models


def _train_gated_aspects(
    view: _TrainingView, taxonomy: Taxonomy, trainer: _Trainer
) -> Dict[str, LinearModel]:
    models: Dict[str, LinearModel] = {}
    for category in taxonomy.categories:
        scope = view.targets[category_key(category.name)]
        for aspect in category.aspects:
            key = aspect_key(aspect)
            models[aspect] = trainer.fit_subset(key, view.aspect_x, view.targets[key], scope)
    return models


def _bundle(
    architecture: Architecture,
    taxonomy: Taxonomy,
    view: _TrainingView,
    lexicons: Sequence[Lexicon],
    trainer: _Trainer,
    category_models: Dict[str, LinearModel],
    aspect_models: Dict[str, LinearModel],
    polarity_models: Dict[str, LinearModel],
    trigger_terms: Optional[Dict[str, Tuple[str, ...]]] = None,
    window: Optional[int] = None,
) -> ModelBundle:
    return ModelBundle(
        architecture=architecture,
        taxonomy=taxonomy,
        vocabulary=view.vocabulary,
        lexicons=tuple(lexicons),
        lexicon_digests={lex.name: lex.digest() for lex in lexicons},
        category_models=category_models,
        aspect_models=aspect_models,
        polarity_models=polarity_models,
        trigger_terms=trigger_terms or {},
        window=window,
        train_config=trainer.config,
        label_sizes=trainer.sizes,
        label_accuracy=trainer.accuracy,
    )


def train_flat(
    corpus: AnnotatedCorpus,
    taxonomy: Taxonomy,
    config: TrainConfig,
    lexicons: Sequence[Lexicon] = (),
) -> ModelBundle:
    """所有分类器都在全部训练句子上独立训练"""
    view = _prepare(corpus, taxonomy, lexicons)
    trainer = _Trainer(config)
    categories = _train_categories(view, taxonomy, trainer)
    aspects = {
        name: trainer.fit(aspect_key(name), view.aspect_x, view.targets[aspect_key(name)])
        for name in taxonomy.aspects
    }
    polarity = _train_polarity(view, trainer, cascade=False)
    return _bundle(Architecture.FLAT, taxonomy, view, lexicons, trainer, categories, aspects, polarity)


def train_hierarchical(
    corpus: AnnotatedCorpus,
    taxonomy: Taxonomy,
    config: TrainConfig,
    lexicons: Sequence[Lexicon] = (),
) -> ModelBundle:
    """
    aspect 分类器只在所属类别的 gold 句子上训练；
    没有任何 gold 句子的类别，其 aspect 使用常量负模型
    """
    view = _prepare(corpus, taxonomy, lexicons)
    trainer = _Trainer(config)
    categories = _train_categories(view, taxonomy, trainer)
    aspects = _train_gated_aspects(view, taxonomy, trainer)
    polarity = _train_polarity(view, trainer, cascade=True)
    return _bundle(
        Architecture.HIERARCHICAL, taxonomy, view, lexicons, trainer, categories, aspects, polarity
    )


def train_propagation(
    corpus: AnnotatedCorpus,
    taxonomy: Taxonomy,
    config: TrainConfig,
    lexicons: Sequence[Lexicon] = (),
) -> ModelBundle:
    """
    aspect 分类器在全部句子上训练，特征额外包含训练好的类别分类器
    在该句上的预测（不是 gold 类别），与预测时的输入分布一致
    """
    view = _prepare(corpus, taxonomy, lexicons)
    trainer = _Trainer(config)
    categories = _train_categories(view, taxonomy, trainer)
    augmented = [
        merge(x, propagation_features(taxonomy, _detect(categories, taxonomy.category_names, x)))
        for x in view.aspect_x
    ]
    aspects = {
        name: trainer.fit(aspect_key(name), augmented, view.targets[aspect_key(name)])
        for name in taxonomy.aspects
    }
    polarity = _train_polarity(view, trainer, cascade=True)
    return _bundle(
        Architecture.PROPAGATION, taxonomy, view, lexicons, trainer, categories, aspects, polarity
    )


def train_aspect_polarity(
    corpus: AnnotatedCorpus,
    taxonomy: Taxonomy,
    config: TrainConfig,
    lexicons: Sequence[Lexicon] = (),
    k: int = DEFAULTS["k"],
    window: Optional[int] = DEFAULTS["window"],
) -> ModelBundle:
    """与 hier 相同的分类器，外加每个 aspect 的 k 个触发词和窗口大小"""
    view = _prepare(corpus, taxonomy, lexicons)
    trainer = _Trainer(config)
    categories = _train_categories(view, taxonomy, trainer)
    aspects = _train_gated_aspects(view, taxonomy, trainer)
    polarity = _train_polarity(view, trainer, cascade=True)
    triggers = select_trigger_terms(corpus, taxonomy, k)
    return _bundle(
        Architecture.ASPECT_POLARITY,
        taxonomy,
        view,
        lexicons,
        trainer,
        categories,
        aspects,
        polarity,
        trigger_terms=triggers,
        window=window,
    )


def train_bundle(
    corpus: AnnotatedCorpus,
    taxonomy: Taxonomy,
    architecture: Union[Architecture, str],
    config: TrainConfig,
    lexicons: Sequence[Lexicon] = (),
    k: int = DEFAULTS["k"],
    window: Optional[int] = DEFAULTS["window"],
) -> ModelBundle:
    architecture = Architecture(architecture)
    logger.info(
        f"开始训练 {architecture.value} 模型: {len(corpus.reviews)} 条 review, "
        f"{corpus.sentence_count} 个句子"
    )
    if architecture is Architecture.FLAT:
        bundle = train_flat(corpus, taxonomy, config, lexicons)
    elif architecture is Architecture.HIERARCHICAL:
        bundle = train_hierarchical(corpus, taxonomy, config, lexicons)
    elif architecture is Architecture.PROPAGATION:
        bundle = train_propagation(corpus, taxonomy, config, lexicons)
    else:
        bundle = train_aspect_polarity(corpus, taxonomy, config, lexicons, k=k, window=window)
    logger.info(
        f"训练完成: {len(bundle.category_models)} 个类别, {len(bundle.aspect_models)} 个 aspect, "
        f"{len(POLARITY_DETECTORS)} 个极性分类器"
    )
    return bundle


# ==================== 预测 ====================


def _tokens(sentence: Union[str, Sentence]) -> List[str]:
    return tokenize(sentence.text if isinstance(sentence, Sentence) else sentence)


def _detect(models: Dict[str, LinearModel], names: Sequence[str], x: FeatureVector) -> List[str]:
    return [name for name in names if predict(models[name], x)]


def polarity_of(bundle: ModelBundle, tokens: Sequence[str]) -> PolarityLabel:
    """极性级联：先判断有无倾向，有倾向才运行正/负检测器"""
    x = assemble(tokens, bundle.vocabulary, bundle.lexicons, Profile.POLARITY)
    models = bundle.polarity_models
    if not predict(models[POLAR], x):
        return PolarityLabel.NEUTRAL
    return resolve_polarity(
        True, score(models[POSITIVE], x), score(models[NEGATIVE], x), models[POSITIVE].threshold
    )


def _aspect_features(bundle: ModelBundle, tokens: Sequence[str]) -> FeatureVector:
    return assemble(tokens, bundle.vocabulary, bundle.lexicons, Profile.ASPECT)


def _gated_aspects(bundle: ModelBundle, x: FeatureVector) -> SentencePrediction:
    taxonomy = bundle.taxonomy
    categories = _detect(bundle.category_models, taxonomy.category_names, x)
    aspects = [
        aspect
        for category in categories
        for aspect in taxonomy.category(category).aspects
        if predict(bundle.aspect_models[aspect], x)
    ]
    return SentencePrediction(
        categories=tuple(categories),
        aspects=tuple(a for a in taxonomy.aspects if a in aspects),
        polarity=PolarityLabel.NEUTRAL,
    )


def predict_flat(bundle: ModelBundle, sentence: Union[str, Sentence]) -> SentencePrediction:
    tokens = _tokens(sentence)
    x = _aspect_features(bundle, tokens)
    taxonomy = bundle.taxonomy
    return SentencePrediction(
        categories=tuple(_detect(bundle.category_models, taxonomy.category_names, x)),
        aspects=tuple(_detect(bundle.aspect_models, taxonomy.aspects, x)),
        polarity=polarity_of(bundle, tokens),
    )


def predict_hierarchical(bundle: ModelBundle, sentence: Union[str, Sentence]) -> SentencePrediction:
    tokens = _tokens(sentence)
    gated = _gated_aspects(bundle, _aspect_features(bundle, tokens))
    return gated.model_copy(update={"polarity": polarity_of(bundle, tokens)})


def predict_propagation(bundle: ModelBundle, sentence: Union[str, Sentence]) -> SentencePrediction:
    tokens = _tokens(sentence)
    taxonomy = bundle.taxonomy
    x = _aspect_features(bundle, tokens)
    categories = _detect(bundle.category_models, taxonomy.category_names, x)
    augmented = merge(x, propagation_features(taxonomy, categories))
    return SentencePrediction(
        categories=tuple(categories),
        aspects=tuple(_detect(bundle.aspect_models, taxonomy.aspects, augmented)),
        polarity=polarity_of(bundle, tokens),
    )


def predict_aspect_polarity(bundle: ModelBundle, sentence: Union[str, Sentence]) -> SentencePrediction:
    """
    对每个预测出的 aspect：取句中所有触发词位置的 ±n 窗口并集，
    在该子序列上运行极性级联；句中没有触发词时退回整句极性
    """
    tokens = _tokens(sentence)
    gated = _gated_aspects(bundle, _aspect_features(bundle, tokens))
    sentence_polarity = polarity_of(bundle, tokens)
    aspect_polarities: Dict[str, PolarityLabel] = {}
    for aspect in gated.aspects:
        triggers = set(bundle.trigger_terms.get(aspect, ()))
        positions = [i for i, token in enumerate(tokens) if token in triggers]
        if bundle.window is None or not positions:
            aspect_polarities[aspect] = sentence_polarity
            continue
        indices = window_indices(positions, bundle.window, len(tokens))
        aspect_polarities[aspect] = polarity_of(bundle, [tokens[i] for i in indices])
    return gated.model_copy(
        update={"polarity": sentence_polarity, "aspect_polarities": aspect_polarities}
    )


_PREDICTORS = {
    Architecture.FLAT: predict_flat,
    Architecture.HIERARCHICAL: predict_hierarchical,
    Architecture.PROPAGATION: predict_propagation,
    Architecture.ASPECT_POLARITY: predict_aspect_polarity,
}


def predict_sentence(bundle: ModelBundle, sentence: Union[str, Sentence]) -> SentencePrediction:
    return _PREDICTORS[bundle.architecture](bundle, sentence)


def predict_corpus(bundle: ModelBundle, corpus: AnnotatedCorpus) -> List[SentencePrediction]:
    return [predict_sentence(bundle, s) for s in corpus.sentences()]
