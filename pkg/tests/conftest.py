#!/usr/bin/env python3
"""
共享测试夹具
"""

import json
from pathlib import Path
from typing import Dict, List, Optional

import pytest

from aspectmill.config import TrainConfig
from aspectmill.data.corpus import Annotation, Review, Sentence, build_corpus
from aspectmill.data.fixtures import separable_corpus
from aspectmill.data.taxonomy import default_taxonomy, parse_taxonomy
from aspectmill.models.architectures import train_bundle
from aspectmill.models.bundle import Architecture

SMALL_TAXONOMY = """\
; 测试用小体系
# Tuition
Basic Tuition
Additional Charges
# Support and Organization
Supervision
Organization
"""


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def small_taxonomy():
    return parse_taxonomy(SMALL_TAXONOMY)


def make_corpus(taxonomy, reviews: Dict[str, List[tuple]]):
    """{review id: [(text, [(aspect, score), ...]), ...]} → AnnotatedCorpus"""
    built = []
    for review_id, sentences in reviews.items():
        built.append(
            Review(
                id=review_id,
                sentences=tuple(
                    Sentence(
                        text=text,
                        annotations=tuple(Annotation(aspect=a, score=s) for a, s in annotations),
                    )
                    for text, annotations in sentences
                ),
            )
        )
    return build_corpus(built, taxonomy)


@pytest.fixture
def tiny_corpus(small_taxonomy):
    return make_corpus(
        small_taxonomy,
        {
            "r1": [
                ("The tuition fee is far too high.", [("Basic Tuition", -5)]),
                ("My tutor answered every question quickly.", [("Supervision", 7)]),
            ],
            "r2": [
                ("Everything was fine.", []),
                ("The organization is good but I hate the extra charges.", [("Organization", 3), ("Additional Charges", 99)]),
            ],
            "r3": [
                ("The tutor was okay.", [("Supervision", 0)]),
            ],
        },
    )


@pytest.fixture(scope="session")
def separable(taxonomy):
    return separable_corpus(taxonomy)


@pytest.fixture(scope="session")
def train_config():
    return TrainConfig()


@pytest.fixture(scope="session")
def separable_bundles(separable, taxonomy, train_config):
    """四种结构在可分语料上训练好的模型包（整个会话共享）"""
    return {
        architecture: train_bundle(separable, taxonomy, architecture, train_config)
        for architecture in Architecture
    }


def write_jsonl(path: Path, records: List[dict]) -> Path:
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), encoding="utf-8")
    return path


def write_lexicon(directory: Path, name: str, kind: str, entries: List[str], prior: Optional[Dict[str, float]] = None) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    lines = [f"kind: {kind}"]
    for term in entries:
        lines.append(f"{term}\t{prior[term]}" if prior and term in prior else term)
    path = directory / f"{name}.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
