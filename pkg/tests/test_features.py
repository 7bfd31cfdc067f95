#!/usr/bin/env python3
"""
特征抽取测试：分词、词表、tf·idf、n-gram、词典与否定特征
"""

import math

import pytest

from aspectmill.errors import EmptyTrainingSetError, LexiconError
from aspectmill.features import extract
from aspectmill.features.extract import (
    Family,
    Profile,
    assemble,
    check_lexicon_feature_ids,
    family_of,
    feature_id,
    lexicon_feature_id,
    lexicon_features,
    negation_feature_id,
    negation_features,
    ngram_features,
    tfidf_features,
)
from aspectmill.features.lexicon import (
    LexiconKind,
    load_lexicon_dir,
    negation_triggers,
    parse_lexicon,
)
from aspectmill.features.tokenizer import tokenize
from aspectmill.features.vocabulary import Vocabulary, fit_vocabulary, gram_order, ngrams

from .conftest import write_lexicon


class TestTokenizer:
    def test_lowercase_and_punctuation(self):
        assert tokenize("The Tutor was GREAT!") == ["the", "tutor", "was", "great", "!"]

    def test_leading_and_trailing_punctuation(self):
        assert tokenize('("fees")') == ["(", '"', "fees", '"', ")"]

    def test_negation_suffix(self):
        assert tokenize("I didn't like it") == ["i", "did", "n't", "like", "it"]
        assert tokenize("Don’t go.") == ["do", "n't", "go", "."]

    def test_internal_punctuation_kept(self):
        assert tokenize("up-to-date e-mail") == ["up-to-date", "e-mail"]

    def test_whitespace_only(self):
        assert tokenize("  \t ") == []


class TestVocabulary:
    def test_ngrams(self):
        assert ngrams(["a", "b", "c"], 2) == ["a b", "b c"]
        assert ngrams(["a"], 3) == []
        assert gram_order("a b c") == 3

    def test_document_frequency(self):
        vocab = fit_vocabulary([["a", "b", "a"], ["b", "c"]])
        assert vocab.n_documents == 2
        assert vocab.doc_freq("a") == 1
        assert vocab.doc_freq("b") == 2
        assert vocab.doc_freq("a b") == 1
        assert vocab.doc_freq("a b a") == 1
        assert vocab.doc_freq("zzz") == 0

    def test_ids_independent_of_sentence_order(self):
        sentences = [["x", "y"], ["y", "z"], ["z"]]
        assert fit_vocabulary(sentences) == fit_vocabulary(list(reversed(sentences)))

    def test_unigrams_first(self):
        vocab = fit_vocabulary([["b", "a"]])
        assert vocab.terms == ("a", "b", "b a")

    def test_empty(self):
        with pytest.raises(EmptyTrainingSetError):
            fit_vocabulary([])

    def test_index_survives_serialization(self):
        vocab = fit_vocabulary([["a", "b"], ["b", "c"]])
        restored = Vocabulary.model_validate_json(vocab.model_dump_json())
        assert restored == vocab
        assert [restored.id_of(t) for t in restored.terms] == list(range(len(restored)))
        assert "b c" in restored and "c b" not in restored
        assert "_index" not in vocab.model_dump()

    def test_each_vocabulary_has_its_own_index(self):
        first = fit_vocabulary([["a"]])
        second = fit_vocabulary([["z"]])
        assert first.id_of("a") == 0 and first.id_of("z") is None
        assert second.id_of("z") == 0 and second.id_of("a") is None


class TestTextFeatures:
    @pytest.fixture
    def vocab(self):
        return fit_vocabulary([["good", "tutor"], ["bad", "tutor"], ["good", "fees"], ["nothing"]])

    def test_tfidf_values(self, vocab):
        features = tfidf_features(["good", "good", "tutor", "unknown"], vocab)
        good = feature_id(Family.TEXT, vocab.id_of("good"))
        tutor = feature_id(Family.TEXT, vocab.id_of("tutor"))
        assert features[good] == pytest.approx(2 * math.log(4 / 2))
        assert features[tutor] == pytest.approx(math.log(4 / 2))
        assert len(features) == 2

    def test_term_in_every_document_is_omitted(self):
        vocab = fit_vocabulary([["the", "a"], ["the", "b"]])
        assert feature_id(Family.TEXT, vocab.id_of("the")) not in tfidf_features(["the"], vocab)

    def test_ngram_indicators(self, vocab):
        features = ngram_features(["good", "tutor", "good", "tutor"], vocab, orders=(2,))
        assert features == {feature_id(Family.TEXT, vocab.id_of("good tutor")): 1.0}

    def test_unknown_ngrams_dropped(self, vocab):
        assert ngram_features(["tutor", "good"], vocab) == {}


class TestLexicon:
    def test_parse(self):
        lexicon = parse_lexicon("kind: PriorScored\n; comment\nGreat\t1.5\nawful\t-2\nmeh\t0\n", "priors")
        assert lexicon.kind is LexiconKind.PRIOR_SCORED
        assert lexicon.entries == {"great": 1.5, "awful": -2.0, "meh": 0.0}

    def test_digest_changes_with_content(self):
        a = parse_lexicon("kind: PolarityWord\ngood\n", "words")
        b = parse_lexicon("kind: PolarityWord\ngood\nbad\n", "words")
        assert a.digest() != b.digest()
        assert a.digest() == parse_lexicon("kind: PolarityWord\n\ngood ; again\n", "words").digest()

    @pytest.mark.parametrize(
        "text",
        [
            "good\n",
            "kind: Sentiment\ngood\n",
            "kind: PolarityWord\ngood\ngood\n",
            "kind: PriorScored\ngood\n",
            "kind: PolarityWord\ngood\t1.0\n",
            "kind: PriorScored\ngood\tabc\n",
            "",
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(LexiconError):
            parse_lexicon(text, "broken")

    def test_load_dir_sorted(self, tmp_path):
        write_lexicon(tmp_path, "zeta", "AspectCue", ["tutor"])
        write_lexicon(tmp_path, "alpha", "PolarityWord", ["good"])
        (tmp_path / "notes.md").write_text("ignored", encoding="utf-8")
        assert [lex.name for lex in load_lexicon_dir(tmp_path)] == ["alpha", "zeta"]

    def test_missing_dir(self, tmp_path):
        missing = tmp_path / "lexicons"
        with pytest.raises(LexiconError) as info:
            load_lexicon_dir(missing)
        assert str(missing) in str(info.value)

    def test_negation_triggers(self):
        assert {"not", "n't"} <= negation_triggers([])
        custom = parse_lexicon("kind: Negation\nnever\n", "neg")
        assert negation_triggers([custom]) == frozenset({"never"})


class TestLexiconFeatures:
    def test_counts_and_priors(self):
        cues = parse_lexicon("kind: AspectCue\ntutor\n", "cues")
        priors = parse_lexicon("kind: PriorScored\ngreat\t2\nawful\t-1.5\nmeh\t0\n", "priors")
        tokens = ["tutor", "great", "tutor", "awful", "meh"]
        features = lexicon_features(tokens, [cues, priors])
        assert features[lexicon_feature_id("cues", "count")] == 2.0
        assert features[lexicon_feature_id("priors", "pos")] == 2.0
        assert features[lexicon_feature_id("priors", "neg")] == 1.5
        assert features[lexicon_feature_id("priors", "zero")] == 1.0

    def test_kind_filter(self):
        cues = parse_lexicon("kind: AspectCue\ntutor\n", "cues")
        assert lexicon_features(["tutor"], [cues], {LexiconKind.POLARITY_WORD}) == {}

    def test_negation_lexicon_has_no_features(self):
        negation = parse_lexicon("kind: Negation\nnot\n", "neg")
        assert lexicon_features(["not"], [negation]) == {}


class TestNegation:
    def test_tokens_after_first_trigger(self):
        features = negation_features(["the", "tutor", "was", "not", "good", "not"], frozenset({"not"}))
        assert set(features) == {negation_feature_id("good"), negation_feature_id("not")}

    def test_no_trigger(self):
        assert negation_features(["fine"], frozenset({"not"})) == {}

    def test_trigger_at_end(self):
        assert negation_features(["good", "not"], frozenset({"not"})) == {}

    def test_repeated_tokens_share_one_feature(self):
        tokens = tokenize("not good , not good at all")
        after = tokens[tokens.index("not") + 1 :]
        features = negation_features(tokens, frozenset({"not"}))
        assert len(after) == 6
        assert len(features) == len(set(after)) == 5
        assert features[negation_feature_id("good")] == 1.0


class TestLexiconFeatureIds:
    def test_distinct_lexicons_pass(self):
        check_lexicon_feature_ids(
            [
                parse_lexicon("kind: AspectCue\ntutor\n", "cues"),
                parse_lexicon("kind: PriorScored\ngreat\t2\n", "priors"),
                parse_lexicon("kind: Negation\nnot\n", "cues"),
            ]
        )

    def test_duplicate_names_rejected(self):
        with pytest.raises(LexiconError):
            check_lexicon_feature_ids(
                [
                    parse_lexicon("kind: AspectCue\ntutor\n", "words"),
                    parse_lexicon("kind: PolarityWord\ngood\n", "words"),
                ]
            )

    def test_hash_collision_rejected(self, monkeypatch):
        monkeypatch.setattr(extract, "hashed_feature_id", lambda family, key: feature_id(family, 7))
        with pytest.raises(LexiconError):
            check_lexicon_feature_ids(
                [
                    parse_lexicon("kind: AspectCue\ntutor\n", "cues"),
                    parse_lexicon("kind: PolarityWord\ngood\n", "words"),
                ]
            )


class TestAssemble:
    @pytest.fixture
    def vocab(self):
        return fit_vocabulary([tokenize("the tutor was not good"), tokenize("fees are high")])

    def test_namespaces_disjoint(self, vocab):
        lexicons = [
            parse_lexicon("kind: AspectCue\ntutor\n", "cues"),
            parse_lexicon("kind: PolarityWord\ngood\n", "words"),
        ]
        tokens = tokenize("the tutor was not good")
        aspect = assemble(tokens, vocab, lexicons, Profile.ASPECT)
        polarity = assemble(tokens, vocab, lexicons, Profile.POLARITY)
        assert {family_of(f) for f in aspect} == {Family.TEXT, Family.LEXICON}
        assert {family_of(f) for f in polarity} == {Family.TEXT, Family.LEXICON, Family.NEGATION}
        assert lexicon_feature_id("words", "count") not in aspect
        assert lexicon_feature_id("cues", "count") not in polarity

    def test_polarity_profile_uses_bigrams_only(self, vocab):
        tokens = tokenize("the tutor was")
        polarity = assemble(tokens, vocab, [], Profile.POLARITY)
        orders = {gram_order(vocab.terms[f & 0xFFFFFFFF]) for f in polarity if family_of(f) is Family.TEXT}
        assert orders == {2}

    def test_aspect_profile_orders(self, vocab):
        aspect = assemble(tokenize("the tutor was"), vocab, [], Profile.ASPECT)
        orders = {gram_order(vocab.terms[f & 0xFFFFFFFF]) for f in aspect}
        assert orders == {1, 2, 3}
