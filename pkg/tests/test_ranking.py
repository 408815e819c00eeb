"""Surrogate ranking, TF-IDF similarity, and redundancy grouping."""

import math

import pytest
from hypothesis import given, strategies as st

from loopsum.concepts import ConceptUnit, build_concept_index, stopwords
from loopsum.corpus import corpus_from_texts
from loopsum.ranking import (
    RankingError,
    corpus_idf,
    group_similar,
    initial_rank,
    provisional_weights,
    sentence_similarity,
)
from oracles import tfidf_cosine


class TestCorpusIdf:
    def test_formula(self, news_corpus):
        idf = corpus_idf(news_corpus)
        # Three documents; "monday" is in one, "the" in all three.
        assert idf["monday"] == 1.0 + math.log(3 / 1)
        assert idf["the"] == 1.0 + math.log(3 / 3)

    def test_covers_stopwords_too(self, news_corpus):
        idf = corpus_idf(news_corpus)
        assert "the" in idf and "on" in idf


class TestSentenceSimilarity:
    def test_identical_sentences_exactly_one(self, news_corpus):
        a = news_corpus.sentence(0)
        assert sentence_similarity(a, a) == 1.0

    def test_equal_token_multisets_exactly_one(self):
        corpus = corpus_from_texts("p", [("a", "Alpha beta gamma. Beta gamma alpha.")])
        s0, s1 = corpus.sentence(0), corpus.sentence(1)
        assert sentence_similarity(s0, s1) == 1.0

    def test_disjoint_sentences_zero(self):
        corpus = corpus_from_texts("d", [("a", "Alpha beta. Gamma delta.")])
        assert sentence_similarity(corpus.sentence(0), corpus.sentence(1)) == 0.0

    def test_matches_reference_cosine(self, news_corpus):
        idf = corpus_idf(news_corpus)
        sents = list(news_corpus.sentences())
        for a in sents:
            for b in sents:
                got = sentence_similarity(a, b, idf=idf)
                want = tfidf_cosine(a.tokens, b.tokens, idf)
                assert got == pytest.approx(want, abs=1e-12)

    def test_unweighted_when_idf_omitted(self):
        corpus = corpus_from_texts("u", [("a", "Alpha beta. Alpha gamma.")])
        got = sentence_similarity(corpus.sentence(0), corpus.sentence(1))
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_symmetry_and_range(self, news_corpus):
        idf = corpus_idf(news_corpus)
        sents = list(news_corpus.sentences())
        for a in sents:
            for b in sents:
                s_ab = sentence_similarity(a, b, idf=idf)
                assert s_ab == sentence_similarity(b, a, idf=idf)
                assert 0.0 <= s_ab <= 1.0


class TestInitialRank:
    def test_hand_computed_scores(self):
        corpus = corpus_from_texts("h", [
            ("a", "Tide rises. Tide falls fast."),
            ("b", "Tide turns."),
        ])
        index = build_concept_index(corpus, ConceptUnit.UNIGRAM)
        ranked = initial_rank(corpus, index)
        # df/N per token: tide 2/2, rises 1/2, falls 1/2, fast 1/2,
        # turns 1/2. Raw scores: s0 (1+0.5)/2, s1 (1+0.5+0.5)/3,
        # s2 (1+0.5)/2. Min-max over [2/3, 3/4] maps s1 to 0, rest to 1.
        assert ranked.scores[0] == 1.0
        assert ranked.scores[1] == 0.0
        assert ranked.scores[2] == 1.0
        assert ranked.order[-1] == 1

    def test_order_sorted_by_score_then_id(self, news_corpus, news_index):
        ranked = initial_rank(news_corpus, news_index)
        keyed = [(-ranked.scores[sid], sid) for sid in ranked.order]
        assert keyed == sorted(keyed)

    def test_degenerate_uniform_scores(self):
        corpus = corpus_from_texts("same", [("a", "Alpha beta. Alpha beta.")])
        index = build_concept_index(corpus, ConceptUnit.UNIGRAM)
        ranked = initial_rank(corpus, index)
        assert set(ranked.scores.values()) == {1.0}

    def test_stopword_only_sentence_scores_low(self):
        corpus = corpus_from_texts("s", [
            ("a", "It was what it was. Tide rises over the flats."),
        ])
        index = build_concept_index(corpus, ConceptUnit.UNIGRAM)
        ranked = initial_rank(corpus, index)
        assert ranked.scores[0] == 0.0

    def test_requires_unigram_index(self, news_corpus):
        bigram_index = build_concept_index(news_corpus, ConceptUnit.BIGRAM)
        with pytest.raises(RankingError):
            initial_rank(news_corpus, bigram_index)


class TestGroupSimilar:
    def test_near_duplicates_grouped(self):
        corpus = corpus_from_texts("g", [
            ("a", "The harbor bridge opened Friday. Commuters cheered loudly."),
            ("b", "The harbor bridge opened Friday. Ferries lost riders."),
        ])
        groups = group_similar(corpus, threshold=0.9)
        assert groups.group_of[0] == groups.group_of[2]
        assert groups.group_of[1] != groups.group_of[3]

    def test_higher_threshold_refines(self, news_corpus):
        loose = group_similar(news_corpus, threshold=0.2)
        strict = group_similar(news_corpus, threshold=0.95)
        # Every strict group must sit inside one loose group.
        for members in strict.groups:
            parents = {loose.group_of[sid] for sid in members}
            assert len(parents) == 1

    def test_representative_is_best_ranked_member(self, news_corpus):
        index = build_concept_index(news_corpus, ConceptUnit.UNIGRAM)
        ranked = initial_rank(news_corpus, index)
        groups = group_similar(news_corpus, threshold=0.5,
                               index=index, ranked=ranked)
        for gid, members in enumerate(groups.groups):
            rep = groups.representatives[gid]
            best = min(members, key=lambda sid: (-ranked.scores[sid], sid))
            assert rep == best

    def test_groups_partition_sentences(self, news_corpus):
        groups = group_similar(news_corpus, threshold=0.7)
        flat = sorted(sid for members in groups.groups for sid in members)
        assert flat == [s.sent_id for s in news_corpus.sentences()]

    def test_members_lookup(self, news_corpus):
        groups = group_similar(news_corpus, threshold=0.7)
        for s in news_corpus.sentences():
            assert s.sent_id in groups.members(s.sent_id)


class TestProvisionalWeights:
    def test_scaled_from_best_containing_sentence(self):
        corpus = corpus_from_texts("w", [
            ("a", "Tide rises. Tide falls fast."),
            ("b", "Tide turns."),
        ])
        index = build_concept_index(corpus, ConceptUnit.UNIGRAM)
        ranked = initial_rank(corpus, index)
        weights = provisional_weights(index, ranked)
        assert weights["tide"] == 0.1 * 1.0
        assert weights["falls"] == 0.1 * 0.0

    def test_scale_parameter(self, news_corpus, news_index):
        ranked = initial_rank(news_corpus, news_index)
        w1 = provisional_weights(news_index, ranked, scale=0.1)
        w2 = provisional_weights(news_index, ranked, scale=0.2)
        for key in w1:
            assert w2[key] == pytest.approx(2 * w1[key], abs=1e-15)

    def test_every_concept_seeded(self, news_corpus, news_index):
        ranked = initial_rank(news_corpus, news_index)
        weights = provisional_weights(news_index, ranked)
        assert set(weights) == set(news_index.occurrences)
        assert all(0.0 <= w <= 0.1 for w in weights.values())
