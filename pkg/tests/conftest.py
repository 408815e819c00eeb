"""Shared fixtures and instance generators."""

from __future__ import annotations

import random

import pytest

from loopsum.concepts import ConceptIndex, ConceptUnit, build_concept_index
from loopsum.corpus import corpus_from_texts
from loopsum.feedback import ACCEPT, REJECT, Feedback, new_state
from loopsum.optimizer import Budget, BudgetMode, ScoringMode

NEWS = [
    ("d1", "The city approved the harbor bridge design on Monday. "
           "Officials expect construction to start in spring."),
    ("d2", "Construction of the harbor bridge will start in spring. "
           "The bridge design took officials two years."),
    ("d3", "Residents praised the harbor bridge design. "
           "The city plans a ferry terminal nearby. "
           "Officials expect the terminal to open soon."),
]


@pytest.fixture
def news_corpus():
    return corpus_from_texts("news", NEWS)


@pytest.fixture
def news_index(news_corpus):
    return build_concept_index(news_corpus, ConceptUnit.UNIGRAM)


def synth_instance(rng: random.Random, max_sentences: int = 12):
    """One random solver instance: (state, index, budget, scoring).

    Weights land anywhere in [-1, 1] through labels, with a sprinkle
    of small provisional weights and rejected sentences so feasibility
    handling is exercised too.
    """
    n_sent = rng.randint(1, max_sentences)
    n_concepts = rng.randint(2, 3 * n_sent)
    keys = [f"c{i:02d}" for i in range(n_concepts)]

    sentence_concepts = {}
    lengths = {}
    occurrences: dict[str, set[int]] = {k: set() for k in keys}
    for sid in range(n_sent):
        picked = rng.sample(keys, rng.randint(1, min(6, n_concepts)))
        sentence_concepts[sid] = tuple(picked)
        lengths[sid] = rng.randint(2, 12)
        for k in picked:
            occurrences[k].add(sid)
    occurrences = {k: v for k, v in occurrences.items() if v}
    sentence_concepts = {
        sid: tuple(k for k in ks if k in occurrences)
        for sid, ks in sentence_concepts.items()
    }
    index = ConceptIndex(
        unit=ConceptUnit.UNIGRAM,
        occurrences={k: frozenset(v) for k, v in occurrences.items()},
        doc_frequency={k: 1 for k in occurrences},
        sentence_concepts=sentence_concepts,
        sentence_lengths=lengths,
    )

    provisional = {}
    labels = []
    for k in occurrences:
        if rng.random() < 0.8:
            w = rng.uniform(-1.0, 1.0)
            action = ACCEPT if w >= 0 else REJECT
            labels.append(Feedback(k, action, abs(w), 1.0))
        else:
            provisional[k] = rng.uniform(0.0, 0.1)
    state = new_state(n_sent, provisional)
    from loopsum.feedback import apply_batch, reject_sentence
    state = apply_batch(state, labels)
    for sid in range(n_sent):
        if n_sent > 1 and rng.random() < 0.1:
            state = reject_sentence(state, sid)

    if rng.random() < 0.5:
        budget = Budget(BudgetMode.WORDS, rng.randint(2, 40))
    else:
        budget = Budget(BudgetMode.SENTENCES, rng.randint(1, max(1, n_sent)))
    scoring = rng.choice([ScoringMode.COVERAGE, ScoringMode.OCCURRENCE])
    return state, index, budget, scoring
