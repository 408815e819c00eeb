"""Concept extraction and the concept-occurrence index.

A concept is the unit users label: a unigram, a bigram, or a whole
sentence, identified by a normalized string key. Keys are what feedback
weights attach to, so equal keys mean one shared weight no matter how
many sentences the concept occurs in.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Mapping

from .corpus import Corpus, Sentence


class ConceptUnit(str, Enum):
    UNIGRAM = "unigram"
    BIGRAM = "bigram"
    SENTENCE = "sentence"


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The bundled English stopword list."""
    text = (
        resources.files("loopsum").joinpath("assets/stopwords_en.txt")
        .read_text(encoding="utf-8")
    )
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class Concept:
    """A labelable content unit, identified by its normalized key."""

    key: str
    unit: ConceptUnit


@dataclass(frozen=True)
class ConceptIndex:
    """Occurrence index of every concept in a corpus, at one unit.

    ``sentence_concepts`` is the inverse mapping, kept so scoring never
    has to re-derive which concepts a sentence contributes.
    """

    unit: ConceptUnit
    occurrences: Mapping[str, frozenset[int]]
    doc_frequency: Mapping[str, int]
    sentence_concepts: Mapping[int, tuple[str, ...]]
    sentence_lengths: Mapping[int, int]

    def __contains__(self, key: str) -> bool:
        return key in self.occurrences

    @property
    def num_concepts(self) -> int:
        return len(self.occurrences)


def extract_concepts(sentence: Sentence, unit: ConceptUnit) -> list[Concept]:
    """Distinct concepts of one sentence, in first-occurrence order.

    Unigrams drop stopwords; bigrams drop pairs of two stopwords; the
    sentence unit yields a single concept keyed by the space-joined
    token sequence. A token repeated within the sentence counts once.
    """
    stops = stopwords()
    keys: list[str] = []
    seen: set[str] = set()
    if unit is ConceptUnit.UNIGRAM:
        candidates = (t for t in sentence.tokens if t not in stops)
    elif unit is ConceptUnit.BIGRAM:
        candidates = (
            f"{a} {b}"
            for a, b in zip(sentence.tokens, sentence.tokens[1:])
            if a not in stops or b not in stops
        )
    elif unit is ConceptUnit.SENTENCE:
        candidates = iter([" ".join(sentence.tokens)])
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown concept unit: {unit!r}")
    for key in candidates:
        if key not in seen:
            seen.add(key)
            keys.append(key)
    return [Concept(key=k, unit=unit) for k in keys]


def build_concept_index(corpus: Corpus, unit: ConceptUnit) -> ConceptIndex:
    """Index concept occurrences and document frequencies for a corpus."""
    occurrences: dict[str, set[int]] = {}
    docs_with: dict[str, set[str]] = {}
    sentence_concepts: dict[int, tuple[str, ...]] = {}
    sentence_lengths: dict[int, int] = {}
    for sentence in corpus.sentences():
        keys = tuple(c.key for c in extract_concepts(sentence, unit))
        sentence_concepts[sentence.sent_id] = keys
        sentence_lengths[sentence.sent_id] = sentence.length_words
        for key in keys:
            occurrences.setdefault(key, set()).add(sentence.sent_id)
            docs_with.setdefault(key, set()).add(sentence.doc_id)
    return ConceptIndex(
        unit=unit,
        occurrences={k: frozenset(v) for k, v in occurrences.items()},
        doc_frequency={k: len(v) for k, v in docs_with.items()},
        sentence_concepts=sentence_concepts,
        sentence_lengths=sentence_lengths,
    )
