"""Initial sentence ranking and similarity grouping.

This seeds iteration 0 of a session, before any feedback exists. The
ranking is a deliberately simple salience surrogate: sentences whose
words appear in many documents of the cluster score high, normalized by
sentence length so long sentences do not win by volume alone. Feedback
dominates from iteration 1 on, so the seed only has to be reasonable,
deterministic, and cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .concepts import ConceptIndex, ConceptUnit, build_concept_index, stopwords
from .corpus import Corpus, Sentence


class RankingError(Exception):
    pass


@dataclass(frozen=True)
class RankedSentences:
    """Initial scores in [0,1] and the descending-score order.

    Ties in ``order`` break by ascending sent_id.
    """

    scores: Mapping[int, float]
    order: tuple[int, ...]


@dataclass(frozen=True)
class SentenceGroups:
    """Partition of sentences into similarity groups.

    ``groups`` are each sorted by sent_id and ordered by descending
    representative score; ``representatives`` is parallel to ``groups``.
    ``group_of`` maps every sent_id to its index into ``groups``.
    """

    groups: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]
    group_of: Mapping[int, int] = field(repr=False)

    def members(self, sent_id: int) -> tuple[int, ...]:
        return self.groups[self.group_of[sent_id]]


def corpus_idf(corpus: Corpus) -> dict[str, float]:
    """Smoothed inverse document frequency for every token in the corpus."""
    n_docs = len(corpus.documents)
    df: dict[str, int] = {}
    for doc in corpus.documents:
        for token in {t for s in doc.sentences for t in s.tokens}:
            df[token] = df.get(token, 0) + 1
    return {t: 1.0 + math.log(n_docs / d) for t, d in df.items()}


def sentence_similarity(
    a: Sentence,
    b: Sentence,
    idf: Mapping[str, float] | None = None,
) -> float:
    """Cosine similarity of TF-IDF unigram vectors, in [0,1].

    With ``idf`` omitted every term weighs 1.0 (plain TF cosine).
    Identical token multisets return exactly 1.0.
    """
    counts_a: dict[str, int] = {}
    for t in a.tokens:
        counts_a[t] = counts_a.get(t, 0) + 1
    counts_b: dict[str, int] = {}
    for t in b.tokens:
        counts_b[t] = counts_b.get(t, 0) + 1
    if counts_a == counts_b:
        return 1.0 if counts_a else 0.0

    def weight(token: str, count: int) -> float:
        return count * (idf[token] if idf is not None and token in idf else 1.0)

    dot = 0.0
    for token, count in counts_a.items():
        if token in counts_b:
            dot += weight(token, count) * weight(token, counts_b[token])
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(math.fsum(weight(t, c) ** 2 for t, c in counts_a.items()))
    norm_b = math.sqrt(math.fsum(weight(t, c) ** 2 for t, c in counts_b.items()))
    return min(1.0, dot / (norm_a * norm_b))


def initial_rank(corpus: Corpus, index: ConceptIndex) -> RankedSentences:
    """Document-frequency salience per sentence, min-max scaled to [0,1].

    raw(s) = (sum over non-stopword tokens of doc_frequency/N) / length.
    A corpus where every raw score ties (including a single sentence)
    maps everything to 1.0.
    """
    if index.unit is not ConceptUnit.UNIGRAM:
        raise RankingError("initial ranking requires a unigram concept index")
    stops = stopwords()
    n_docs = len(corpus.documents)
    raw: dict[int, float] = {}
    for sentence in corpus.sentences():
        total = math.fsum(
            index.doc_frequency.get(t, 0) / n_docs
            for t in sentence.tokens
            if t not in stops
        )
        raw[sentence.sent_id] = total / sentence.length_words
    lo = min(raw.values())
    hi = max(raw.values())
    if hi == lo:
        scores = {sid: 1.0 for sid in raw}
    else:
        scores = {sid: (v - lo) / (hi - lo) for sid, v in raw.items()}
    order = tuple(sorted(scores, key=lambda sid: (-scores[sid], sid)))
    return RankedSentences(scores=scores, order=order)


def group_similar(
    corpus: Corpus,
    threshold: float,
    index: ConceptIndex | None = None,
    ranked: RankedSentences | None = None,
    idf: Mapping[str, float] | None = None,
) -> SentenceGroups:
    """Single-link grouping: sentences join when similarity >= threshold.

    The representative of each group is its highest-scored member under
    the initial ranking (ties to the lower sent_id).
    """
    if not 0.0 <= threshold <= 1.0:
        raise RankingError(f"threshold must lie in [0,1], got {threshold!r}")
    if index is None:
        index = build_concept_index(corpus, ConceptUnit.UNIGRAM)
    if ranked is None:
        ranked = initial_rank(corpus, index)
    if idf is None:
        idf = corpus_idf(corpus)
    sentences = list(corpus.sentences())
    parent = {s.sent_id: s.sent_id for s in sentences}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(sentences):
        for b in sentences[i + 1:]:
            if sentence_similarity(a, b, idf) >= threshold:
                ra, rb = find(a.sent_id), find(b.sent_id)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

    clusters: dict[int, list[int]] = {}
    for s in sentences:
        clusters.setdefault(find(s.sent_id), []).append(s.sent_id)

    def rep(members: Sequence[int]) -> int:
        return min(members, key=lambda sid: (-ranked.scores[sid], sid))

    with_reps = sorted(
        ((tuple(sorted(m)), rep(m)) for m in clusters.values()),
        key=lambda pair: (-ranked.scores[pair[1]], pair[1]),
    )
    groups = tuple(g for g, _ in with_reps)
    representatives = tuple(r for _, r in with_reps)
    group_of = {sid: gi for gi, g in enumerate(groups) for sid in g}
    return SentenceGroups(
        groups=groups, representatives=representatives, group_of=group_of
    )


def provisional_weights(
    index: ConceptIndex,
    ranked: RankedSentences,
    scale: float = 0.1,
) -> dict[str, float]:
    """Seed weight per concept before any feedback exists.

    Each concept inherits the initial score of its best containing
    sentence, scaled down so real feedback (weights up to 1.0) always
    dominates. These entries are replaced outright by the first label.
    """
    return {
        key: scale * max(ranked.scores[sid] for sid in sids)
        for key, sids in index.occurrences.items()
    }
