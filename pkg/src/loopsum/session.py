"""The interactive loop: query concepts, take feedback, re-solve, repeat.

A session binds one corpus to one configuration and walks the cycle
until the user is satisfied, the concept pool is exhausted, or the
iteration cap is hit. Sessions are immutable values; every operation
returns a new session, which makes feedback application atomic and
replay from a transcript deterministic by construction.

Query selection is deliberately simple: concepts appearing in the
current candidate summary come first (their labels move the next solve
the most), then concepts from group-representative sentences in rank
order, then everything else by rank. Within each bucket, concepts are
ordered by occurrence count times the initial score of their best
containing sentence, descending. A key is only ever offered once.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .concepts import ConceptIndex, ConceptUnit, build_concept_index
from .corpus import Corpus, CorpusError, Document, Sentence, tokenize
from .feedback import (
    ACCEPT,
    Feedback,
    FeedbackState,
    apply_batch,
    feedback_from_record,
    new_state,
    reject_sentence,
)
from .optimizer import (
    Budget,
    BudgetMode,
    ScoringMode,
    Selection,
    score_summary,
    solve,
)
from .ranking import (
    RankedSentences,
    SentenceGroups,
    corpus_idf,
    group_similar,
    initial_rank,
    provisional_weights,
)

SESSION_FORMAT = "loopsum-session"
SESSION_VERSION = 1

PROVISIONAL_SCALE = 0.1


class SessionError(Exception):
    pass


class TerminationReason(str, Enum):
    USER_SATISFIED = "user_satisfied"
    NO_NEW_CONCEPTS = "no_new_concepts"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class SessionConfig:
    budget: Budget
    unit: ConceptUnit = ConceptUnit.UNIGRAM
    scoring: ScoringMode = ScoringMode.COVERAGE
    query_batch_size: int = 10
    max_iterations: int = 10
    grouping_threshold: float = 0.7
    exact_cap: int = 24

    def __post_init__(self) -> None:
        if self.query_batch_size < 1:
            raise SessionError("query_batch_size must be >= 1")
        if self.max_iterations < 1:
            raise SessionError("max_iterations must be >= 1")
        if not 0.0 <= self.grouping_threshold <= 1.0:
            raise SessionError("grouping_threshold must lie in [0, 1]")


@dataclass(frozen=True)
class QueryItem:
    """One concept offered for labeling, with display context."""

    concept_key: str
    unit: ConceptUnit
    occurrence_count: int
    best_sent_id: int
    group_sent_ids: tuple[int, ...]


@dataclass(frozen=True)
class Session:
    session_id: str
    corpus: Corpus
    config: SessionConfig
    # The config the session started with. Amendments move ``config``
    # only; replays must begin from here or amend events apply twice.
    initial_config: SessionConfig = field(repr=False)
    index: ConceptIndex = field(repr=False)
    ranked: RankedSentences = field(repr=False)
    groups: SentenceGroups = field(repr=False)
    salience: Mapping[str, float] = field(repr=False)
    feedback_state: FeedbackState
    current_selection: Selection
    iteration: int
    queried: frozenset[str]
    pending: tuple[str, ...]
    terminated: bool = False
    termination_reason: TerminationReason | None = None
    transcript: tuple[dict, ...] = ()


def _concept_salience(index: ConceptIndex,
                      ranked: RankedSentences) -> dict[str, float]:
    return {
        key: len(sids) * max(ranked.scores[sid] for sid in sids)
        for key, sids in index.occurrences.items()
    }


def _query_pool(session: Session) -> list[str]:
    """All unqueried concept keys, in offer order (see module docstring)."""
    taken = set(session.queried)
    pool: list[str] = []

    def add_bucket(sent_ids: Iterable[int]) -> None:
        bucket: list[str] = []
        for sid in sent_ids:
            for key in session.index.sentence_concepts[sid]:
                if key not in taken:
                    taken.add(key)
                    bucket.append(key)
        bucket.sort(key=lambda k: (-session.salience[k], k))
        pool.extend(bucket)

    selected = set(session.current_selection.sent_ids)
    add_bucket(sorted(selected))
    for sid in session.groups.representatives:
        if sid not in selected:
            add_bucket([sid])
    for sid in session.ranked.order:
        add_bucket([sid])
    return pool


def _with_fresh_queries(session: Session) -> Session:
    """Refill the pending batch and mark its keys as offered.

    Marking happens here, not when the batch is read, so reading queries
    is idempotent while no key is ever offered twice across refreshes.
    """
    pending = tuple(_query_pool(session)[: session.config.query_batch_size])
    return replace(
        session, pending=pending, queried=session.queried | set(pending)
    )


def start_session(
    corpus: Corpus,
    config: SessionConfig,
    session_id: str | None = None,
) -> Session:
    """Build the iteration-0 session: rank, seed weights, solve once."""
    if corpus.num_sentences == 0:
        raise CorpusError("empty corpus")
    index = build_concept_index(corpus, config.unit)
    unigram_index = (
        index if config.unit is ConceptUnit.UNIGRAM
        else build_concept_index(corpus, ConceptUnit.UNIGRAM)
    )
    ranked = initial_rank(corpus, unigram_index)
    idf = corpus_idf(corpus)
    groups = group_similar(
        corpus, config.grouping_threshold,
        index=unigram_index, ranked=ranked, idf=idf,
    )
    provisional = provisional_weights(index, ranked, scale=PROVISIONAL_SCALE)
    state = new_state(corpus.num_sentences, provisional)
    selection = solve(
        state, index, config.budget, config.scoring, cap=config.exact_cap
    )
    session = Session(
        session_id=session_id or uuid.uuid4().hex[:12],
        corpus=corpus,
        config=config,
        initial_config=config,
        index=index,
        ranked=ranked,
        groups=groups,
        salience=_concept_salience(index, ranked),
        feedback_state=state,
        current_selection=selection,
        iteration=0,
        queried=frozenset(),
        pending=(),
    )
    return _with_fresh_queries(session)


def next_queries(session: Session, k: int | None = None) -> list[QueryItem]:
    """The pending query batch (up to k items). Read-only and idempotent."""
    if session.terminated:
        raise SessionError("session is terminated")
    if k is None:
        k = session.config.query_batch_size
    items = []
    for key in session.pending[:k]:
        sids = session.index.occurrences[key]
        best = min(
            sids, key=lambda sid: (-session.ranked.scores[sid], sid)
        )
        items.append(
            QueryItem(
                concept_key=key,
                unit=session.config.unit,
                occurrence_count=len(sids),
                best_sent_id=best,
                group_sent_ids=session.groups.members(best),
            )
        )
    return items


def _check_batch(session: Session, batch: Sequence[Feedback]) -> None:
    for fb in batch:
        if fb.concept_key not in session.queried and fb.concept_key not in session.index:
            raise SessionError(
                f"concept {fb.concept_key!r} was never queried and does not "
                f"occur in the corpus"
            )


def submit_feedback(
    session: Session,
    batch: Sequence[Feedback],
    reject_sentences: Sequence[int] = (),
) -> Session:
    """Apply one feedback batch atomically, re-solve, advance the loop.

    Any validation failure raises before the session changes; feedback
    and sentence rejections land together or not at all.
    """
    if session.terminated:
        raise SessionError("session is terminated")
    _check_batch(session, batch)
    state = apply_batch(session.feedback_state, batch)
    for sid in reject_sentences:
        state = reject_sentence(state, sid)

    selection = solve(
        state, session.index, session.config.budget,
        session.config.scoring, cap=session.config.exact_cap,
    )
    event = {
        "type": "feedback",
        "batch": [
            {
                "concept": fb.concept_key,
                "action": "accept" if fb.action == ACCEPT else "reject",
                "weight": fb.weight,
                "confidence": fb.confidence,
            }
            for fb in batch
        ],
        "reject_sentences": [int(s) for s in reject_sentences],
    }
    session = replace(
        session,
        feedback_state=state,
        current_selection=selection,
        iteration=session.iteration + 1,
        queried=session.queried | {fb.concept_key for fb in batch},
        transcript=session.transcript + (event,),
    )
    session = _with_fresh_queries(session)
    if not session.pending:
        return replace(
            session,
            terminated=True,
            termination_reason=TerminationReason.NO_NEW_CONCEPTS,
        )
    if session.iteration >= session.config.max_iterations:
        return replace(
            session,
            pending=(),
            terminated=True,
            termination_reason=TerminationReason.MAX_ITERATIONS,
        )
    return session


def mark_satisfied(session: Session) -> Session:
    """Freeze the current selection as the final summary. Idempotent."""
    if session.terminated:
        return session
    return replace(
        session,
        pending=(),
        terminated=True,
        termination_reason=TerminationReason.USER_SATISFIED,
        transcript=session.transcript + ({"type": "satisfied"},),
    )


def amend_budget(session: Session, budget: Budget) -> Session:
    """Change the budget between iterations and re-solve immediately."""
    if session.terminated:
        raise SessionError("session is terminated")
    config = replace(session.config, budget=budget)
    selection = solve(
        session.feedback_state, session.index, budget,
        config.scoring, cap=config.exact_cap,
    )
    event = {
        "type": "amend",
        "budget": {"mode": budget.mode.value, "limit": budget.limit},
    }
    return replace(
        session,
        config=config,
        current_selection=selection,
        transcript=session.transcript + (event,),
    )


def display_score(session: Session) -> float:
    """Objective over labeled concepts only; seed weights never show."""
    return score_summary(
        session.current_selection.sent_ids,
        session.feedback_state,
        session.index,
        session.config.scoring,
        labeled_only=True,
    )


def summary_text(session: Session) -> str:
    """Selected sentences in document order, one per line."""
    return "\n".join(
        session.corpus.sentence(sid).text
        for sid in sorted(session.current_selection.sent_ids)
    )


def summary_structured(session: Session) -> dict:
    sel = session.current_selection
    weights = {
        key: {
            "action": "accept" if fb.action == ACCEPT else "reject",
            "weight": fb.weight,
            "confidence": fb.confidence,
            "effective": fb.effective,
        }
        for key, fb in sorted(session.feedback_state.labels.items())
    }
    return {
        "session_id": session.session_id,
        "cluster_id": session.corpus.cluster_id,
        "iteration": session.iteration,
        "terminated": session.terminated,
        "termination_reason": (
            session.termination_reason.value
            if session.termination_reason else None
        ),
        "sent_ids": sorted(sel.sent_ids),
        "sentences": [
            {
                "sent_id": sid,
                "doc_id": session.corpus.sentence(sid).doc_id,
                "text": session.corpus.sentence(sid).text,
            }
            for sid in sorted(sel.sent_ids)
        ],
        "used_budget": sel.used_budget,
        "budget": {
            "mode": session.config.budget.mode.value,
            "limit": session.config.budget.limit,
        },
        "scoring": sel.mode.value,
        "score": display_score(session),
        "raw_score": sel.score,
        "weights": weights,
    }


def _corpus_to_record(corpus: Corpus) -> dict:
    return {
        "cluster_id": corpus.cluster_id,
        "documents": [
            {
                "doc_id": doc.doc_id,
                "title": doc.title,
                "sentences": [s.text for s in doc.sentences],
            }
            for doc in corpus.documents
        ],
    }


def _corpus_from_record(record: dict) -> Corpus:
    # Sentences are stored pre-split so ids and boundaries survive the
    # round trip exactly; re-splitting could disagree.
    documents = []
    next_id = 0
    for doc in record["documents"]:
        sentences = []
        for text in doc["sentences"]:
            sentences.append(
                Sentence(
                    sent_id=next_id,
                    doc_id=doc["doc_id"],
                    text=text,
                    tokens=tuple(tokenize(text)),
                )
            )
            next_id += 1
        documents.append(
            Document(
                doc_id=doc["doc_id"],
                sentences=tuple(sentences),
                title=doc.get("title"),
            )
        )
    return Corpus(cluster_id=record["cluster_id"], documents=tuple(documents))


def _config_to_record(config: SessionConfig) -> dict:
    return {
        "unit": config.unit.value,
        "budget": {
            "mode": config.budget.mode.value,
            "limit": config.budget.limit,
        },
        "scoring": config.scoring.value,
        "query_batch_size": config.query_batch_size,
        "max_iterations": config.max_iterations,
        "grouping_threshold": config.grouping_threshold,
        "exact_cap": config.exact_cap,
    }


def config_from_record(record: Mapping) -> SessionConfig:
    budget = record["budget"]
    return SessionConfig(
        budget=Budget(
            mode=BudgetMode(budget["mode"]), limit=int(budget["limit"])
        ),
        unit=ConceptUnit(record.get("unit", "unigram")),
        scoring=ScoringMode(record.get("scoring", "coverage")),
        query_batch_size=int(record.get("query_batch_size", 10)),
        max_iterations=int(record.get("max_iterations", 10)),
        grouping_threshold=float(record.get("grouping_threshold", 0.7)),
        exact_cap=int(record.get("exact_cap", 24)),
    )


def save_session(session: Session, path: str | Path) -> None:
    """Write a self-contained, replayable session file."""
    record = {
        "format": SESSION_FORMAT,
        "version": SESSION_VERSION,
        "session_id": session.session_id,
        "config": _config_to_record(session.initial_config),
        "corpus": _corpus_to_record(session.corpus),
        "corpus_hash": session.corpus.content_hash(),
        "transcript": list(session.transcript),
    }
    Path(path).write_text(
        json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_session(path: str | Path) -> Session:
    """Rebuild a session by replaying its transcript. Deterministic."""
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SessionError(f"cannot read session file: {exc}")
    if not isinstance(record, dict) or record.get("format") != SESSION_FORMAT:
        raise SessionError(
            f"not a session file: format is "
            f"{record.get('format') if isinstance(record, dict) else None!r}"
        )
    if record.get("version") != SESSION_VERSION:
        raise SessionError(
            f"unsupported session version: {record.get('version')!r}"
        )
    corpus = _corpus_from_record(record["corpus"])
    if corpus.content_hash() != record["corpus_hash"]:
        raise SessionError("session file corrupt: corpus hash mismatch")
    config = config_from_record(record["config"])
    session = start_session(corpus, config, session_id=record["session_id"])
    for event in record["transcript"]:
        kind = event.get("type")
        if kind == "feedback":
            batch = [feedback_from_record(r) for r in event["batch"]]
            session = submit_feedback(
                session, batch, event.get("reject_sentences", ())
            )
        elif kind == "amend":
            budget = event["budget"]
            session = amend_budget(
                session,
                Budget(mode=BudgetMode(budget["mode"]),
                       limit=int(budget["limit"])),
            )
        elif kind == "satisfied":
            session = mark_satisfied(session)
        else:
            raise SessionError(f"unknown transcript event: {kind!r}")
    return session
