"""Simulated users for evaluation.

Two oracles answer concept queries the way the evaluation protocol
prescribes: one from a hand-authored per-topic keyword table, one from
reference summaries (a concept found in any reference is accepted at
full weight, anything else rejected at full weight). ``run_simulation``
drives a whole session with an oracle and records a per-iteration trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .concepts import ConceptUnit, extract_concepts
from .corpus import Corpus, Sentence, split_sentences, tokenize
from .feedback import ACCEPT, REJECT, Feedback
from .rouge import RougeConfig, RougeMode, rouge_l, rouge_n
from .session import (
    QueryItem,
    Session,
    SessionConfig,
    display_score,
    next_queries,
    start_session,
    submit_feedback,
    summary_text,
)


class OracleError(Exception):
    pass


# An oracle maps a query batch to a feedback batch.
Oracle = Callable[[Sequence[QueryItem]], list[Feedback]]

ABSENT_REJECT_WEIGHT = 0.5


@dataclass(frozen=True)
class KeywordEntry:
    concept_key: str
    action: int
    weight: float


@dataclass(frozen=True)
class KeywordTable:
    """Hand-authored concept judgments for one topic cluster."""

    cluster_id: str
    entries: Mapping[str, KeywordEntry]


@dataclass(frozen=True)
class ReferenceSet:
    """Reference summary texts per cluster."""

    references: Mapping[str, tuple[str, ...]]

    def for_cluster(self, cluster_id: str) -> tuple[str, ...]:
        if cluster_id not in self.references:
            raise OracleError(f"no references for cluster {cluster_id!r}")
        return self.references[cluster_id]


def load_keyword_tables(path: str | Path) -> dict[str, KeywordTable]:
    """Read ``{cluster, concept, action, weight}`` records, one per line."""
    tables: dict[str, dict[str, KeywordEntry]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise OracleError(f"line {lineno}: invalid json ({exc.msg})")
            try:
                cluster = obj["cluster"]
                concept = obj["concept"]
                action = obj["action"]
                weight = float(obj["weight"])
            except (KeyError, TypeError, ValueError) as exc:
                raise OracleError(f"line {lineno}: bad record ({exc})")
            if action not in ("accept", "reject"):
                raise OracleError(f"line {lineno}: unknown action {action!r}")
            if not 0.0 <= weight <= 1.0:
                raise OracleError(f"line {lineno}: weight outside [0, 1]")
            tables.setdefault(cluster, {})[concept] = KeywordEntry(
                concept_key=concept,
                action=ACCEPT if action == "accept" else REJECT,
                weight=weight,
            )
    return {
        cluster: KeywordTable(cluster_id=cluster, entries=entries)
        for cluster, entries in tables.items()
    }


def load_references(root: str | Path) -> ReferenceSet:
    """Read ``<root>/<cluster_id>/ref_*.txt`` into a ReferenceSet."""
    root = Path(root)
    references: dict[str, tuple[str, ...]] = {}
    for cluster_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        texts = tuple(
            p.read_text(encoding="utf-8").strip()
            for p in sorted(cluster_dir.glob("ref_*.txt"))
        )
        if texts:
            references[cluster_dir.name] = texts
    return ReferenceSet(references=references)


def _query_key(query: QueryItem | str) -> str:
    return query if isinstance(query, str) else query.concept_key


def keyword_oracle(
    table: KeywordTable,
    queries: Sequence[QueryItem | str],
) -> list[Feedback]:
    """Answer from the table; unlisted concepts get a mild reject."""
    batch = []
    for query in queries:
        key = _query_key(query)
        entry = table.entries.get(key)
        if entry is not None:
            batch.append(
                Feedback(
                    concept_key=key,
                    action=entry.action,
                    weight=entry.weight,
                    confidence=1.0,
                )
            )
        else:
            batch.append(
                Feedback(
                    concept_key=key,
                    action=REJECT,
                    weight=ABSENT_REJECT_WEIGHT,
                    confidence=1.0,
                )
            )
    return batch


def reference_concept_keys(
    references: Sequence[str], unit: ConceptUnit
) -> frozenset[str]:
    """All concept keys occurring in the reference texts, at one unit."""
    keys: set[str] = set()
    for text in references:
        for piece in split_sentences(text):
            tokens = tuple(tokenize(piece))
            if not tokens:
                continue
            pseudo = Sentence(sent_id=-1, doc_id="ref", text=piece,
                              tokens=tokens)
            keys.update(c.key for c in extract_concepts(pseudo, unit))
    return frozenset(keys)


def reference_oracle(
    refs: ReferenceSet,
    cluster_id: str,
    queries: Sequence[QueryItem | str],
    unit: ConceptUnit,
) -> list[Feedback]:
    """Accept at full weight what the references contain, reject the rest."""
    keys = reference_concept_keys(refs.for_cluster(cluster_id), unit)
    batch = []
    for query in queries:
        key = _query_key(query)
        present = key in keys
        batch.append(
            Feedback(
                concept_key=key,
                action=ACCEPT if present else REJECT,
                weight=1.0,
                confidence=1.0,
            )
        )
    return batch


def make_keyword_oracle(table: KeywordTable) -> Oracle:
    return lambda queries: keyword_oracle(table, queries)


def make_reference_oracle(
    refs: ReferenceSet, cluster_id: str, unit: ConceptUnit
) -> Oracle:
    keys = reference_concept_keys(refs.for_cluster(cluster_id), unit)

    def answer(queries: Sequence[QueryItem | str]) -> list[Feedback]:
        return [
            Feedback(
                concept_key=_query_key(q),
                action=ACCEPT if _query_key(q) in keys else REJECT,
                weight=1.0,
                confidence=1.0,
            )
            for q in queries
        ]

    return answer


@dataclass(frozen=True)
class IterationRow:
    """One point of a simulation trace (iteration 0 is pre-feedback)."""

    iteration: int
    action_count: int
    sent_ids: tuple[int, ...]
    objective_score: float
    labeled_score: float
    rouge1: float
    rouge2: float
    rougeL: float


@dataclass(frozen=True)
class IterationTrace:
    cluster_id: str
    unit: ConceptUnit
    rows: tuple[IterationRow, ...]
    termination_reason: str

    @property
    def final(self) -> IterationRow:
        return self.rows[-1]


def _rouge_row(candidate: str, references: Sequence[str],
               stemming: bool = True) -> tuple[float, float, float]:
    config = RougeConfig(mode=RougeMode.FULL_F1, stemming=stemming)
    refs = list(references)
    r1 = rouge_n(candidate, refs, 1, config)
    r2 = rouge_n(candidate, refs, 2, config)
    rl = rouge_l(candidate, refs, config)
    return float(r1.f1), float(r2.f1), float(rl.f1)


def _trace_row(session: Session, references: Sequence[str],
               action_count: int) -> IterationRow:
    r1, r2, rl = _rouge_row(summary_text(session), references)
    return IterationRow(
        iteration=session.iteration,
        action_count=action_count,
        sent_ids=tuple(sorted(session.current_selection.sent_ids)),
        objective_score=session.current_selection.score,
        labeled_score=display_score(session),
        rouge1=r1,
        rouge2=r2,
        rougeL=rl,
    )


def run_simulation(
    corpus: Corpus,
    oracle: Oracle,
    config: SessionConfig,
    references: Sequence[str],
) -> IterationTrace:
    """Drive a session with an oracle until it terminates."""
    if not references:
        raise OracleError("simulation needs references for scoring")
    session = start_session(corpus, config)
    actions = 0
    rows = [_trace_row(session, references, actions)]
    while not session.terminated:
        queries = next_queries(session)
        batch = oracle(queries)
        actions += len(batch)
        session = submit_feedback(session, batch)
        rows.append(_trace_row(session, references, actions))
    assert session.termination_reason is not None
    return IterationTrace(
        cluster_id=corpus.cluster_id,
        unit=config.unit,
        rows=tuple(rows),
        termination_reason=session.termination_reason.value,
    )
