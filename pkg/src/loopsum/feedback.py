"""The cumulative feedback ledger and signed effective concept weights.

One user judgment is a :class:`Feedback`: accept (+1) or reject (-1) a
concept, with an importance weight and a confidence, both in [0, 1].
The ledger keeps the latest judgment per concept key (last write wins),
so every occurrence of a concept sees the same effective weight:
``action * confidence * weight``.

Unlabeled concepts may carry a small provisional weight seeded from the
initial ranking; a real label replaces the provisional entry outright.
Rejecting a *sentence* is a separate mechanism: the sentence becomes
infeasible for every later selection, but the weights of the concepts
inside it are deliberately left untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

ACCEPT = 1
REJECT = -1


class FeedbackError(ValueError):
    """Raised for out-of-range or malformed feedback."""


@dataclass(frozen=True)
class Feedback:
    """One judgment on one concept."""

    concept_key: str
    action: int
    weight: float
    confidence: float = 1.0

    def __post_init__(self) -> None:
        if not self.concept_key:
            raise FeedbackError("feedback concept key is empty")
        if self.action not in (ACCEPT, REJECT):
            raise FeedbackError(
                f"action must be {ACCEPT} (accept) or {REJECT} (reject), "
                f"got {self.action!r}"
            )
        if not 0.0 <= self.weight <= 1.0:
            raise FeedbackError(f"weight {self.weight!r} outside [0, 1]")
        if not 0.0 <= self.confidence <= 1.0:
            raise FeedbackError(f"confidence {self.confidence!r} outside [0, 1]")

    @property
    def effective(self) -> float:
        return self.action * self.confidence * self.weight


@dataclass(frozen=True)
class FeedbackState:
    """Cumulative feedback: labels, provisional weights, rejected sentences.

    A concept key lives in ``labels`` or ``provisional``, never both.
    States are immutable; transitions return new states.
    """

    num_sentences: int
    labels: Mapping[str, Feedback] = field(default_factory=dict)
    provisional: Mapping[str, float] = field(default_factory=dict)
    rejected_sentences: frozenset[int] = frozenset()

    def effective_weight(self, concept_key: str) -> float:
        fb = self.labels.get(concept_key)
        if fb is not None:
            return fb.effective
        return self.provisional.get(concept_key, 0.0)

    def is_labeled(self, concept_key: str) -> bool:
        return concept_key in self.labels


def new_state(num_sentences: int,
              provisional: Mapping[str, float] | None = None) -> FeedbackState:
    return FeedbackState(
        num_sentences=num_sentences,
        provisional=dict(provisional or {}),
    )


def apply_feedback(state: FeedbackState, fb: Feedback) -> FeedbackState:
    """Record ``fb``, overwriting any prior label or provisional weight."""
    labels = dict(state.labels)
    labels[fb.concept_key] = fb
    provisional = state.provisional
    if fb.concept_key in provisional:
        provisional = dict(provisional)
        del provisional[fb.concept_key]
    return replace(state, labels=labels, provisional=provisional)


def apply_batch(state: FeedbackState, batch: Iterable[Feedback]) -> FeedbackState:
    for fb in batch:
        state = apply_feedback(state, fb)
    return state


def reject_sentence(state: FeedbackState, sent_id: int) -> FeedbackState:
    """Exclude a sentence from all later selections.

    Concept labels are not touched: a sentence can be rejected for
    redundancy without implying anything about its concepts.
    """
    if (isinstance(sent_id, bool) or not isinstance(sent_id, int)
            or not 0 <= sent_id < state.num_sentences):
        raise FeedbackError(f"unknown sentence id: {sent_id!r}")
    return replace(
        state, rejected_sentences=state.rejected_sentences | {sent_id}
    )


def feedback_from_record(record: Mapping) -> Feedback:
    """Parse one feedback record of the external batch format.

    Records look like ``{"concept": ..., "action": "accept"|"reject",
    "weight": ..., "confidence": ...}``; confidence defaults to 1.
    """
    try:
        concept = record["concept"]
        action_name = record["action"]
        weight = record["weight"]
    except KeyError as exc:
        raise FeedbackError(f"feedback record missing field {exc.args[0]!r}")
    actions = {"accept": ACCEPT, "reject": REJECT}
    if action_name not in actions:
        raise FeedbackError(f"unknown action {action_name!r}")
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        raise FeedbackError(f"weight must be a number, got {weight!r}")
    confidence = record.get("confidence", 1.0)
    if not isinstance(confidence, (int, float)) or isinstance(confidence, bool):
        raise FeedbackError(f"confidence must be a number, got {confidence!r}")
    return Feedback(
        concept_key=str(concept),
        action=actions[action_name],
        weight=float(weight),
        confidence=float(confidence),
    )
