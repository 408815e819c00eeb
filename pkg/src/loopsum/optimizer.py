"""Budgeted selection of sentences by signed concept weight.

The objective sums effective concept weights over the selected
sentences, under a budget on total words (or sentence count). Two
scoring semantics exist:

* ``coverage`` (default): each distinct concept counts once if any
  selected sentence contains it;
* ``occurrence``: each (sentence, concept) incidence counts.

``solve_exact`` is a branch-and-bound search with an admissible bound
(the sum of the positive weights still reachable), used for instances up
to a configurable cap; ``solve_greedy`` is a density-greedy heuristic
with a best-single-sentence safeguard for anything larger.

Scores are compared with ``math.fsum`` over the term multiset, which is
exactly rounded and therefore independent of summation order: two
selections covering the same weights always compare equal, so the
deterministic tie-break (fewer sentences, then lexicographically
smallest id sequence) is well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from . import _kernels
from .concepts import ConceptIndex
from .feedback import FeedbackState

# Slack for pruning on incrementally-accumulated bounds; incumbents are
# always re-scored with fsum before they are compared.
_PRUNE_MARGIN = 1e-9

DEFAULT_EXACT_CAP = 24


class OptimizerError(Exception):
    pass


class ExactInstanceTooLarge(OptimizerError):
    """The exact solver was asked for more sentences than its cap allows."""


class BudgetMode(str, Enum):
    WORDS = "words"
    SENTENCES = "sentences"


class ScoringMode(str, Enum):
    COVERAGE = "coverage"
    OCCURRENCE = "occurrence"


@dataclass(frozen=True)
class Budget:
    mode: BudgetMode
    limit: int

    def __post_init__(self) -> None:
        if (isinstance(self.limit, bool) or not isinstance(self.limit, int)
                or self.limit < 1):
            raise OptimizerError(f"budget limit must be >= 1, got {self.limit!r}")


@dataclass(frozen=True)
class Selection:
    """A chosen sentence set with its objective score and budget use."""

    sent_ids: tuple[int, ...]
    score: float
    used_budget: int
    mode: ScoringMode


def score_summary(
    sent_ids: Iterable[int],
    state: FeedbackState,
    index: ConceptIndex,
    mode: ScoringMode,
    labeled_only: bool = False,
) -> float:
    """Objective value of a sentence set, per the scoring mode.

    ``labeled_only`` drops provisional weights from the sum; the session
    reports that number to users so seed weights never inflate scores.
    """
    terms: list[float] = []
    if mode is ScoringMode.COVERAGE:
        seen: set[str] = set()
        for sid in sent_ids:
            for key in index.sentence_concepts[sid]:
                if key not in seen:
                    seen.add(key)
                    if not labeled_only or state.is_labeled(key):
                        terms.append(state.effective_weight(key))
    else:
        for sid in sent_ids:
            for key in index.sentence_concepts[sid]:
                if not labeled_only or state.is_labeled(key):
                    terms.append(state.effective_weight(key))
    return math.fsum(terms)


@dataclass(frozen=True)
class _Instance:
    """A solver-ready flat view: local index i <-> global sent_ids[i]."""

    sent_ids: list[int]
    costs: list[int]
    indptr: list[int]
    indices: list[int]
    weights: list[float]
    n_concepts: int
    budget: int
    occurrence: bool


def _flatten(state: FeedbackState, index: ConceptIndex, budget: Budget,
             mode: ScoringMode) -> _Instance:
    sent_ids = sorted(
        sid for sid in index.sentence_concepts if sid not in state.rejected_sentences
    )
    keys = sorted({k for sid in sent_ids for k in index.sentence_concepts[sid]})
    key_id = {k: i for i, k in enumerate(keys)}
    weights = [state.effective_weight(k) for k in keys]
    costs = []
    indptr = [0]
    indices: list[int] = []
    for sid in sent_ids:
        concept_ids = sorted(key_id[k] for k in index.sentence_concepts[sid])
        indices.extend(concept_ids)
        indptr.append(len(indices))
        if budget.mode is BudgetMode.WORDS:
            costs.append(index.sentence_lengths[sid])
        else:
            costs.append(1)
    return _Instance(
        sent_ids=sent_ids,
        costs=costs,
        indptr=indptr,
        indices=indices,
        weights=weights,
        n_concepts=len(keys),
        budget=budget.limit,
        occurrence=mode is ScoringMode.OCCURRENCE,
    )


def _canonical_score(inst: _Instance, chosen: Sequence[int]) -> float:
    """fsum of the term multiset of a selection (order-independent)."""
    terms: list[float] = []
    if inst.occurrence:
        for i in chosen:
            for p in range(inst.indptr[i], inst.indptr[i + 1]):
                terms.append(inst.weights[inst.indices[p]])
    else:
        seen: set[int] = set()
        for i in chosen:
            for p in range(inst.indptr[i], inst.indptr[i + 1]):
                c = inst.indices[p]
                if c not in seen:
                    seen.add(c)
                    terms.append(inst.weights[c])
    return math.fsum(terms)


def _better(score: float, count: int, ids: tuple[int, ...],
            best: tuple[float, int, tuple[int, ...]]) -> bool:
    """Tie-break: higher score, then fewer sentences, then smaller ids."""
    b_score, b_count, b_ids = best
    if score != b_score:
        return score > b_score
    if count != b_count:
        return count < b_count
    return ids < b_ids


def _branch_and_bound(inst: _Instance) -> list[int]:
    n = len(inst.costs)
    # Positive gain available from sentence i onward; admissible for both
    # modes because re-covering a concept never adds more than its
    # positive weight.
    pos_gain = [0.0] * n
    for i in range(n):
        g = 0.0
        for p in range(inst.indptr[i], inst.indptr[i + 1]):
            w = inst.weights[inst.indices[p]]
            if w > 0.0:
                g += w
        pos_gain[i] = g
    suffix_pos = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_pos[i] = suffix_pos[i + 1] + pos_gain[i]

    sent_sum = [0.0] * n
    if inst.occurrence:
        for i in range(n):
            s = 0.0
            for p in range(inst.indptr[i], inst.indptr[i + 1]):
                s += inst.weights[inst.indices[p]]
            sent_sum[i] = s

    cover_count = [0] * inst.n_concepts
    cur: list[int] = []
    best: list = [0.0, 0, ()]  # score, count, global-id tuple; empty set

    def consider(inc_score: float) -> None:
        if inc_score < best[0] - _PRUNE_MARGIN:
            return
        score = _canonical_score(inst, cur)
        ids = tuple(inst.sent_ids[i] for i in cur)
        if _better(score, len(cur), ids, (best[0], best[1], best[2])):
            best[0], best[1], best[2] = score, len(cur), ids

    def dfs(i: int, inc_score: float, used: int) -> None:
        if i == n:
            consider(inc_score)
            return
        bound = inc_score + suffix_pos[i]
        if bound < best[0] - _PRUNE_MARGIN:
            return
        if suffix_pos[i] <= 0.0:
            # No positive weight remains; the best completion is to stop.
            consider(inc_score)
            return
        if bound <= best[0] + _PRUNE_MARGIN and len(cur) + 1 > best[1]:
            # Extensions can at most tie the incumbent and always lose
            # the fewer-sentences tie-break; only "stop here" can win.
            consider(inc_score)
            return
        if used + inst.costs[i] <= inst.budget:
            delta = 0.0
            if inst.occurrence:
                delta = sent_sum[i]
                for p in range(inst.indptr[i], inst.indptr[i + 1]):
                    cover_count[inst.indices[p]] += 1
            else:
                for p in range(inst.indptr[i], inst.indptr[i + 1]):
                    c = inst.indices[p]
                    if cover_count[c] == 0:
                        delta += inst.weights[c]
                    cover_count[c] += 1
            cur.append(i)
            dfs(i + 1, inc_score + delta, used + inst.costs[i])
            cur.pop()
            for p in range(inst.indptr[i], inst.indptr[i + 1]):
                cover_count[inst.indices[p]] -= 1
        dfs(i + 1, inc_score, used)

    dfs(0, 0.0, 0)
    local = {sid: i for i, sid in enumerate(inst.sent_ids)}
    return [local[sid] for sid in best[2]]


def _make_selection(inst: _Instance, chosen: Sequence[int],
                    state: FeedbackState, index: ConceptIndex,
                    mode: ScoringMode) -> Selection:
    sent_ids = tuple(sorted(inst.sent_ids[i] for i in chosen))
    return Selection(
        sent_ids=sent_ids,
        score=score_summary(sent_ids, state, index, mode),
        used_budget=sum(inst.costs[i] for i in chosen),
        mode=mode,
    )


def solve_exact(
    state: FeedbackState,
    index: ConceptIndex,
    budget: Budget,
    mode: ScoringMode = ScoringMode.COVERAGE,
    cap: int = DEFAULT_EXACT_CAP,
) -> Selection:
    """Globally optimal selection by branch-and-bound.

    Raises :class:`ExactInstanceTooLarge` when more than ``cap``
    non-rejected sentences remain; use :func:`solve_greedy` then.
    """
    inst = _flatten(state, index, budget, mode)
    if len(inst.sent_ids) > cap:
        raise ExactInstanceTooLarge(
            f"{len(inst.sent_ids)} sentences exceed the exact-solver cap of "
            f"{cap}; use the greedy solver"
        )
    chosen = _branch_and_bound(inst)
    return _make_selection(inst, chosen, state, index, mode)


def solve_greedy(
    state: FeedbackState,
    index: ConceptIndex,
    budget: Budget,
    mode: ScoringMode = ScoringMode.COVERAGE,
) -> Selection:
    """Density-greedy selection, then max against the best single sentence."""
    inst = _flatten(state, index, budget, mode)
    chosen = _kernels.greedy_select(
        inst.costs, inst.indptr, inst.indices, inst.weights,
        inst.n_concepts, inst.budget, inst.occurrence,
    )
    greedy = _make_selection(inst, chosen, state, index, mode)

    best_single: Selection | None = None
    for i in range(len(inst.sent_ids)):
        if inst.costs[i] > inst.budget:
            continue
        single = _make_selection(inst, [i], state, index, mode)
        if best_single is None or single.score > best_single.score:
            best_single = single
    if best_single is not None and best_single.score > greedy.score:
        return best_single
    return greedy


def solve(
    state: FeedbackState,
    index: ConceptIndex,
    budget: Budget,
    mode: ScoringMode = ScoringMode.COVERAGE,
    solver: str = "auto",
    cap: int = DEFAULT_EXACT_CAP,
) -> Selection:
    """Dispatch to the exact solver when the instance fits under the cap."""
    if solver == "exact":
        return solve_exact(state, index, budget, mode, cap=cap)
    if solver == "greedy":
        return solve_greedy(state, index, budget, mode)
    if solver != "auto":
        raise OptimizerError(f"unknown solver {solver!r}")
    n = sum(
        1 for sid in index.sentence_concepts
        if sid not in state.rejected_sentences
    )
    if n <= cap:
        return solve_exact(state, index, budget, mode, cap=cap)
    return solve_greedy(state, index, budget, mode)
