"""Desk-scale experiment harness over the bundled fixture corpus.

Runs oracle-driven simulations across a grid of concept units, budgets,
and scoring modes, and emits line-delimited records plus aggregate
means. The "upper bound" here is the summary obtained by labeling every
concept with reference-oracle feedback in one shot and solving once;
iterative sessions are measured against it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .concepts import ConceptUnit, build_concept_index
from .corpus import Corpus, load_corpus
from .feedback import ACCEPT, REJECT, Feedback, new_state, apply_batch
from .optimizer import Budget, ScoringMode, Selection, solve
from .oracle import (
    IterationTrace,
    KeywordTable,
    ReferenceSet,
    load_keyword_tables,
    load_references,
    make_keyword_oracle,
    make_reference_oracle,
    reference_concept_keys,
    run_simulation,
)
from .rouge import RougeConfig, RougeMode, rouge_n
from .session import SessionConfig


class HarnessError(Exception):
    pass


def fixture_root() -> Path:
    return Path(str(resources.files("loopsum").joinpath("data/fixture")))


def fixture_cluster_ids() -> list[str]:
    clusters = fixture_root() / "clusters"
    return sorted(p.name for p in clusters.iterdir() if p.is_dir())


def load_fixture_cluster(cluster_id: str) -> Corpus:
    path = fixture_root() / "clusters" / cluster_id / "docs.jsonl"
    if not path.exists():
        raise HarnessError(f"unknown fixture cluster: {cluster_id!r}")
    return load_corpus(path, format="jsonl", cluster_id=cluster_id)


def fixture_references() -> ReferenceSet:
    return load_references(fixture_root() / "refs")


def fixture_keyword_tables() -> dict[str, KeywordTable]:
    return load_keyword_tables(fixture_root() / "keywords.jsonl")


def upper_bound(
    corpus: Corpus,
    config: SessionConfig,
    references: Sequence[str],
) -> tuple[Selection, float]:
    """One-shot solve with complete reference-oracle feedback.

    Returns the selection and its ROUGE-1 F1 against the references;
    iterative convergence is measured as a fraction of the latter.
    """
    index = build_concept_index(corpus, config.unit)
    keys = reference_concept_keys(references, config.unit)
    batch = [
        Feedback(
            concept_key=key,
            action=ACCEPT if key in keys else REJECT,
            weight=1.0,
            confidence=1.0,
        )
        for key in sorted(index.occurrences)
    ]
    state = apply_batch(new_state(corpus.num_sentences), batch)
    selection = solve(
        state, index, config.budget, config.scoring, cap=config.exact_cap
    )
    text = "\n".join(
        corpus.sentence(sid).text for sid in sorted(selection.sent_ids)
    )
    score = rouge_n(
        text, list(references), 1, RougeConfig(mode=RougeMode.FULL_F1)
    )
    return selection, float(score.f1)


def iterations_to_fraction(
    trace: IterationTrace, fraction: float = 0.95
) -> int:
    """First iteration whose ROUGE-1 is >= fraction of the final row's."""
    target = fraction * trace.final.rouge1 - 1e-12
    for row in trace.rows:
        if row.rouge1 >= target:
            return row.iteration
    return trace.final.iteration


@dataclass(frozen=True)
class GridCell:
    unit: ConceptUnit
    budget: Budget
    scoring: ScoringMode

    def label(self) -> str:
        return (
            f"{self.unit.value}/{self.budget.mode.value}"
            f"{self.budget.limit}/{self.scoring.value}"
        )


@dataclass(frozen=True)
class CellTrace:
    cell: GridCell
    cluster_id: str
    trace: IterationTrace
    upper_bound_rouge1: float


@dataclass(frozen=True)
class ExperimentReport:
    oracle_kind: str
    config: dict
    results: tuple[CellTrace, ...]

    def rows(self) -> Iterator[dict]:
        for result in self.results:
            for row in result.trace.rows:
                yield {
                    "cluster": result.cluster_id,
                    "unit": result.cell.unit.value,
                    "budget_mode": result.cell.budget.mode.value,
                    "budget_limit": result.cell.budget.limit,
                    "scoring": result.cell.scoring.value,
                    "iteration": row.iteration,
                    "action_count": row.action_count,
                    "objective_score": row.objective_score,
                    "labeled_score": row.labeled_score,
                    "rouge1": row.rouge1,
                    "rouge2": row.rouge2,
                    "rougeL": row.rougeL,
                    "upper_bound_rouge1": result.upper_bound_rouge1,
                    "termination_reason": result.trace.termination_reason,
                }

    def aggregates(self) -> list[dict]:
        """Per-cell means across clusters (the plot-ready series)."""
        cells: dict[str, list[CellTrace]] = {}
        for result in self.results:
            cells.setdefault(result.cell.label(), []).append(result)
        out = []
        for label in sorted(cells):
            group = cells[label]
            n = len(group)
            out.append(
                {
                    "cell": label,
                    "clusters": n,
                    "mean_final_rouge1": sum(
                        r.trace.final.rouge1 for r in group
                    ) / n,
                    "mean_final_rouge2": sum(
                        r.trace.final.rouge2 for r in group
                    ) / n,
                    "mean_final_rougeL": sum(
                        r.trace.final.rougeL for r in group
                    ) / n,
                    "mean_iterations": sum(
                        r.trace.final.iteration for r in group
                    ) / n,
                    "mean_actions": sum(
                        r.trace.final.action_count for r in group
                    ) / n,
                    "mean_iterations_to_95pct": sum(
                        iterations_to_fraction(r.trace) for r in group
                    ) / n,
                }
            )
        return out

    def save(self, path: str | Path) -> None:
        """Line-delimited rows, then aggregate records marked as such."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"experiment": self.config,
                                 "oracle": self.oracle_kind}) + "\n")
            for row in self.rows():
                fh.write(json.dumps(row) + "\n")
            for agg in self.aggregates():
                fh.write(json.dumps({"aggregate": agg}) + "\n")


def run_experiment(
    clusters: Mapping[str, Corpus],
    references: ReferenceSet,
    oracle_kind: str = "reference",
    tables: Mapping[str, KeywordTable] | None = None,
    units: Sequence[ConceptUnit] = (ConceptUnit.UNIGRAM,),
    budgets: Sequence[Budget] = (),
    scorings: Sequence[ScoringMode] = (ScoringMode.COVERAGE,),
    query_batch_size: int = 10,
    max_iterations: int = 10,
) -> ExperimentReport:
    """Simulate every (cluster, unit, budget, scoring) cell."""
    if oracle_kind not in ("reference", "keyword"):
        raise HarnessError(f"unknown oracle kind: {oracle_kind!r}")
    if oracle_kind == "keyword" and tables is None:
        raise HarnessError("keyword oracle needs keyword tables")
    if not budgets:
        raise HarnessError("at least one budget is required")

    results = []
    for unit in units:
        for budget in budgets:
            for scoring in scorings:
                cell = GridCell(unit=unit, budget=budget, scoring=scoring)
                config = SessionConfig(
                    budget=budget,
                    unit=unit,
                    scoring=scoring,
                    query_batch_size=query_batch_size,
                    max_iterations=max_iterations,
                )
                for cluster_id in sorted(clusters):
                    corpus = clusters[cluster_id]
                    refs = references.for_cluster(cluster_id)
                    if oracle_kind == "reference":
                        oracle = make_reference_oracle(
                            references, cluster_id, unit
                        )
                    else:
                        assert tables is not None
                        if cluster_id not in tables:
                            raise HarnessError(
                                f"no keyword table for {cluster_id!r}"
                            )
                        oracle = make_keyword_oracle(tables[cluster_id])
                    trace = run_simulation(corpus, oracle, config, refs)
                    _, ub = upper_bound(corpus, config, refs)
                    results.append(
                        CellTrace(
                            cell=cell,
                            cluster_id=cluster_id,
                            trace=trace,
                            upper_bound_rouge1=ub,
                        )
                    )
    return ExperimentReport(
        oracle_kind=oracle_kind,
        config={
            "units": [u.value for u in units],
            "budgets": [
                {"mode": b.mode.value, "limit": b.limit} for b in budgets
            ],
            "scorings": [s.value for s in scorings],
            "query_batch_size": query_batch_size,
            "max_iterations": max_iterations,
        },
        results=tuple(results),
    )
