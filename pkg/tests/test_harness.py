"""Behavioral tests for the experiment harness.

The bundled fixture is the contract here: ten clusters, each with
line-delimited docs, two plain-text references, and a keyword table.
Experiment runs over it must be deterministic, and the report formats
must round-trip through their line-delimited save format.
"""

import json
import math

import pytest

from loopsum.concepts import ConceptUnit, build_concept_index
from loopsum.harness import (
    CellTrace,
    ExperimentReport,
    GridCell,
    HarnessError,
    fixture_cluster_ids,
    fixture_keyword_tables,
    fixture_references,
    fixture_root,
    iterations_to_fraction,
    load_fixture_cluster,
    run_experiment,
    upper_bound,
)
from loopsum.optimizer import Budget, BudgetMode, ScoringMode
from loopsum.oracle import IterationRow, IterationTrace
from loopsum.rouge import RougeConfig, RougeMode, rouge_n
from loopsum.session import SessionConfig


def small_config(unit=ConceptUnit.UNIGRAM):
    return SessionConfig(
        budget=Budget(BudgetMode.WORDS, 30),
        unit=unit,
        scoring=ScoringMode.COVERAGE,
        query_batch_size=10,
        max_iterations=10,
    )


class TestFixtureLayout:
    """The packaged fixture ships complete and internally consistent."""

    def test_ten_clusters_sorted(self):
        ids = fixture_cluster_ids()
        assert len(ids) == 10
        assert ids == sorted(ids)

    def test_cluster_loads_as_corpus(self):
        corpus = load_fixture_cluster("city_parks")
        assert corpus.cluster_id == "city_parks"
        assert corpus.num_sentences == 15
        assert len(corpus.documents) == 5

    def test_unknown_cluster_raises(self):
        with pytest.raises(HarnessError, match="unknown fixture cluster"):
            load_fixture_cluster("no_such_cluster")

    def test_every_cluster_has_two_references(self):
        refs = fixture_references()
        for cluster_id in fixture_cluster_ids():
            texts = refs.for_cluster(cluster_id)
            assert len(texts) == 2
            assert all(t.strip() for t in texts)

    def test_every_cluster_has_a_keyword_table(self):
        tables = fixture_keyword_tables()
        assert sorted(tables) == fixture_cluster_ids()
        for table in tables.values():
            assert len(table.entries) >= 10

    def test_reference_sentences_come_from_the_docs(self):
        # References are stitched from document sentences verbatim, so
        # a perfect selection can reach full unigram recall.
        refs = fixture_references()
        for cluster_id in fixture_cluster_ids():
            corpus = load_fixture_cluster(cluster_id)
            doc_sents = {s.text for s in corpus.sentences()}
            for text in refs.for_cluster(cluster_id):
                for line in text.split(". "):
                    line = line.strip()
                    if not line.endswith("."):
                        line += "."
                    assert line in doc_sents, (cluster_id, line)

    def test_root_is_a_real_directory(self):
        root = fixture_root()
        assert (root / "clusters").is_dir()
        assert (root / "refs").is_dir()
        assert (root / "keywords.jsonl").is_file()


class TestUpperBound:
    def test_full_labeling_hits_reference_sentences(self):
        corpus = load_fixture_cluster("harbor_bridge")
        refs = fixture_references().for_cluster("harbor_bridge")
        selection, score = upper_bound(corpus, small_config(), refs)
        assert selection.sent_ids
        assert 0.0 < score <= 1.0

    def test_score_matches_direct_rouge_computation(self):
        corpus = load_fixture_cluster("solar_farm")
        refs = fixture_references().for_cluster("solar_farm")
        selection, score = upper_bound(corpus, small_config(), refs)
        text = "\n".join(
            corpus.sentence(sid).text for sid in sorted(selection.sent_ids)
        )
        direct = rouge_n(
            text, list(refs), 1, RougeConfig(mode=RougeMode.FULL_F1)
        )
        assert score == float(direct.f1)

    def test_budget_respected(self):
        corpus = load_fixture_cluster("rail_link")
        config = small_config()
        refs = fixture_references().for_cluster("rail_link")
        selection, _ = upper_bound(corpus, config, refs)
        used = sum(
            corpus.sentence(sid).length_words for sid in selection.sent_ids
        )
        assert used <= config.budget.limit
        assert selection.used_budget == used


def make_trace(rouge1_by_iteration):
    rows = tuple(
        IterationRow(
            iteration=i,
            action_count=10 * i,
            sent_ids=(0,),
            objective_score=0.0,
            labeled_score=0.0,
            rouge1=r1,
            rouge2=0.0,
            rougeL=0.0,
        )
        for i, r1 in enumerate(rouge1_by_iteration)
    )
    return IterationTrace(
        cluster_id="synthetic",
        unit=ConceptUnit.UNIGRAM,
        rows=rows,
        termination_reason="max_iterations",
    )


class TestIterationsToFraction:
    def test_first_crossing_wins(self):
        trace = make_trace([0.1, 0.5, 0.93, 0.96, 1.0])
        assert iterations_to_fraction(trace, 0.95) == 3

    def test_flat_trace_crosses_immediately(self):
        trace = make_trace([0.7, 0.7, 0.7])
        assert iterations_to_fraction(trace, 0.95) == 0

    def test_exact_boundary_counts(self):
        # 0.95 of final 1.0 is met by a row at exactly 0.95.
        trace = make_trace([0.0, 0.95, 1.0])
        assert iterations_to_fraction(trace, 0.95) == 1

    def test_zero_final_crosses_at_start(self):
        trace = make_trace([0.0, 0.0])
        assert iterations_to_fraction(trace, 0.95) == 0


@pytest.fixture(scope="module")
def small_report():
    clusters = {
        cid: load_fixture_cluster(cid)
        for cid in ("city_parks", "harbor_bridge")
    }
    return run_experiment(
        clusters,
        fixture_references(),
        oracle_kind="reference",
        budgets=[Budget(BudgetMode.WORDS, 30)],
    )


class TestRunExperiment:
    def test_one_result_per_cell_and_cluster(self, small_report):
        assert len(small_report.results) == 2
        assert sorted(r.cluster_id for r in small_report.results) == [
            "city_parks",
            "harbor_bridge",
        ]

    def test_traces_reach_the_upper_bound(self, small_report):
        # Full labeling happens within the iteration cap on the fixture,
        # so every simulated run lands exactly on the one-shot bound.
        for result in small_report.results:
            assert result.trace.final.rouge1 == pytest.approx(
                result.upper_bound_rouge1
            )

    def test_deterministic_across_runs(self, small_report):
        clusters = {
            cid: load_fixture_cluster(cid)
            for cid in ("city_parks", "harbor_bridge")
        }
        again = run_experiment(
            clusters,
            fixture_references(),
            oracle_kind="reference",
            budgets=[Budget(BudgetMode.WORDS, 30)],
        )
        for a, b in zip(small_report.results, again.results):
            assert a.trace.rows == b.trace.rows
            assert a.upper_bound_rouge1 == b.upper_bound_rouge1

    def test_keyword_oracle_runs(self):
        clusters = {"city_parks": load_fixture_cluster("city_parks")}
        report = run_experiment(
            clusters,
            fixture_references(),
            oracle_kind="keyword",
            tables=fixture_keyword_tables(),
            budgets=[Budget(BudgetMode.WORDS, 30)],
        )
        assert report.oracle_kind == "keyword"
        (result,) = report.results
        assert result.trace.rows

    def test_unknown_oracle_kind_raises(self):
        with pytest.raises(HarnessError, match="oracle kind"):
            run_experiment(
                {},
                fixture_references(),
                oracle_kind="majority_vote",
                budgets=[Budget(BudgetMode.WORDS, 30)],
            )

    def test_keyword_kind_requires_tables(self):
        with pytest.raises(HarnessError, match="keyword"):
            run_experiment(
                {},
                fixture_references(),
                oracle_kind="keyword",
                budgets=[Budget(BudgetMode.WORDS, 30)],
            )

    def test_missing_budget_raises(self):
        with pytest.raises(HarnessError, match="budget"):
            run_experiment({}, fixture_references(), budgets=[])

    def test_missing_keyword_table_raises(self):
        tables = fixture_keyword_tables()
        del tables["city_parks"]
        with pytest.raises(HarnessError, match="city_parks"):
            run_experiment(
                {"city_parks": load_fixture_cluster("city_parks")},
                fixture_references(),
                oracle_kind="keyword",
                tables=tables,
                budgets=[Budget(BudgetMode.WORDS, 30)],
            )


class TestReport:
    def test_rows_flatten_every_iteration(self, small_report):
        rows = list(small_report.rows())
        expected = sum(len(r.trace.rows) for r in small_report.results)
        assert len(rows) == expected
        first = rows[0]
        for field in (
            "cluster",
            "unit",
            "budget_mode",
            "budget_limit",
            "scoring",
            "iteration",
            "rouge1",
            "upper_bound_rouge1",
            "termination_reason",
        ):
            assert field in first

    def test_aggregates_average_over_clusters(self, small_report):
        (agg,) = small_report.aggregates()
        assert agg["clusters"] == 2
        finals = [r.trace.final.rouge1 for r in small_report.results]
        assert agg["mean_final_rouge1"] == pytest.approx(
            math.fsum(finals) / 2
        )
        assert agg["cell"] == "unigram/words30/coverage"

    def test_save_round_trips_as_jsonl(self, small_report, tmp_path):
        path = tmp_path / "report.jsonl"
        small_report.save(path)
        lines = [
            json.loads(line)
            for line in path.read_text().splitlines()
            if line
        ]
        assert lines[0]["oracle"] == "reference"
        assert lines[0]["experiment"]["budgets"] == [
            {"mode": "words", "limit": 30}
        ]
        row_lines = [l for l in lines if "iteration" in l]
        agg_lines = [l for l in lines if "aggregate" in l]
        assert len(row_lines) == len(list(small_report.rows()))
        assert len(agg_lines) == 1

    def test_cell_label_format(self):
        cell = GridCell(
            unit=ConceptUnit.BIGRAM,
            budget=Budget(BudgetMode.SENTENCES, 4),
            scoring=ScoringMode.OCCURRENCE,
        )
        assert cell.label() == "bigram/sentences4/occurrence"
