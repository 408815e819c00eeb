"""Command-line entry points.

Subcommands: ingest (inspect a corpus), summarize (one-shot solve),
interactive (terminal feedback loop), simulate (oracle-driven runs),
eval (ROUGE scoring), serve (HTTP API). Exit codes: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .concepts import ConceptUnit, build_concept_index
from .corpus import Corpus, CorpusError, load_corpus
from .feedback import ACCEPT, REJECT, Feedback, FeedbackError
from .harness import (
    HarnessError,
    fixture_cluster_ids,
    fixture_keyword_tables,
    fixture_references,
    iterations_to_fraction,
    load_fixture_cluster,
    run_experiment,
    upper_bound,
)
from .optimizer import Budget, BudgetMode, OptimizerError, ScoringMode
from .oracle import (
    OracleError,
    load_keyword_tables,
    load_references,
    make_keyword_oracle,
    make_reference_oracle,
    run_simulation,
)
from .rouge import RougeConfig, RougeError, RougeMode, RougeVariant, compute
from .session import (
    SessionConfig,
    SessionError,
    display_score,
    mark_satisfied,
    next_queries,
    save_session,
    start_session,
    submit_feedback,
    summary_text,
)

USAGE_EXIT = 1
DATA_EXIT = 2

_DATA_ERRORS = (
    CorpusError, OracleError, HarnessError, SessionError,
    RougeError, OptimizerError, FeedbackError, OSError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="corpus path")
    p.add_argument("--format", choices=["jsonl", "plain-dir"],
                   default="jsonl")
    p.add_argument("--cluster-id", default=None)


def _add_session_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--budget-words", type=int, metavar="N")
    group.add_argument("--budget-sentences", type=int, metavar="N")
    p.add_argument("--unit", choices=[u.value for u in ConceptUnit],
                   default="unigram")
    p.add_argument("--scoring", choices=[m.value for m in ScoringMode],
                   default="coverage")
    p.add_argument("--batch-size", type=int, default=10)
    p.add_argument("--max-iterations", type=int, default=10)
    p.add_argument("--grouping-threshold", type=float, default=0.7)


def _budget(args: argparse.Namespace) -> Budget:
    if args.budget_words is not None:
        return Budget(mode=BudgetMode.WORDS, limit=args.budget_words)
    return Budget(mode=BudgetMode.SENTENCES, limit=args.budget_sentences)


def _session_config(args: argparse.Namespace) -> SessionConfig:
    return SessionConfig(
        budget=_budget(args),
        unit=ConceptUnit(args.unit),
        scoring=ScoringMode(args.scoring),
        query_batch_size=args.batch_size,
        max_iterations=args.max_iterations,
        grouping_threshold=args.grouping_threshold,
    )


def _load(args: argparse.Namespace) -> Corpus:
    return load_corpus(args.input, format=args.format,
                       cluster_id=args.cluster_id)


def _cmd_ingest(args: argparse.Namespace) -> int:
    corpus = _load(args)
    index = build_concept_index(corpus, ConceptUnit(args.unit))
    print(f"cluster:   {corpus.cluster_id}")
    print(f"documents: {len(corpus.documents)}")
    print(f"sentences: {corpus.num_sentences}")
    print(f"concepts:  {index.num_concepts} ({args.unit})")
    return 0


def _cmd_summarize(args: argparse.Namespace) -> int:
    corpus = _load(args)
    session = start_session(corpus, _session_config(args))
    sel = session.current_selection
    for sid in sorted(sel.sent_ids):
        print(corpus.sentence(sid).text)
    print(f"# sentences={len(sel.sent_ids)} used_budget={sel.used_budget} "
          f"score={sel.score:.4f}", file=sys.stderr)
    return 0


def _print_queries(session, queries) -> None:
    print(f"\n--- iteration {session.iteration}, "
          f"score {display_score(session):.3f} ---")
    print("summary:")
    for sid in sorted(session.current_selection.sent_ids):
        print(f"  [{sid}] {session.corpus.sentence(sid).text}")
    print("queries:")
    for i, q in enumerate(queries):
        print(f"  ({i}) {q.concept_key!r}  occurs in "
              f"{q.occurrence_count} sentence(s)")


def _cmd_interactive(args: argparse.Namespace) -> int:
    corpus = _load(args)
    session = start_session(corpus, _session_config(args))
    print("commands: a <n> <weight> [conf] | r <n> <weight> [conf] | "
          "x <sent_id> | submit | done | quit")
    batch: dict[str, Feedback] = {}
    rejects: list[int] = []
    while not session.terminated:
        queries = next_queries(session)
        _print_queries(session, queries)
        while True:
            try:
                line = input("> ").strip()
            except EOFError:
                line = "done"
            if not line:
                continue
            parts = line.split()
            cmd = parts[0].lower()
            try:
                if cmd in ("a", "r") and len(parts) >= 3:
                    idx = int(parts[1])
                    if not 0 <= idx < len(queries):
                        print(f"no query ({idx})")
                        continue
                    fb = Feedback(
                        concept_key=queries[idx].concept_key,
                        action=ACCEPT if cmd == "a" else REJECT,
                        weight=float(parts[2]),
                        confidence=float(parts[3]) if len(parts) > 3 else 1.0,
                    )
                    batch[fb.concept_key] = fb
                    print(f"  noted: {fb.concept_key!r} -> {fb.effective:+.2f}")
                elif cmd == "x" and len(parts) == 2:
                    rejects.append(int(parts[1]))
                    print(f"  will reject sentence {parts[1]}")
                elif cmd == "submit":
                    session = submit_feedback(
                        session, list(batch.values()), rejects
                    )
                    batch, rejects = {}, []
                    break
                elif cmd == "done":
                    session = mark_satisfied(session)
                    break
                elif cmd == "quit":
                    return 0
                else:
                    print("unrecognized command")
            except (FeedbackError, SessionError, ValueError) as exc:
                print(f"  error: {exc}")
    print("\n=== final summary "
          f"({session.termination_reason.value}) ===")
    print(summary_text(session))
    if args.save:
        save_session(session, args.save)
        print(f"session saved to {args.save}", file=sys.stderr)
    return 0


def _print_trace(trace, upper: float | None) -> None:
    print(f"cluster {trace.cluster_id} ({trace.unit.value}), "
          f"terminated: {trace.termination_reason}")
    print("  iter  actions  objective  rouge1  rouge2  rougeL")
    for row in trace.rows:
        print(f"  {row.iteration:4d}  {row.action_count:7d}  "
              f"{row.objective_score:9.3f}  {row.rouge1:.4f}  "
              f"{row.rouge2:.4f}  {row.rougeL:.4f}")
    if upper is not None:
        print(f"  upper-bound rouge1: {upper:.4f}, reached 95% at "
              f"iteration {iterations_to_fraction(trace)}")


def _cmd_simulate(args: argparse.Namespace) -> int:
    units = [ConceptUnit(u) for u in args.unit]
    if args.fixture:
        clusters = {c: load_fixture_cluster(c) for c in fixture_cluster_ids()}
        references = fixture_references()
        tables = fixture_keyword_tables() if args.oracle == "keyword" else None
    else:
        if not args.input or not args.refs:
            print("simulate: --input and --refs are required without "
                  "--fixture", file=sys.stderr)
            return USAGE_EXIT
        if args.oracle == "keyword" and args.keywords is None:
            print("simulate: --keywords is required with --oracle keyword",
                  file=sys.stderr)
            return USAGE_EXIT
        corpus = load_corpus(args.input, format=args.format,
                             cluster_id=args.cluster_id)
        clusters = {corpus.cluster_id: corpus}
        references = load_references(args.refs)
        tables = (load_keyword_tables(args.keywords)
                  if args.oracle == "keyword" else None)

    report = run_experiment(
        clusters,
        references,
        oracle_kind=args.oracle,
        tables=tables,
        units=units,
        budgets=[_budget(args)],
        scorings=[ScoringMode(args.scoring)],
        query_batch_size=args.batch_size,
        max_iterations=args.max_iterations,
    )
    for result in report.results:
        _print_trace(result.trace, result.upper_bound_rouge1)
    for agg in report.aggregates():
        print(json.dumps({"aggregate": agg}))
    if args.report:
        report.save(args.report)
        print(f"report written to {args.report}", file=sys.stderr)
    return 0


def _collect_refs(paths: list[str]) -> list[str]:
    texts = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files = sorted(path.glob("ref_*.txt")) or sorted(path.glob("*.txt"))
            texts.extend(
                f.read_text(encoding="utf-8").strip() for f in files
            )
        else:
            texts.append(path.read_text(encoding="utf-8").strip())
    return [t for t in texts if t]


def _cmd_eval(args: argparse.Namespace) -> int:
    candidate = Path(args.candidate).read_text(encoding="utf-8")
    references = _collect_refs(args.refs)
    if not references:
        print("eval: no references found", file=sys.stderr)
        return DATA_EXIT
    config = RougeConfig(
        variant=RougeVariant(args.variant),
        mode=(RougeMode.LIMITED_RECALL_75 if args.mode == "limited-recall-75"
              else RougeMode.FULL_F1),
        stemming=not args.no_stemming,
    )
    score = compute(candidate, references, config)
    print(f"{args.variant} recall={float(score.recall):.4f} "
          f"precision={float(score.precision):.4f} "
          f"f1={float(score.f1):.4f}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import Settings, serve

    base = Settings.from_env()
    serve(Settings(
        host=args.host or base.host,
        port=args.port or base.port,
        max_corpus_bytes=base.max_corpus_bytes,
        exact_cap=base.exact_cap,
    ))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loopsum",
                     description="Interactive concept-weighted summarizer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a corpus and print statistics")
    _add_corpus_args(p)
    p.add_argument("--unit", choices=[u.value for u in ConceptUnit],
                   default="unigram")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("summarize", help="one-shot summary, no feedback")
    _add_corpus_args(p)
    _add_session_args(p)
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("interactive", help="terminal feedback loop")
    _add_corpus_args(p)
    _add_session_args(p)
    p.add_argument("--save", default=None, help="write session file on exit")
    p.set_defaults(func=_cmd_interactive)

    p = sub.add_parser("simulate", help="run an oracle-driven session")
    p.add_argument("--fixture", action="store_true",
                   help="run the bundled fixture clusters")
    p.add_argument("--input", default=None)
    p.add_argument("--format", choices=["jsonl", "plain-dir"],
                   default="jsonl")
    p.add_argument("--cluster-id", default=None)
    p.add_argument("--refs", default=None, help="reference root directory")
    p.add_argument("--oracle", choices=["reference", "keyword"],
                   default="reference")
    p.add_argument("--keywords", default=None, help="keyword table jsonl")
    p.add_argument("--unit", action="append",
                   choices=[u.value for u in ConceptUnit], default=None)
    p.add_argument("--scoring", choices=[m.value for m in ScoringMode],
                   default="coverage")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--budget-words", type=int, metavar="N")
    group.add_argument("--budget-sentences", type=int, metavar="N")
    p.add_argument("--batch-size", type=int, default=10)
    p.add_argument("--max-iterations", type=int, default=10)
    p.add_argument("--report", default=None, help="write jsonl report here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("eval", help="score a candidate against references")
    p.add_argument("--candidate", required=True)
    p.add_argument("--refs", required=True, nargs="+",
                   help="reference files or directories")
    p.add_argument("--variant", choices=[v.value for v in RougeVariant],
                   default="rouge1")
    p.add_argument("--mode", choices=["full-f1", "limited-recall-75"],
                   default="full-f1")
    p.add_argument("--no-stemming", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.unit is None:
        args.unit = ["unigram"]
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"loopsum {args.command}: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
