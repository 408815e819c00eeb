"""Interactive, concept-weighted extractive multi-document summarization.

Users label concepts (accept or reject, with a weight and a confidence);
the system re-solves a budgeted selection over the corpus sentences and
shows the refreshed summary, iterating until the user is satisfied or
the concept pool runs dry. Quality is evaluated with a built-in ROUGE
implementation and simulated-user oracles.
"""

from .concepts import Concept, ConceptIndex, ConceptUnit, build_concept_index
from .corpus import Corpus, CorpusError, Document, Sentence, load_corpus
from .feedback import (
    ACCEPT,
    REJECT,
    Feedback,
    FeedbackError,
    FeedbackState,
    apply_batch,
    apply_feedback,
    reject_sentence,
)
from .optimizer import (
    Budget,
    BudgetMode,
    ExactInstanceTooLarge,
    ScoringMode,
    Selection,
    score_summary,
    solve,
    solve_exact,
    solve_greedy,
)
from .rouge import RougeConfig, RougeMode, RougeScore, RougeVariant, rouge_l, rouge_n
from .session import (
    Session,
    SessionConfig,
    SessionError,
    TerminationReason,
    load_session,
    mark_satisfied,
    next_queries,
    save_session,
    start_session,
    submit_feedback,
)

__version__ = "0.1.0"

__all__ = [
    "ACCEPT",
    "REJECT",
    "Budget",
    "BudgetMode",
    "Concept",
    "ConceptIndex",
    "ConceptUnit",
    "Corpus",
    "CorpusError",
    "Document",
    "ExactInstanceTooLarge",
    "Feedback",
    "FeedbackError",
    "FeedbackState",
    "RougeConfig",
    "RougeMode",
    "RougeScore",
    "RougeVariant",
    "ScoringMode",
    "Selection",
    "Sentence",
    "Session",
    "SessionConfig",
    "SessionError",
    "TerminationReason",
    "apply_batch",
    "apply_feedback",
    "build_concept_index",
    "load_corpus",
    "load_session",
    "mark_satisfied",
    "next_queries",
    "reject_sentence",
    "rouge_l",
    "rouge_n",
    "save_session",
    "score_summary",
    "solve",
    "solve_exact",
    "solve_greedy",
    "start_session",
    "submit_feedback",
    "__version__",
]
