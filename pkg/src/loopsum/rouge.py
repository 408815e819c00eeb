"""Self-contained ROUGE-1/2/L scoring.

Two evaluation protocols are supported: ``limited_recall_75`` truncates
the candidate to its first 75 whitespace words before scoring (recall is
the number of interest there), and ``full_f1`` scores the whole texts.

All ratios are computed as exact rationals; callers round only for
presentation. Multi-reference ROUGE-n follows the summed-clipped-counts
form (one global ratio over all references); ROUGE-L takes the best F
score over references.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from . import _kernels
from .corpus import tokenize
from .stemming import stem


class RougeError(ValueError):
    pass


class RougeVariant(str, Enum):
    ROUGE1 = "rouge1"
    ROUGE2 = "rouge2"
    ROUGEL = "rougeL"


class RougeMode(str, Enum):
    LIMITED_RECALL_75 = "limited_recall_75"
    FULL_F1 = "full_f1"


_TRUNCATE_WORDS = 75


@dataclass(frozen=True)
class RougeConfig:
    variant: RougeVariant = RougeVariant.ROUGE1
    mode: RougeMode = RougeMode.FULL_F1
    stemming: bool = True
    beta: int = 1


@dataclass(frozen=True)
class RougeScore:
    recall: Fraction
    precision: Fraction
    f1: Fraction
    match_count: int
    candidate_count: int
    reference_count: int


def truncate_words(text: str, k: int) -> str:
    """First k whitespace-delimited words of the text."""
    if k < 0:
        raise RougeError(f"word limit must be >= 0, got {k}")
    return " ".join(text.split()[:k])


def ngrams(tokens: list[str], n: int) -> Counter:
    """Contiguous n-grams with multiplicity; shorter inputs give none."""
    if n < 1:
        raise RougeError(f"n must be >= 1, got {n}")
    return Counter(
        tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)
    )


def _prepare(text: str, config: RougeConfig) -> list[str]:
    if config.mode is RougeMode.LIMITED_RECALL_75:
        text = truncate_words(text, _TRUNCATE_WORDS)
    tokens = tokenize(text)
    if config.stemming:
        tokens = [stem(t) for t in tokens]
    return tokens


def _ratio(num: int, denom: int) -> Fraction:
    return Fraction(num, denom) if denom else Fraction(0)


def _f_measure(precision: Fraction, recall: Fraction, beta: int) -> Fraction:
    if precision + recall == 0:
        return Fraction(0)
    b2 = Fraction(beta) ** 2
    return (1 + b2) * precision * recall / (recall + b2 * precision)


def rouge_n(
    candidate: str,
    references: list[str],
    n: int,
    config: RougeConfig = RougeConfig(),
) -> RougeScore:
    """N-gram overlap, clipped per reference and summed over references."""
    if not references:
        raise RougeError("at least one reference is required")
    cand_tokens = _prepare(candidate, config)
    # Truncation applies to the candidate only; references stay whole.
    ref_config = RougeConfig(
        variant=config.variant, mode=RougeMode.FULL_F1,
        stemming=config.stemming, beta=config.beta,
    )
    cand_grams = ngrams(cand_tokens, n)
    match = 0
    ref_total = 0
    for ref in references:
        ref_grams = ngrams(_prepare(ref, ref_config), n)
        ref_total += sum(ref_grams.values())
        for gram, count in cand_grams.items():
            match += min(count, ref_grams.get(gram, 0))
    cand_total = sum(cand_grams.values()) * len(references)
    recall = _ratio(match, ref_total)
    precision = _ratio(match, cand_total)
    return RougeScore(
        recall=recall,
        precision=precision,
        f1=_f_measure(precision, recall, config.beta),
        match_count=match,
        candidate_count=cand_total,
        reference_count=ref_total,
    )


def rouge_l(
    candidate: str,
    references: list[str],
    config: RougeConfig = RougeConfig(),
) -> RougeScore:
    """Longest-common-subsequence score; best F over the references."""
    if not references:
        raise RougeError("at least one reference is required")
    cand_tokens = _prepare(candidate, config)
    ref_config = RougeConfig(
        variant=config.variant, mode=RougeMode.FULL_F1,
        stemming=config.stemming, beta=config.beta,
    )
    best: RougeScore | None = None
    for ref in references:
        ref_tokens = _prepare(ref, ref_config)
        # The kernel compares int ids; interning keeps it type-stable.
        ids: dict[str, int] = {}
        a = [ids.setdefault(t, len(ids)) for t in cand_tokens]
        b = [ids.setdefault(t, len(ids)) for t in ref_tokens]
        lcs = _kernels.lcs_length(a, b)
        recall = _ratio(lcs, len(ref_tokens))
        precision = _ratio(lcs, len(cand_tokens))
        score = RougeScore(
            recall=recall,
            precision=precision,
            f1=_f_measure(precision, recall, config.beta),
            match_count=lcs,
            candidate_count=len(cand_tokens),
            reference_count=len(ref_tokens),
        )
        if best is None or (score.f1, score.recall) > (best.f1, best.recall):
            best = score
    assert best is not None
    return best


def compute(
    candidate: str,
    references: list[str],
    config: RougeConfig,
) -> RougeScore:
    """Dispatch on the configured variant."""
    if config.variant is RougeVariant.ROUGE1:
        return rouge_n(candidate, references, 1, config)
    if config.variant is RougeVariant.ROUGE2:
        return rouge_n(candidate, references, 2, config)
    return rouge_l(candidate, references, config)
