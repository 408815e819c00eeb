"""Corpus ingestion: document loading, sentence splitting, tokenization.

Documents come in as jsonl records or a directory of ``.txt`` files and
come out as a :class:`Corpus` whose sentences carry corpus-global dense
ids, lowercase token lists, and word counts. Everything here is pure and
deterministic: the same bytes always produce the same corpus.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator


class CorpusError(Exception):
    """Raised when input data cannot be ingested."""


# Words that end with a period without ending a sentence. Compared
# case-insensitively against the whole whitespace-delimited word, final
# period included, so internal-dot forms like "u.s." work too.
ABBREVIATIONS = frozenset(
    {
        "mr.",
        "mrs.",
        "ms.",
        "dr.",
        "prof.",
        "sr.",
        "jr.",
        "st.",
        "mt.",
        "no.",
        "vs.",
        "etc.",
        "e.g.",
        "i.e.",
        "cf.",
        "u.s.",
        "u.k.",
        "u.n.",
        "a.m.",
        "p.m.",
        "fig.",
        "col.",
        "gen.",
        "gov.",
        "sen.",
        "rep.",
        "rev.",
        "capt.",
        "sgt.",
        "lt.",
        "inc.",
        "ltd.",
        "co.",
        "corp.",
        "dept.",
        "est.",
        "approx.",
        "jan.",
        "feb.",
        "mar.",
        "apr.",
        "jun.",
        "jul.",
        "aug.",
        "sep.",
        "sept.",
        "oct.",
        "nov.",
        "dec.",
    }
)

# Candidate boundary: terminal punctuation, then whitespace, then an
# uppercase letter starting the next sentence.
_BOUNDARY = re.compile(r"[.!?]+(?=\s+[A-Z])")

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


@dataclass(frozen=True)
class Sentence:
    """One sentence with its corpus-global id and token list."""

    sent_id: int
    doc_id: str
    text: str
    tokens: tuple[str, ...]

    @property
    def length_words(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]
    title: str | None = None


@dataclass(frozen=True)
class Corpus:
    """A cluster of documents with dense sentence ids across the cluster."""

    cluster_id: str
    documents: tuple[Document, ...]
    _by_id: dict[int, Sentence] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        for doc in self.documents:
            for sent in doc.sentences:
                self._by_id[sent.sent_id] = sent

    def sentences(self) -> Iterator[Sentence]:
        for doc in self.documents:
            yield from doc.sentences

    def sentence(self, sent_id: int) -> Sentence:
        return self._by_id[sent_id]

    @property
    def num_sentences(self) -> int:
        return len(self._by_id)

    def content_hash(self) -> str:
        """Stable digest of the document texts, for session files."""
        h = hashlib.sha256()
        for doc in self.documents:
            h.update(doc.doc_id.encode("utf-8"))
            h.update(b"\x00")
            for sent in doc.sentences:
                h.update(sent.text.encode("utf-8"))
                h.update(b"\x00")
        return h.hexdigest()


def tokenize(sentence_text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; digits are kept.

    >>> tokenize("The cat, sat!")
    ['the', 'cat', 'sat']
    """
    return [t for t in _TOKEN_SPLIT.split(sentence_text.lower()) if t]


def _word_before(text: str, end: int) -> str:
    """The whitespace-delimited word ending at position ``end`` (exclusive)."""
    start = end
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:end]


def split_sentences(raw_text: str) -> list[str]:
    """Split text on [.?!] + whitespace + uppercase, minus abbreviations.

    The concatenation of the output covers all non-whitespace input; only
    whitespace between sentences is dropped.
    """
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY.finditer(raw_text):
        end = match.end()
        if _word_before(raw_text, end).lower() in ABBREVIATIONS:
            continue
        piece = raw_text[start:end].strip()
        if piece:
            sentences.append(piece)
        start = end
    tail = raw_text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def _build_document(doc_id: str, text: str, title: str | None,
                    next_id: int) -> tuple[Document, int]:
    sentences = []
    for piece in split_sentences(text):
        tokens = tokenize(piece)
        if not tokens:
            continue  # punctuation-only fragment, carries no content
        sentences.append(
            Sentence(sent_id=next_id, doc_id=doc_id, text=piece,
                     tokens=tuple(tokens))
        )
        next_id += 1
    if not sentences:
        raise CorpusError(f"document {doc_id!r} has no sentences")
    return Document(doc_id=doc_id, sentences=tuple(sentences), title=title), next_id


def _load_jsonl(path: Path) -> list[tuple[str, str, str | None]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid json ({exc.msg})")
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: expected an object")
            doc_id = obj.get("doc_id")
            text = obj.get("text")
            if not isinstance(doc_id, str) or not doc_id:
                raise CorpusError(f"line {lineno}: missing doc_id")
            if not isinstance(text, str) or not text.strip():
                raise CorpusError(f"line {lineno}: missing text")
            records.append((doc_id, text, obj.get("title")))
    return records


def _load_plain_dir(path: Path) -> list[tuple[str, str, str | None]]:
    records = []
    for txt in sorted(path.glob("*.txt")):
        text = txt.read_text(encoding="utf-8")
        if text.strip():
            records.append((txt.stem, text, None))
    return records


def load_corpus(path: str | Path, format: str = "jsonl",
                cluster_id: str | None = None) -> Corpus:
    """Load a document cluster from ``path``.

    ``format`` is ``"jsonl"`` (one ``{doc_id, text, title?}`` object per
    line) or ``"plain-dir"`` (each ``*.txt`` file is one document whose
    doc_id is the filename stem).
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"no such path: {path}")
    if format == "jsonl":
        records = _load_jsonl(path)
    elif format == "plain-dir":
        if not path.is_dir():
            raise CorpusError(f"not a directory: {path}")
        records = _load_plain_dir(path)
    else:
        raise CorpusError(f"unknown corpus format: {format!r}")
    if not records:
        raise CorpusError("empty corpus")

    documents = []
    seen: set[str] = set()
    next_id = 0
    for doc_id, text, title in records:
        if doc_id in seen:
            raise CorpusError(f"duplicate doc_id: {doc_id!r}")
        seen.add(doc_id)
        doc, next_id = _build_document(doc_id, text, title, next_id)
        documents.append(doc)
    return Corpus(cluster_id=cluster_id or path.stem, documents=tuple(documents))


def corpus_from_texts(cluster_id: str,
                      docs: list[tuple[str, str]]) -> Corpus:
    """Build a corpus in memory from ``(doc_id, text)`` pairs."""
    if not docs:
        raise CorpusError("empty corpus")
    documents = []
    seen: set[str] = set()
    next_id = 0
    for doc_id, text in docs:
        if doc_id in seen:
            raise CorpusError(f"duplicate doc_id: {doc_id!r}")
        seen.add(doc_id)
        doc, next_id = _build_document(doc_id, text, None, next_id)
        documents.append(doc)
    return Corpus(cluster_id=cluster_id, documents=tuple(documents))
