"""Labelled review corpora: loading, normalization, token and n-gram statistics.

A corpus file holds one domain's reviews, either as JSONL (one object per
line with keys ``domain``, ``label``, ``text``) or as CSV with a
``domain,label,text`` header. Text is normalized on ingestion: lowercased,
non-alphabetic characters stripped from tokens, purely numeric tokens and
stopwords removed. Reviews that normalize to zero tokens are dropped with a
warning so that ingestion stays total over dirty data.
"""

from __future__ import annotations

import csv
import json
import warnings
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError

POSITIVE = "positive"
NEGATIVE = "negative"
LABELS = (POSITIVE, NEGATIVE)

NGRAM_ORDERS = (1, 2, 3, 4)

_bundled_stopwords: frozenset[str] | None = None


def bundled_stopwords() -> frozenset[str]:
    """The fixed English stopword list shipped with the package."""
    global _bundled_stopwords
    if _bundled_stopwords is None:
        text = resources.files("domainsim.data").joinpath("stopwords_en.txt").read_text("utf-8")
        _bundled_stopwords = frozenset(w.strip() for w in text.splitlines() if w.strip())
    return _bundled_stopwords


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Load a custom stopword list, one word per line, lowercased."""
    try:
        lines = Path(path).read_text("utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read stopword file {path}: {exc}") from exc
    return frozenset(w.strip().lower() for w in lines if w.strip())


def normalize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Normalize raw text to a token list.

    Splits on whitespace, lowercases, strips every non-alphabetic character
    from each token (which also removes purely numeric tokens), and drops
    stopwords. Token order is preserved; the result may be empty.
    """
    if stopwords is None:
        stopwords = bundled_stopwords()
    tokens = []
    for raw in text.lower().split():
        word = "".join(ch for ch in raw if ch.isalpha())
        if word and word not in stopwords:
            tokens.append(word)
    return tokens


@dataclass(frozen=True)
class Review:
    """One labelled review: normalized tokens plus its polarity label."""

    domain_id: str
    label: str
    tokens: tuple[str, ...]
    review_id: str

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise InputError(f"unknown label {self.label!r} (expected one of {LABELS})")
        if not self.tokens:
            raise InputError("review has no tokens after normalization")


class Corpus:
    """A domain's reviews with cached per-polarity token and n-gram counts.

    Immutable after construction; safe to share across threads. ``counts``
    maps each word to its (positive, negative) occurrence counts, and
    ``doc_counts`` to the number of positive/negative reviews containing it.
    N-gram counters (orders 1..4) are built lazily per order and cached.
    """

    def __init__(self, domain_id: str, reviews: Sequence[Review]):
        if not reviews:
            raise InputError(f"domain {domain_id!r}: corpus has no reviews")
        self.domain_id = domain_id
        self.reviews: tuple[Review, ...] = tuple(reviews)
        counts: dict[str, list[int]] = {}
        doc_counts: dict[str, list[int]] = {}
        for review in self.reviews:
            slot = 0 if review.label == POSITIVE else 1
            for token in review.tokens:
                counts.setdefault(token, [0, 0])[slot] += 1
            for token in set(review.tokens):
                doc_counts.setdefault(token, [0, 0])[slot] += 1
        self.counts: dict[str, tuple[int, int]] = {w: (c[0], c[1]) for w, c in counts.items()}
        self.doc_counts: dict[str, tuple[int, int]] = {w: (c[0], c[1]) for w, c in doc_counts.items()}
        self._ngram_cache: dict[int, Counter] = {}

    def __len__(self) -> int:
        return len(self.reviews)

    def label_counts(self) -> tuple[int, int]:
        """(positive, negative) review counts."""
        pos = sum(1 for r in self.reviews if r.label == POSITIVE)
        return pos, len(self.reviews) - pos

    def token_count(self) -> int:
        return sum(c_p + c_n for c_p, c_n in self.counts.values())

    def vocabulary(self) -> set[str]:
        return set(self.counts)

    def ngram_counts(self, order: int) -> Counter:
        """Counter of n-gram tuples of the given order (1..4), cached.

        N-grams never cross review boundaries.
        """
        _check_order(order)
        cached = self._ngram_cache.get(order)
        if cached is None:
            cached = Counter()
            for review in self.reviews:
                toks = review.tokens
                for i in range(len(toks) - order + 1):
                    cached[toks[i : i + order]] += 1
            self._ngram_cache[order] = cached
        return cached


def _check_order(order: int) -> None:
    if order not in NGRAM_ORDERS:
        raise InputError(f"n-gram order must be in 1..4, got {order}")


def _records_from_jsonl(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}, line {lineno}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise InputError(f"{path}, line {lineno}: expected a JSON object")
            yield lineno, record


def _records_from_csv(path: Path) -> Iterable[tuple[int, dict]]:
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return
        missing = {"domain", "label", "text"} - set(reader.fieldnames)
        if missing:
            raise InputError(f"{path}: CSV header missing columns {sorted(missing)}")
        for record in reader:
            yield reader.line_num, record


def load_corpus(
    path: str | Path,
    format: str = "jsonl",
    stopwords: frozenset[str] | None = None,
) -> Corpus:
    """Load one domain's labelled reviews from a JSONL or CSV file.

    Every record needs ``domain``, ``label`` (positive/negative) and
    ``text``. Records must all carry the same domain. Record order is
    preserved; review ids are assigned as ``<domain>:<index>`` over the kept
    reviews. Reviews whose text normalizes to zero tokens are dropped with a
    single aggregated warning.
    """
    path = Path(path)
    if not path.is_file():
        raise InputError(f"corpus file not found: {path}")
    if format == "jsonl":
        records = _records_from_jsonl(path)
    elif format == "csv":
        records = _records_from_csv(path)
    else:
        raise InputError(f"unknown corpus format {format!r} (expected jsonl or csv)")

    domain_id: str | None = None
    reviews: list[Review] = []
    dropped: list[int] = []
    for lineno, record in records:
        for key in ("domain", "label", "text"):
            if record.get(key) in (None, ""):
                raise InputError(f"{path}, line {lineno}: record is missing {key!r}")
        domain = str(record["domain"])
        label = str(record["label"])
        if label not in LABELS:
            raise InputError(f"{path}, line {lineno}: unknown label {label!r}")
        if domain_id is None:
            domain_id = domain
        elif domain != domain_id:
            raise InputError(
                f"{path}, line {lineno}: mixed domains in one file ({domain!r} vs {domain_id!r})"
            )
        tokens = normalize(str(record["text"]), stopwords)
        if not tokens:
            dropped.append(lineno)
            continue
        reviews.append(
            Review(domain_id=domain, label=label, tokens=tuple(tokens),
                   review_id=f"{domain}:{len(reviews)}")
        )
    if domain_id is None:
        raise InputError(f"{path}: file contains no records")
    if dropped:
        head = ", ".join(str(n) for n in dropped[:5])
        warnings.warn(
            f"{path}: dropped {len(dropped)} review(s) that normalized to zero tokens"
            f" (lines {head}{'...' if len(dropped) > 5 else ''})",
            stacklevel=2,
        )
    return Corpus(domain_id, reviews)


def top_k_ngrams(corpus: Corpus, order: int, k: int) -> list[tuple[str, ...]]:
    """The k most frequent n-grams of the given order.

    Ties break lexicographically ascending; fewer than k are returned when
    the corpus has fewer distinct n-grams.
    """
    _check_order(order)
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    grams = corpus.ngram_counts(order)
    return sorted(grams, key=lambda g: (-grams[g], g))[:k]


def ngram_overlap(
    c1: Corpus,
    c2: Corpus,
    k: int = 10,
    orders: Iterable[int] = (2, 3, 4),
) -> float:
    """Fraction of shared top-k n-grams over the given orders, in [0, 1].

    Per order the match count is the intersection of the two top-k lists;
    the denominator slot is k, capped at the number of distinct n-grams
    actually available (so a corpus compared with itself always scores 1.0,
    and corpora with at least k n-grams per order yield exact multiples of
    1/(k * number of orders)). Symmetric in its arguments.
    """
    orders = sorted(set(orders))
    for order in orders:
        _check_order(order)
    if not orders:
        raise InputError("orders must be non-empty")
    matched = 0
    available = 0
    for order in orders:
        top1 = top_k_ngrams(c1, order, k)
        top2 = top_k_ngrams(c2, order, k)
        matched += len(set(top1) & set(top2))
        available += max(len(top1), len(top2))
    if available == 0:
        return 1.0
    return matched / available


@dataclass(frozen=True)
class NgramOverlapMatrix:
    """Symmetric matrix of pairwise top-k n-gram match fractions."""

    domains: tuple[str, ...]
    values: tuple[tuple[float | None, ...], ...]

    def value(self, a: str, b: str) -> float | None:
        return self.values[self.domains.index(a)][self.domains.index(b)]


def ngram_overlap_matrix(
    corpora: Sequence[Corpus],
    k: int = 10,
    orders: Iterable[int] = (2, 3, 4),
) -> NgramOverlapMatrix:
    """Pairwise overlap fractions for a set of corpora; diagonal omitted."""
    names = tuple(c.domain_id for c in corpora)
    if len(set(names)) != len(names):
        raise InputError("duplicate domain ids in corpora")
    n = len(corpora)
    values: list[list[float | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = ngram_overlap(corpora[i], corpora[j], k=k, orders=orders)
            values[i][j] = v
            values[j][i] = v
    return NgramOverlapMatrix(names, tuple(tuple(row) for row in values))


def write_overlap_matrix_csv(matrix: NgramOverlapMatrix, path: str | Path) -> None:
    """Write the overlap matrix as CSV, upper triangle only, 2 decimals."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", *matrix.domains])
        for i, name in enumerate(matrix.domains):
            row: list[str] = [name]
            for j in range(len(matrix.domains)):
                v = matrix.values[i][j]
                row.append(f"{v:.2f}" if j > i and v is not None else "")
            writer.writerow(row)
