"""Cross-domain accuracy matrices and the recommendation chart.

A bundled reference matrix for 20 review domains (D1..D20) ships with the
package; a lightweight hashed bag-of-words logistic baseline can generate a
matrix for arbitrary corpora so the full pipeline runs end to end. The
baseline is deliberately simple and seed-deterministic; it is not meant to
match the accuracies of a tuned neural classifier.
"""

from __future__ import annotations

import csv
import warnings
import zlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import POSITIVE, Corpus
from .errors import InputError

FEATURE_DIM = 1 << 16
TARGET_SPLIT_SIZE = 2000


class AccuracyMatrix:
    """N x N cross-domain accuracies (%); rows are sources, columns targets."""

    def __init__(self, domains: Sequence[str], acc: np.ndarray):
        domains = tuple(domains)
        acc = np.asarray(acc, dtype=np.float64)
        if len(domains) < 2:
            raise InputError("accuracy matrix needs at least 2 domains")
        if len(set(domains)) != len(domains):
            raise InputError("duplicate domain ids in accuracy matrix")
        if acc.shape != (len(domains), len(domains)):
            raise InputError(
                f"accuracy matrix shape {acc.shape} does not match {len(domains)} domains"
            )
        if np.any(acc < 0.0) or np.any(acc > 100.0):
            bad = acc[(acc < 0.0) | (acc > 100.0)][0]
            raise InputError(f"accuracy value out of range [0, 100]: {bad}")
        self.domains = domains
        self.acc = acc

    def index(self, domain: str) -> int:
        try:
            return self.domains.index(domain)
        except ValueError:
            raise InputError(f"unknown domain {domain!r}") from None

    def value(self, source: str, target: str) -> float:
        return float(self.acc[self.index(source), self.index(target)])

    def in_domain(self, domain: str) -> float:
        i = self.index(domain)
        return float(self.acc[i, i])


def load_accuracy_matrix(path: str | Path) -> AccuracyMatrix:
    """Load an accuracy matrix CSV: header of domain ids, one row per source."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"accuracy matrix file not found: {path}")
    with path.open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise InputError(f"{path}: matrix CSV needs a header and at least one row")
    domains = tuple(h.strip() for h in rows[0][1:])
    if len(set(domains)) != len(domains):
        raise InputError(f"{path}: duplicate domain ids in header")
    by_source: dict[str, list[str]] = {}
    for row in rows[1:]:
        if not row:
            continue
        if len(row) != len(domains) + 1:
            raise InputError(
                f"{path}: row for {row[0]!r} has {len(row) - 1} cells, expected {len(domains)}"
            )
        by_source[row[0].strip()] = row[1:]
    if set(by_source) != set(domains):
        missing = sorted(set(domains) - set(by_source))
        extra = sorted(set(by_source) - set(domains))
        raise InputError(
            f"{path}: row/column domain sets differ (missing rows {missing}, extra rows {extra})"
        )
    acc = np.empty((len(domains), len(domains)), dtype=np.float64)
    for i, source in enumerate(domains):
        for j, cell in enumerate(by_source[source]):
            try:
                acc[i, j] = float(cell)
            except ValueError:
                raise InputError(f"{path}: non-numeric cell {cell!r} in row {source}") from None
    return AccuracyMatrix(domains, acc)


def write_accuracy_matrix_csv(matrix: AccuracyMatrix, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", *matrix.domains])
        for i, source in enumerate(matrix.domains):
            writer.writerow([source, *(f"{v:.2f}" for v in matrix.acc[i])])


def reference_accuracy_matrix() -> AccuracyMatrix:
    """The bundled 20-domain reference accuracy matrix."""
    with resources.as_file(
        resources.files("domainsim.data").joinpath("reference_cdsa_accuracy.csv")
    ) as path:
        return load_accuracy_matrix(path)


@dataclass(frozen=True)
class ChartRow:
    """Per-domain recommendation chart entry."""

    domain_id: str
    in_domain_acc: float
    avg_degradation: float
    best_source: str
    best_target: str


def chart(matrix: AccuracyMatrix) -> list[ChartRow]:
    """Recommendation chart: in-domain accuracy, average degradation, best pairs.

    The average degradation of a domain is its in-domain accuracy minus the
    mean of its cross-domain accuracies as a source. Best source for a
    target is the argmax of its column, best target for a source the argmax
    of its row, diagonal excluded, ties broken by the lower domain index.
    """
    acc = matrix.acc
    n = len(matrix.domains)
    off_diag = ~np.eye(n, dtype=bool)
    masked = np.where(off_diag, acc, -np.inf)
    best_target_idx = np.argmax(masked, axis=1)
    best_source_idx = np.argmax(masked, axis=0)
    rows = []
    for d in range(n):
        cross_mean = float(acc[d, off_diag[d]].mean())
        rows.append(
            ChartRow(
                domain_id=matrix.domains[d],
                in_domain_acc=float(acc[d, d]),
                avg_degradation=float(acc[d, d]) - cross_mean,
                best_source=matrix.domains[int(best_source_idx[d])],
                best_target=matrix.domains[int(best_target_idx[d])],
            )
        )
    return rows


def write_chart_csv(rows: Sequence[ChartRow], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["domain", "in_domain_accuracy", "avg_degradation", "best_source", "best_target"])
        for row in rows:
            writer.writerow(
                [row.domain_id, f"{row.in_domain_acc:.2f}", f"{row.avg_degradation:.2f}",
                 row.best_source, row.best_target]
            )


def _hash_features(tokens: Sequence[str]) -> np.ndarray:
    idx = {zlib.crc32(tok.encode("utf-8")) & (FEATURE_DIM - 1) for tok in tokens}
    return np.fromiter(sorted(idx), dtype=np.int64, count=len(idx))


def _featurize(corpus: Corpus) -> list[tuple[np.ndarray, int]]:
    return [
        (_hash_features(r.tokens), 1 if r.label == POSITIVE else 0)
        for r in corpus.reviews
    ]


def _train_logistic(
    examples: list[tuple[np.ndarray, int]],
    rng: np.random.Generator,
    epochs: int = 4,
    lr: float = 0.5,
) -> tuple[np.ndarray, float]:
    # Online logistic regression on binary hashed-presence features.
    weights = np.zeros(FEATURE_DIM, dtype=np.float64)
    bias = 0.0
    for _ in range(epochs):
        for i in rng.permutation(len(examples)):
            idx, y = examples[i]
            z = float(weights[idx].sum()) + bias
            z = min(35.0, max(-35.0, z))
            grad = 1.0 / (1.0 + np.exp(-z)) - y
            weights[idx] -= lr * grad
            bias -= lr * grad
    return weights, bias


def _accuracy(weights: np.ndarray, bias: float, examples: Sequence[tuple[np.ndarray, int]]) -> float:
    correct = sum(
        1 for idx, y in examples if ((float(weights[idx].sum()) + bias) > 0.0) == bool(y)
    )
    return correct / len(examples)


def train_eval_baseline(
    corpora: Sequence[Corpus],
    splits: int = 5,
    seed: int = 0,
) -> AccuracyMatrix:
    """Cross-domain accuracy matrix from a hashed bag-of-words logistic model.

    Diagonal entries use a k-fold in-domain protocol; off-diagonal entries
    train once on the full source corpus and average the accuracy over
    ``splits`` disjoint target splits. Deterministic for a given seed. When
    a corpus is too small for the standard 2000-review splits, proportional
    splits are used and a warning is emitted.
    """
    if len(corpora) < 2:
        raise InputError("baseline needs at least 2 corpora")
    domains = tuple(c.domain_id for c in corpora)
    if len(set(domains)) != len(domains):
        raise InputError("duplicate domain ids in corpora")
    small = [c.domain_id for c in corpora if len(c) < splits * TARGET_SPLIT_SIZE]
    if small:
        warnings.warn(
            f"corpora smaller than the {splits}x{TARGET_SPLIT_SIZE}-review protocol,"
            f" using proportional splits: {', '.join(small)}",
            stacklevel=2,
        )
    unbalanced = []
    for c in corpora:
        pos, neg = c.label_counts()
        if pos != neg:
            unbalanced.append(c.domain_id)
    if unbalanced:
        warnings.warn(f"corpora with unbalanced labels: {', '.join(unbalanced)}", stacklevel=2)
    for c in corpora:
        if len(c) < splits:
            raise InputError(f"corpus {c.domain_id} has fewer reviews than {splits} splits")

    features = [_featurize(c) for c in corpora]
    n = len(corpora)

    # Deterministic split of every corpus into `splits` test folds.
    fold_indices = []
    for t in range(n):
        rng = np.random.default_rng(np.random.SeedSequence([seed, 1, t]))
        fold_indices.append(np.array_split(rng.permutation(len(features[t])), splits))

    acc = np.empty((n, n), dtype=np.float64)
    for s in range(n):
        examples = features[s]
        # In-domain: k-fold, train on the remaining folds each time.
        fold_accs = []
        for held_out in range(splits):
            train_set = [
                examples[i]
                for f in range(splits)
                if f != held_out
                for i in fold_indices[s][f]
            ]
            rng = np.random.default_rng(np.random.SeedSequence([seed, 2, s, held_out]))
            weights, bias = _train_logistic(train_set, rng)
            test_set = [examples[i] for i in fold_indices[s][held_out]]
            fold_accs.append(_accuracy(weights, bias, test_set))
        acc[s, s] = 100.0 * float(np.mean(fold_accs))

        # Cross-domain: one model on the full source, averaged over target splits.
        rng = np.random.default_rng(np.random.SeedSequence([seed, 3, s]))
        weights, bias = _train_logistic(examples, rng)
        for t in range(n):
            if t == s:
                continue
            split_accs = [
                _accuracy(weights, bias, [features[t][i] for i in fold])
                for fold in fold_indices[t]
            ]
            acc[s, t] = 100.0 * float(np.mean(split_accs))
    return AccuracyMatrix(domains, acc)
