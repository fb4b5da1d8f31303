"""Pairwise similarity metrics over labelled corpora.

Four metrics: significant-word overlap, symmetric KL divergence of polar
word distributions, polarity drift (L1 distance) of polar words, and
weighted entropy change under corpus mixing. The divergence and drift
metrics add the reciprocal of a Jaccard confidence term so that pairs
sharing a large fraction of their polar vocabulary rank ahead of pairs
merely sharing many words. Natural logarithms throughout; the base only
rescales values and never changes a ranking.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .corpus import Corpus
from .errors import InputError, UnrankablePairError
from .lexstats import (
    POLAR_THRESHOLD,
    PolarityTable,
    SignificantWordSet,
    clamp_probability,
    polar_words,
    polarity_table,
)

HIGHER_IS_MORE_SIMILAR = "higher_is_more_similar"
LOWER_IS_MORE_SIMILAR = "lower_is_more_similar"

METRIC_DIRECTIONS: dict[str, str] = {
    "LM1": HIGHER_IS_MORE_SIMILAR,
    "LM2": LOWER_IS_MORE_SIMILAR,
    "LM3": LOWER_IS_MORE_SIMILAR,
    "LM4": LOWER_IS_MORE_SIMILAR,
    "ULM1": HIGHER_IS_MORE_SIMILAR,
    "ULM2": HIGHER_IS_MORE_SIMILAR,
    "ULM3": HIGHER_IS_MORE_SIMILAR,
    "ULM4": HIGHER_IS_MORE_SIMILAR,
    "ULM5": HIGHER_IS_MORE_SIMILAR,
    "ULM6": HIGHER_IS_MORE_SIMILAR,
    "ULM7": HIGHER_IS_MORE_SIMILAR,
    "NGRAM": HIGHER_IS_MORE_SIMILAR,
}

# Entropy weights per n-gram order: unigrams unweighted, higher orders
# weight polar-containing n-grams by 5 and the rest by 1/5.
ENTROPY_WEIGHTS: dict[int, float] = {1: 1.0, 2: 5.0, 3: 5.0, 4: 5.0}


def direction_for(metric_id: str) -> str:
    try:
        return METRIC_DIRECTIONS[metric_id]
    except KeyError:
        raise InputError(f"unknown metric id {metric_id!r}") from None


@dataclass(frozen=True)
class MetricResult:
    """A named metric's value for an ordered (source, target) domain pair.

    ``value`` is None for unrankable pairs (reported as "no value" and
    ranked last). ``direction`` states whether larger values mean more
    similar domains.
    """

    metric_id: str
    source: str
    target: str
    value: float | None
    direction: str

    def __post_init__(self) -> None:
        if self.direction not in (HIGHER_IS_MORE_SIMILAR, LOWER_IS_MORE_SIMILAR):
            raise InputError(f"invalid direction {self.direction!r}")
        expected = METRIC_DIRECTIONS.get(self.metric_id)
        if expected is not None and expected != self.direction:
            raise InputError(
                f"direction for {self.metric_id} must be {expected}, got {self.direction}"
            )


def make_result(metric_id: str, source: str, target: str, value: float | None) -> MetricResult:
    return MetricResult(metric_id, source, target, value, direction_for(metric_id))


def lm1_overlap(sig_s: SignificantWordSet, sig_t: SignificantWordSet) -> int:
    """Number of significant words shared by two domains. Symmetric."""
    return len(sig_s.words & sig_t.words)


def jaccard(common: int, w1: int, w2: int) -> float:
    """Jaccard coefficient from a common-count and two set sizes."""
    if common < 1:
        raise UnrankablePairError("no common polar words")
    if common > min(w1, w2):
        raise InputError(f"common count {common} exceeds set sizes ({w1}, {w2})")
    return common / (w1 + w2 - common)


def _common_polar(
    table_s: PolarityTable, table_t: PolarityTable, threshold: float
) -> tuple[set[str], float]:
    polar_s = polar_words(table_s, threshold)
    polar_t = polar_words(table_t, threshold)
    common = polar_s & polar_t
    if not common:
        raise UnrankablePairError(
            f"no common polar words between {table_s.domain_id} and {table_t.domain_id}"
        )
    return common, jaccard(len(common), len(polar_s), len(polar_t))


def lm2_skld(table_s: PolarityTable, table_t: PolarityTable, threshold: float = POLAR_THRESHOLD) -> float:
    """Mean symmetric KL divergence over common polar words, plus 1/J.

    Probabilities are clamped away from 0 and 1 before the logarithms.
    Lower values mean more similar domains; the minimum is 1.0, reached by
    identical polar distributions with full polar-vocabulary overlap.
    """
    common, j = _common_polar(table_s, table_t, threshold)
    total = 0.0
    for word in common:
        p1, n1 = (clamp_probability(x) for x in table_s[word])
        p2, n2 = (clamp_probability(x) for x in table_t[word])
        a = n1 * math.log(n1 / n2) + p1 * math.log(p1 / p2)
        b = n2 * math.log(n2 / n1) + p2 * math.log(p2 / p1)
        total += (a + b) / 2.0
    return total / len(common) + 1.0 / j


def lm3_chameleon(table_s: PolarityTable, table_t: PolarityTable, threshold: float = POLAR_THRESHOLD) -> float:
    """Mean L1 distance between (P, N) vectors of common polar words, plus 1/J.

    Captures words whose polarity orientation drifts between the domains.
    Lower values mean more similar domains.
    """
    common, j = _common_polar(table_s, table_t, threshold)
    total = 0.0
    for word in common:
        p1, n1 = table_s[word]
        p2, n2 = table_t[word]
        total += abs(p1 - p2) + abs(n1 - n2)
    return total / len(common) + 1.0 / j


def _weighted_counter_entropy(counter: Counter, polar: set[str], w: float, polar_only: bool) -> float:
    # H over p = c / total, split into n-grams containing a polar word (X,
    # weighted by w) and the rest (Y, weighted by 1/w, skipped for unigrams).
    total = sum(counter.values())
    if total == 0:
        return 0.0
    log_total = math.log(total)
    count_x = 0
    clogc_x = 0.0
    count_y = 0
    clogc_y = 0.0
    for gram, c in counter.items():
        clogc = c * math.log(c)
        if any(tok in polar for tok in gram):
            count_x += c
            clogc_x += clogc
        else:
            count_y += c
            clogc_y += clogc
    h_x = (log_total * count_x - clogc_x) / total
    if polar_only:
        return w * h_x
    h_y = (log_total * count_y - clogc_y) / total
    return w * h_x + h_y / w


def weighted_entropy(corpus: Corpus, polar: set[str], order: int, w: float) -> float:
    """Weighted Shannon entropy of the corpus's n-grams of one order.

    N-grams containing at least one polar word contribute with weight ``w``,
    the rest with weight ``1/w``; probabilities are over all n-grams of the
    order. For unigrams only the polar ones are considered.
    """
    counter = corpus.ngram_counts(order)
    return _weighted_counter_entropy(counter, polar, w, polar_only=(order == 1))


def lm4_entropy_change(source: Corpus, target: Corpus, polar: set[str] | None = None) -> float:
    """Percent change of the source's weighted entropy when the target is mixed in.

    The entropy is the sum of the per-order weighted entropies for orders
    1..4; the polar word set comes from the source alone and is reused for
    the mixed corpus, keeping the before/after split rule fixed. Asymmetric
    in its arguments; lower values mean the source suits the target better.
    """
    if polar is None:
        polar = polar_words(polarity_table(source))
    e_before = 0.0
    e_after = 0.0
    for order, w in ENTROPY_WEIGHTS.items():
        polar_only = order == 1
        source_counts = source.ngram_counts(order)
        e_before += _weighted_counter_entropy(source_counts, polar, w, polar_only)
        mixed = source_counts + target.ngram_counts(order)
        e_after += _weighted_counter_entropy(mixed, polar, w, polar_only)
    if e_before == 0.0:
        raise UnrankablePairError(
            f"source {source.domain_id} has zero baseline entropy"
        )
    return abs(e_after - e_before) / e_before * 100.0
