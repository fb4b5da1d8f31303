"""Independent brute-force reference implementations for the pairwise metrics.

These recompute everything directly from raw (label, token list) reviews
with plain dicts and -p*log(p) sums, sharing no code with the package, so
they can arbitrate the optimized implementations.
"""

from __future__ import annotations

import math

Reviews = list[tuple[str, list[str]]]


def word_counts(reviews: Reviews) -> dict[str, list[int]]:
    counts: dict[str, list[int]] = {}
    for label, tokens in reviews:
        slot = 0 if label == "positive" else 1
        for token in tokens:
            counts.setdefault(token, [0, 0])[slot] += 1
    return counts


def polar_set(reviews: Reviews, threshold: float = 0.5) -> set[str]:
    polar = set()
    for word, (c_p, c_n) in word_counts(reviews).items():
        p = c_p / (c_p + c_n)
        n = c_n / (c_p + c_n)
        if abs(p - n) >= threshold:
            polar.add(word)
    return polar


def _clamp(x: float) -> float:
    return min(max(x, 1e-6), 1.0 - 1e-6)


def _probabilities(reviews: Reviews, word: str) -> tuple[float, float]:
    c_p, c_n = word_counts(reviews)[word]
    return _clamp(c_p / (c_p + c_n)), _clamp(c_n / (c_p + c_n))


def skld_metric(reviews_s: Reviews, reviews_t: Reviews) -> float | None:
    polar_s = polar_set(reviews_s)
    polar_t = polar_set(reviews_t)
    common = polar_s & polar_t
    if not common:
        return None
    total = 0.0
    for word in common:
        p1, n1 = _probabilities(reviews_s, word)
        p2, n2 = _probabilities(reviews_t, word)
        a = n1 * math.log(n1 / n2) + p1 * math.log(p1 / p2)
        b = n2 * math.log(n2 / n1) + p2 * math.log(p2 / p1)
        total += (a + b) / 2.0
    j = len(common) / (len(polar_s) + len(polar_t) - len(common))
    return total / len(common) + 1.0 / j


def l1_metric(reviews_s: Reviews, reviews_t: Reviews) -> float | None:
    polar_s = polar_set(reviews_s)
    polar_t = polar_set(reviews_t)
    common = polar_s & polar_t
    if not common:
        return None
    total = 0.0
    for word in common:
        c1 = word_counts(reviews_s)[word]
        c2 = word_counts(reviews_t)[word]
        p1, n1 = c1[0] / sum(c1), c1[1] / sum(c1)
        p2, n2 = c2[0] / sum(c2), c2[1] / sum(c2)
        total += abs(p1 - p2) + abs(n1 - n2)
    j = len(common) / (len(polar_s) + len(polar_t) - len(common))
    return total / len(common) + 1.0 / j


def ngram_table(reviews: Reviews, order: int) -> dict[tuple[str, ...], int]:
    grams: dict[tuple[str, ...], int] = {}
    for _, tokens in reviews:
        for i in range(len(tokens) - order + 1):
            gram = tuple(tokens[i : i + order])
            grams[gram] = grams.get(gram, 0) + 1
    return grams


def weighted_entropy(grams: dict, polar: set[str], w: float, unigram: bool) -> float:
    total = sum(grams.values())
    if total == 0:
        return 0.0
    h_polar = 0.0
    h_rest = 0.0
    for gram, count in grams.items():
        p = count / total
        term = -p * math.log(p)
        if any(tok in polar for tok in gram):
            h_polar += term
        else:
            h_rest += term
    if unigram:
        return w * h_polar
    return w * h_polar + h_rest / w


def entropy_change(reviews_s: Reviews, reviews_t: Reviews) -> float | None:
    polar = polar_set(reviews_s)
    weights = {1: 1.0, 2: 5.0, 3: 5.0, 4: 5.0}
    e_before = sum(
        weighted_entropy(ngram_table(reviews_s, n), polar, weights[n], n == 1)
        for n in (1, 2, 3, 4)
    )
    mixed = reviews_s + reviews_t
    e_after = sum(
        weighted_entropy(ngram_table(mixed, n), polar, weights[n], n == 1)
        for n in (1, 2, 3, 4)
    )
    if e_before == 0.0:
        return None
    return abs(e_after - e_before) / e_before * 100.0


def top_k(grams: dict, k: int) -> list[tuple[str, ...]]:
    return [g for g, _ in sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


def ngram_overlap(
    reviews_1: Reviews,
    reviews_2: Reviews,
    k: int = 10,
    orders: tuple[int, ...] = (2, 3, 4),
) -> float:
    matched = 0
    available = 0
    for order in orders:
        t1 = top_k(ngram_table(reviews_1, order), k)
        t2 = top_k(ngram_table(reviews_2, order), k)
        matched += len(set(t1) & set(t2))
        available += max(len(t1), len(t2))
    if available == 0:
        return 1.0
    return matched / available
