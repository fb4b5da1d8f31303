"""Source-domain rankings and their evaluation against an accuracy matrix.

For each target domain a metric induces a ranking of candidate sources;
the ground truth ranks sources by their cross-domain accuracy on that
target. Rankings are scored with precision at K (top-K intersection size)
and ranking accuracy (exact-position matches within the top K), aggregated
over all targets and normalized.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .cdsa_baseline import AccuracyMatrix, ChartRow, chart
from .errors import InputError
from .labelled_metrics import LOWER_IS_MORE_SIMILAR, MetricResult

TRUTH_METRIC_ID = "CDSA"


@dataclass(frozen=True)
class RankedList:
    """Source domains for one target, best first, target excluded."""

    target: str
    metric_id: str
    order: tuple[str, ...]


@dataclass(frozen=True)
class EvalReport:
    """Aggregate precision/NRA of one metric at one K over all targets."""

    metric_id: str
    k: int
    precision_pct: float
    nra: float
    per_target: dict[str, tuple[int, int]]


def rank_sources(
    results: Iterable[MetricResult],
    target: str,
    domains: Sequence[str],
) -> RankedList:
    """Rank candidate sources for a target from metric results.

    Results must cover every (source, target) pair for the metric; pairs
    with no value rank last. Ties break toward the lower domain index in
    ``domains``.
    """
    index = {d: i for i, d in enumerate(domains)}
    if target not in index:
        raise InputError(f"target {target!r} not in domain list")
    relevant: dict[str, MetricResult] = {}
    metric_ids = set()
    for result in results:
        if result.target != target or result.source == target:
            continue
        if result.source in relevant:
            raise InputError(f"duplicate result for pair ({result.source}, {target})")
        if result.source not in index:
            raise InputError(f"result source {result.source!r} not in domain list")
        relevant[result.source] = result
        metric_ids.add(result.metric_id)
    expected = set(domains) - {target}
    missing = expected - set(relevant)
    if missing:
        raise InputError(
            f"missing results for target {target}: {sorted(missing, key=index.get)}"
        )
    if len(metric_ids) != 1:
        raise InputError(f"results for target {target} mix metric ids: {sorted(metric_ids)}")
    metric_id = metric_ids.pop()
    direction = next(iter(relevant.values())).direction
    ranked = [s for s in relevant if relevant[s].value is not None]
    unranked = sorted((s for s in relevant if relevant[s].value is None), key=index.get)
    if direction == LOWER_IS_MORE_SIMILAR:
        ranked.sort(key=lambda s: (relevant[s].value, index[s]))
    else:
        ranked.sort(key=lambda s: (-relevant[s].value, index[s]))
    return RankedList(target, metric_id, tuple(ranked + unranked))


def truth_ranking(matrix: AccuracyMatrix, target: str) -> RankedList:
    """Sources ordered by cross-domain accuracy on the target, best first."""
    t = matrix.index(target)
    sources = [d for d in matrix.domains if d != target]
    sources.sort(key=lambda s: (-matrix.acc[matrix.index(s), t], matrix.index(s)))
    return RankedList(target, TRUTH_METRIC_ID, tuple(sources))


def _check_comparable(pred: RankedList, truth: RankedList, k: int) -> None:
    if pred.target != truth.target:
        raise InputError(f"targets differ: {pred.target} vs {truth.target}")
    if set(pred.order) != set(truth.order):
        raise InputError("prediction and truth cover different domain sets")
    if not 1 <= k <= len(truth.order):
        raise InputError(f"K exceeds N-1: K={k}, N-1={len(truth.order)}")


def precision_at_k(pred: RankedList, truth: RankedList, k: int) -> int:
    """Size of the intersection of the predicted and true top-K sources."""
    _check_comparable(pred, truth, k)
    return len(set(pred.order[:k]) & set(truth.order[:k]))


def ranking_accuracy(pred: RankedList, truth: RankedList, k: int) -> int:
    """Number of top-K positions where prediction and truth agree exactly."""
    _check_comparable(pred, truth, k)
    return sum(1 for p, t in zip(pred.order[:k], truth.order[:k]) if p == t)


def aggregate(
    metric_id: str,
    matrix: AccuracyMatrix,
    predictions: Mapping[str, RankedList],
    k: int,
) -> EvalReport:
    """Aggregate precision/NRA over every target domain of the matrix.

    precision_pct is 100 times the summed top-K intersections over N*K;
    NRA is the summed exact-position matches over N*K.
    """
    missing = set(matrix.domains) - set(predictions)
    if missing:
        raise InputError(f"missing prediction lists for targets: {sorted(missing)}")
    per_target: dict[str, tuple[int, int]] = {}
    total_precision = 0
    total_ra = 0
    for target in matrix.domains:
        truth = truth_ranking(matrix, target)
        pred = predictions[target]
        p = precision_at_k(pred, truth, k)
        ra = ranking_accuracy(pred, truth, k)
        per_target[target] = (p, ra)
        total_precision += p
        total_ra += ra
    n = len(matrix.domains)
    return EvalReport(
        metric_id=metric_id,
        k=k,
        precision_pct=100.0 * total_precision / (n * k),
        nra=total_ra / (n * k),
        per_target=per_target,
    )


def rankings_for_metric(
    results: Sequence[MetricResult],
    domains: Sequence[str],
) -> dict[str, RankedList]:
    """Per-target rankings from a metric's full ordered-pair result set."""
    by_target: dict[str, list[MetricResult]] = {d: [] for d in domains}
    for result in results:
        if result.target in by_target:
            by_target[result.target].append(result)
    return {t: rank_sources(rs, t, domains) for t, rs in by_target.items()}


def recommendation_report(
    matrix: AccuracyMatrix,
    results_by_metric: Mapping[str, Sequence[MetricResult]],
    ks: Sequence[int] = (3, 5, 7, 10),
) -> tuple[list[ChartRow], list[EvalReport]]:
    """Chart rows plus per-metric evaluation reports for each K."""
    n = len(matrix.domains)
    for k in ks:
        if not 1 <= k <= n - 1:
            raise InputError(f"K exceeds N-1: K={k}, N-1={n - 1}")
    chart_rows = chart(matrix)
    reports = []
    for metric_id, results in results_by_metric.items():
        predictions = rankings_for_metric(results, matrix.domains)
        for k in ks:
            reports.append(aggregate(metric_id, matrix, predictions, k))
    return chart_rows, reports


def write_eval_csv(reports: Sequence[EvalReport], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric_id", "k", "precision_pct", "nra"])
        for report in reports:
            writer.writerow(
                [report.metric_id, report.k, f"{report.precision_pct:.2f}", f"{report.nra:.3f}"]
            )


def _markdown_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [
        max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
        for i, h in enumerate(headers)
    ]
    def fmt(cells):
        return "| " + " | ".join(str(c).ljust(w) for c, w in zip(cells, widths)) + " |"
    lines = [fmt(headers), "| " + " | ".join("-" * w for w in widths) + " |"]
    lines.extend(fmt(row) for row in rows)
    return lines


def build_markdown_report(
    chart_rows: Sequence[ChartRow],
    reports: Sequence[EvalReport],
) -> str:
    """Aligned Markdown with the recommendation chart and evaluation tables."""
    lines = ["# Source-domain recommendation chart", ""]
    lines.extend(
        _markdown_table(
            ["Domain", "In-Domain Accuracy", "Avg CDSA Degradation", "Best Source", "Best Target"],
            [
                [r.domain_id, f"{r.in_domain_acc:.2f}", f"{r.avg_degradation:.2f}",
                 r.best_source, r.best_target]
                for r in chart_rows
            ],
        )
    )
    lines.append("")
    if not reports:
        lines.append("No metrics selected; evaluation section omitted.")
        lines.append("")
        return "\n".join(lines)
    lines.append("# Metric evaluation")
    lines.append("")
    by_metric: dict[str, list[EvalReport]] = {}
    for report in reports:
        by_metric.setdefault(report.metric_id, []).append(report)
    for metric_id, metric_reports in by_metric.items():
        lines.append(f"## {metric_id}")
        lines.append("")
        lines.extend(
            _markdown_table(
                ["K", "Precision (%)", "NRA"],
                [
                    [str(r.k), f"{r.precision_pct:.2f}", f"{r.nra:.3f}"]
                    for r in sorted(metric_reports, key=lambda r: r.k)
                ],
            )
        )
        lines.append("")
    return "\n".join(lines)
