"""
Empirical falsification test for (eps, delta)-differential privacy.

A mechanism is run many times on two neighboring datasets, outputs are
coarsened into finitely many cells, and every cell is checked in both
directions against Pr[A(x) in E] <= e^eps Pr[A(x') in E] + delta using
Clopper-Pearson bounds. Passing is not a proof of privacy; failing is strong
evidence against it.
"""

import math
from collections import Counter
from typing import Any, Callable, Hashable, Sequence

import numpy as np
import structlog

from mechanisms.exceptions import InvalidParameterError, NotNeighborsError
from mechanisms.noise import PrivacyBudget

from .report import AuditReport, clopper_pearson_lower, clopper_pearson_upper, verdict

logger = structlog.get_logger(__name__)

BOTTOM_CELL = "bottom"

Mechanism = Callable[[np.ndarray, np.random.Generator], Any]
Partition = Callable[[Any], Hashable]


def hamming_distance(x: Sequence[float], y: Sequence[float]) -> int:
    """Number of differing positions; a length mismatch counts every extra entry."""
    a, b = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    common = min(a.size, b.size)
    return int(np.count_nonzero(a[:common] != b[:common])) + abs(a.size - b.size)


def grid_partition(width: float, offset: float = 0.0) -> Partition:
    """Cells floor((y - offset) / width) for real outputs plus a bottom cell for None."""

    def cell(outcome: Any) -> Hashable:
        if outcome is None:
            return BOTTOM_CELL
        return int(math.floor((float(outcome) - offset) / width))

    return cell


def noiseless_histogram_argmax(width: float) -> Mechanism:
    """
    Most populated bin of width ``width``, without any noise.

    Not private; it exists so the audit can be shown to catch a violation.
    """

    def mechanism(x: np.ndarray, rng: np.random.Generator) -> Any:
        bins, counts = np.unique(np.floor(np.asarray(x) / width).astype(np.int64), return_counts=True)
        return float(bins[int(np.argmax(counts))] * width)

    return mechanism


def _outcome_counts(
    mechanism: Mechanism, data: np.ndarray, partition: Partition, trials: int, rng: np.random.Generator
) -> Counter:
    counts: Counter = Counter()
    for _ in range(trials):
        counts[partition(mechanism(data, rng))] += 1
    return counts


def empirical_dp_check(
    mechanism: Mechanism,
    x: Sequence[float],
    x_neighbor: Sequence[float],
    partition: Partition,
    trials: int,
    budget: PrivacyBudget,
    rng: np.random.Generator,
    confidence: float = 0.99,
    name: str = "empirical_dp",
) -> AuditReport:
    """
    Falsification test of (eps, delta)-DP on one pair of neighboring datasets.

    A cell E fails when the lower confidence bound on Pr[A(x) in E] exceeds
    e^eps times the upper bound on Pr[A(x') in E] plus delta, or the same with
    x and x' swapped. The confidence level covers all cells and both
    directions (Bonferroni).

    Args:
        mechanism: Randomized map (dataset, rng) -> outcome
        x: Dataset
        x_neighbor: Dataset at Hamming distance at most 1 from x
        partition: Map from outcomes to finitely many hashable cells
        trials: Runs per dataset
        budget: Claimed (eps, delta)
        rng: Generator; split into one stream per dataset
        confidence: Joint confidence of all bounds
        name: Check name recorded in the report

    Returns:
        AuditReport naming the worst cell in ``details``

    Raises:
        NotNeighborsError: If the datasets differ in more than one entry
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be at least 1, got {trials}")
    data, neighbor = np.asarray(x, dtype=float), np.asarray(x_neighbor, dtype=float)
    distance = hamming_distance(data, neighbor)
    if distance > 1:
        raise NotNeighborsError(distance)

    rng_x, rng_y = rng.spawn(2)
    counts_x = _outcome_counts(mechanism, data, partition, trials, rng_x)
    counts_y = _outcome_counts(mechanism, neighbor, partition, trials, rng_y)
    cells = sorted(set(counts_x) | set(counts_y), key=repr)

    alpha = (1.0 - confidence) / (4 * len(cells))
    factor = math.exp(budget.epsilon)
    k_x = np.array([counts_x[c] for c in cells])
    k_y = np.array([counts_y[c] for c in cells])
    low_x, up_x = clopper_pearson_lower(k_x, trials, alpha), clopper_pearson_upper(k_x, trials, alpha)
    low_y, up_y = clopper_pearson_lower(k_y, trials, alpha), clopper_pearson_upper(k_y, trials, alpha)

    forward = np.atleast_1d(low_x - (factor * up_y + budget.delta))
    backward = np.atleast_1d(low_y - (factor * up_x + budget.delta))
    signed = np.maximum(forward, backward)
    worst = int(np.argmax(signed))

    both = (k_x > 0) & (k_y > 0)
    ratios = np.where(both, np.maximum(k_x, 1) / np.maximum(k_y, 1), 1.0)
    ratio = float(np.max(np.maximum(ratios, 1.0 / ratios)))

    report = verdict(
        name,
        estimate=ratio,
        bound=factor,
        violation=float(signed[worst]),
        slack=float(up_y[worst] - k_y[worst] / trials),
        sample_sizes={"x": trials, "x_neighbor": trials},
        details={
            "worst_cell": cells[worst],
            "cells": len(cells),
            "p_x": float(k_x[worst] / trials),
            "p_x_neighbor": float(k_y[worst] / trials),
            "hamming": distance,
        },
    )
    logger.info("dp_audit_finished", check=name, status=report.status, cells=len(cells), ratio=ratio)
    return report


def replace_entry(x: Sequence[float], index: int, target: float) -> np.ndarray:
    """Copy of ``x`` with entry ``index`` replaced by ``target``."""
    neighbor = np.array(x, dtype=float, copy=True)
    neighbor[index] = target
    return neighbor
