"""Discrepancy measures between observed and simulated summary bundles.

The network term sums hop distances between every pair drawn from the two
per-step node sets, scaled by the diameter, averaged with the 1/(t_end-t0)
prefactor. Hop counts are integers, so the triple sum is accumulated as an
exact integer: per-step contributions are computed incrementally from set
deltas (the sets grow or shrink by a few nodes per step), which is orders
of magnitude faster than rescanning and still bit-equal to a naive loop.

Note self-distance is not zero: identical spread-out sets still pay the
cross terms between distinct members. The raw sum also grows with the
product of the two set sizes, which makes it smallest against near-empty
simulations; normalized=True divides each step by that product (the mean
pairwise distance), the variant the inference pipeline uses by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import UNREACHABLE, PathTable, UnreachablePairError
from .summaries import ObservationWindow, SummaryBundle


@dataclass(frozen=True)
class Discrepancy:
    """Total distance plus its named per-statistic breakdown."""

    value: float
    components: dict[str, float]


def euclid(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between equal-length real vectors."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


_EMPTY = np.array([], dtype=np.int64)


def _pair_hop_sum(rows: np.ndarray, cols: np.ndarray, hops: np.ndarray) -> int:
    """Exact integer sum of hops over rows x cols; raises on split pairs."""
    if len(rows) == 0 or len(cols) == 0:
        return 0
    sub = hops[np.asarray(rows)[:, None], np.asarray(cols)[None, :]]
    if sub.min() == UNREACHABLE:
        raise UnreachablePairError("node sets span disconnected components")
    return int(sub.sum(dtype=np.int64))


def _sorted_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a minus b for sorted unique integer arrays."""
    if a is b or len(a) == 0:
        return _EMPTY
    if len(b) == 0:
        return a
    pos = np.searchsorted(b, a)
    mask = b[np.minimum(pos, len(b) - 1)] != a
    return a[mask]


def graph_distance(
    sets1: Sequence[np.ndarray],
    sets2: Sequence[np.ndarray],
    paths: PathTable,
    window: ObservationWindow,
    normalized: bool = False,
) -> float:
    """Diameter-scaled sum of pairwise hop distances between per-step sets.

    With normalized=True each step's pair sum is additionally divided by
    the product of the two set sizes; this variant is experimental and not
    part of the standard measure.
    """
    if len(sets1) != window.length or len(sets2) != window.length:
        raise ValueError(
            f"need {window.length} per-step sets, got {len(sets1)} and {len(sets2)}"
        )
    hops = paths.hops
    if normalized:
        terms = []
        for x, y in zip(sets1, sets2):
            if len(x) == 0 or len(y) == 0:
                continue
            terms.append(_pair_hop_sum(x, y, hops) / (len(x) * len(y)))
        if not terms:
            return 0.0
        return math.fsum(terms) / (paths.rho_max * window.span)

    total = 0
    current = 0
    x_prev = np.array([], dtype=np.int64)
    y_prev = np.array([], dtype=np.int64)
    for x, y in zip(sets1, sets2):
        x = np.asarray(x)
        y = np.asarray(y)
        if x is not x_prev:
            current += _pair_hop_sum(_sorted_diff(x, x_prev), y_prev, hops)
            current -= _pair_hop_sum(_sorted_diff(x_prev, x), y_prev, hops)
        if y is not y_prev:
            current += _pair_hop_sum(x, _sorted_diff(y, y_prev), hops)
            current -= _pair_hop_sum(x, _sorted_diff(y_prev, y), hops)
        total += current
        x_prev, y_prev = x, y
    if total == 0:
        return 0.0
    return total / (paths.rho_max * window.span)


def discrepancy_simple(
    x1: SummaryBundle,
    x2: SummaryBundle,
    paths: PathTable,
    window: ObservationWindow,
    normalized: bool = False,
) -> Discrepancy:
    """Infected-proportion distance plus infected-set network distance."""
    _check_windows(x1, x2, window)
    components = {
        "s": euclid(x1.infected_fraction, x2.infected_fraction),
        "G": graph_distance(x1.infected_sets, x2.infected_sets, paths, window, normalized),
    }
    return Discrepancy(value=math.fsum(components.values()), components=components)


def discrepancy_complex(
    x1: SummaryBundle,
    x2: SummaryBundle,
    paths: PathTable,
    window: ObservationWindow,
    normalized: bool = False,
) -> Discrepancy:
    """Five-term sum over infected/exposed/first-exposed statistics."""
    _check_windows(x1, x2, window)
    if not (x1.is_complex and x2.is_complex):
        raise ValueError("complex discrepancy needs bundles with exposure statistics")
    components = {
        "s": euclid(x1.infected_fraction, x2.infected_fraction),
        "e": euclid(x1.exposed_fraction, x2.exposed_fraction),
        "ce": euclid(x1.first_exposed_fraction, x2.first_exposed_fraction),
        "G": graph_distance(x1.infected_sets, x2.infected_sets, paths, window, normalized),
        "H": graph_distance(x1.exposed_sets, x2.exposed_sets, paths, window, normalized),
    }
    return Discrepancy(value=math.fsum(components.values()), components=components)


def _check_windows(x1: SummaryBundle, x2: SummaryBundle, window: ObservationWindow) -> None:
    if x1.window != window or x2.window != window:
        raise ValueError("bundles do not cover the requested window")
