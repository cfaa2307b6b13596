"""Summary statistics of an epidemic over an observation window.

A trace reduces to per-step infected proportions and node sets (plus, for
complex contagion, exposed proportions, first-exposure proportions, and
exposed node sets). First exposures are counted against the whole available
history: a full trace counts from t=0, while an observed dataset that
starts at t0 counts nodes exposed at t0 as first exposures unless it
carries a pre-t0 snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contagion import EpidemicTrace
from .graph import Network


@dataclass(frozen=True)
class ObservationWindow:
    """Inclusive step range [t0, t_end] over which node states are observed."""

    t0: int
    t_end: int

    def __post_init__(self):
        if not (0 <= self.t0 < self.t_end):
            raise ValueError(f"need 0 <= t0 < t_end, got [{self.t0}, {self.t_end}]")

    @property
    def length(self) -> int:
        return self.t_end - self.t0 + 1

    @property
    def span(self) -> int:
        return self.t_end - self.t0

    def steps(self) -> range:
        return range(self.t0, self.t_end + 1)


@dataclass(frozen=True)
class SummaryBundle:
    """Per-step statistics over a window; exposure fields are None for simple contagion."""

    window: ObservationWindow
    node_count: int
    infected_fraction: np.ndarray
    infected_sets: tuple[np.ndarray, ...]
    exposed_fraction: np.ndarray | None = None
    first_exposed_fraction: np.ndarray | None = None
    exposed_sets: tuple[np.ndarray, ...] | None = None

    @property
    def is_complex(self) -> bool:
        return self.exposed_fraction is not None


def _check_coverage(trace: EpidemicTrace, window: ObservationWindow, net: Network) -> None:
    if trace.node_count != net.node_count:
        raise ValueError("trace and network disagree on node count")
    if window.t0 < trace.t_start or window.t_end > trace.t_end:
        raise ValueError(
            f"window [{window.t0}, {window.t_end}] outside trace range "
            f"[{trace.t_start}, {trace.t_end}]"
        )


def summarize_simple(
    trace: EpidemicTrace, window: ObservationWindow, net: Network
) -> SummaryBundle:
    """Infected proportions and infected node sets per observed step."""
    _check_coverage(trace, window, net)
    n = net.node_count
    sets = tuple(trace.infected_at(t) for t in window.steps())
    fractions = np.array([len(g) / n for g in sets])
    fractions.flags.writeable = False
    return SummaryBundle(
        window=window,
        node_count=n,
        infected_fraction=fractions,
        infected_sets=sets,
    )


def summarize_complex(
    trace: EpidemicTrace, window: ObservationWindow, net: Network
) -> SummaryBundle:
    """Adds exposed proportions, first-exposure proportions, and exposed sets."""
    _check_coverage(trace, window, net)
    if not trace.is_complex:
        raise ValueError("trace has no exposure record; use summarize_simple")
    n = net.node_count
    base = summarize_simple(trace, window, net)

    exposed_sets = tuple(trace.exposed_at(t) for t in window.steps())
    exposed_fraction = np.array([len(h) / n for h in exposed_sets])

    ever = np.zeros(n, dtype=bool)
    if trace.prior_exposed is not None:
        ever[trace.prior_exposed] = True
    first_counts = []
    for t in range(trace.t_start, window.t_end + 1):
        current = trace.exposed_at(t)
        fresh = int((~ever[current]).sum())
        ever[current] = True
        if t >= window.t0:
            first_counts.append(fresh)
    first_fraction = np.array(first_counts) / n

    exposed_fraction.flags.writeable = False
    first_fraction.flags.writeable = False
    return SummaryBundle(
        window=window,
        node_count=n,
        infected_fraction=base.infected_fraction,
        infected_sets=base.infected_sets,
        exposed_fraction=exposed_fraction,
        first_exposed_fraction=first_fraction,
        exposed_sets=exposed_sets,
    )


def summarize(trace: EpidemicTrace, window: ObservationWindow, net: Network) -> SummaryBundle:
    """Dispatch on the trace kind."""
    if trace.is_complex:
        return summarize_complex(trace, window, net)
    return summarize_simple(trace, window, net)


def bundle_to_dict(bundle: SummaryBundle) -> dict:
    """JSON-ready form with the short array keys s/e/ce/G/H."""
    out = {
        "t0": bundle.window.t0,
        "t_end": bundle.window.t_end,
        "node_count": bundle.node_count,
        "s": [float(x) for x in bundle.infected_fraction],
        "G": [g.tolist() for g in bundle.infected_sets],
    }
    if bundle.is_complex:
        out["e"] = [float(x) for x in bundle.exposed_fraction]
        out["ce"] = [float(x) for x in bundle.first_exposed_fraction]
        out["H"] = [h.tolist() for h in bundle.exposed_sets]
    return out


def bundle_from_dict(data: dict) -> SummaryBundle:
    window = ObservationWindow(t0=int(data["t0"]), t_end=int(data["t_end"]))
    sets = tuple(np.array(g, dtype=np.int64) for g in data["G"])
    kwargs = {}
    if "e" in data:
        kwargs = dict(
            exposed_fraction=np.array(data["e"], dtype=float),
            first_exposed_fraction=np.array(data["ce"], dtype=float),
            exposed_sets=tuple(np.array(h, dtype=np.int64) for h in data["H"]),
        )
    return SummaryBundle(
        window=window,
        node_count=int(data["node_count"]),
        infected_fraction=np.array(data["s"], dtype=float),
        infected_sets=sets,
        **kwargs,
    )
