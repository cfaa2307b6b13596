"""Forward simulators for two discrete-time contagion processes.

Simple contagion: susceptible-infected with unit contacts. Each step every
infected node contacts one uniformly chosen neighbor (regardless of the
neighbor's status) and infects a susceptible contact with probability theta.

Complex contagion: susceptible-exposed-infected. Infected nodes make the
same unit contacts; a contact with a non-infected neighbor delivers an
exposure with probability beta. Each exposure immediately tests infection
with a probability that rises sigmoidally in the target's current count of
infected neighbors. Infected-neighbor counts are frozen at the start of a
step and all new infections apply synchronously at step end, so the
closed-form "infected exactly at the last exposure" product is the exact
likelihood of the simulated mechanism.

Both simulators iterate infected nodes in ascending id order and are
bit-reproducible for a fixed generator seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .graph import Network


@dataclass(frozen=True)
class SigmoidConfig:
    """Bounds and gain of the infection-probability sigmoid.

    eps_low / eps_high are the (open) infimum and supremum of the per-exposure
    infection probability; gain controls how sharply the curve switches once
    the infected-neighbor fraction crosses the threshold.
    """

    eps_low: float = 0.001
    eps_high: float = 0.25
    gain: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.eps_low < self.eps_high < 1.0):
            raise ValueError(
                f"need 0 < eps_low < eps_high < 1, got ({self.eps_low}, {self.eps_high})"
            )


@dataclass(frozen=True)
class SimpleParams:
    theta: float
    seed_node: int

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise ValueError(f"theta must be in [0,1], got {self.theta}")


@dataclass(frozen=True)
class ComplexParams:
    beta: float
    gamma: float
    seed_node: int

    def __post_init__(self):
        if not (0.0 <= self.beta <= 1.0):
            raise ValueError(f"beta must be in [0,1], got {self.beta}")
        if not (0.0 <= self.gamma <= 1.0):
            raise ValueError(f"gamma must be in [0,1], got {self.gamma}")


@dataclass(frozen=True)
class EpidemicTrace:
    """Per-step record of an epidemic.

    infected[i] / exposed[i] are sorted id arrays for time t_start + i.
    Exposure histories are stored as per-step deltas: exposure_deltas[i]
    maps node -> its full counts tuple after step i, listed only for nodes
    whose history changed at that step (index 0 carries the state at
    t_start). exposed / exposure_deltas are None for simple contagion.
    prior_exposed lists nodes first exposed before t_start; present on
    sliced traces so first-exposure statistics stay exact.
    """

    node_count: int
    t_start: int
    infected: tuple[np.ndarray, ...]
    exposed: tuple[np.ndarray, ...] | None = None
    exposure_deltas: tuple[dict[int, tuple[int, ...]], ...] | None = None
    prior_exposed: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def is_complex(self) -> bool:
        return self.exposed is not None

    @property
    def t_end(self) -> int:
        return self.t_start + len(self.infected) - 1

    def _index(self, t: int) -> int:
        if not (self.t_start <= t <= self.t_end):
            raise ValueError(f"t={t} outside trace range [{self.t_start}, {self.t_end}]")
        return t - self.t_start

    def infected_at(self, t: int) -> np.ndarray:
        return self.infected[self._index(t)]

    def exposed_at(self, t: int) -> np.ndarray:
        if self.exposed is None:
            raise ValueError("simple-contagion trace has no exposed sets")
        return self.exposed[self._index(t)]

    def exposure_summaries_at(self, t: int) -> dict[int, tuple[int, ...]]:
        """Exposure histories of the nodes exposed at time t."""
        if self.exposure_deltas is None:
            raise ValueError("trace carries no recorded exposure histories")
        i = self._index(t)
        acc: dict[int, tuple[int, ...]] = {}
        for delta in self.exposure_deltas[: i + 1]:
            acc.update(delta)
        current = self.exposed[i]
        return {int(node): acc[int(node)] for node in current}

    def iter_exposure_summaries(self) -> Iterator[tuple[int, dict[int, tuple[int, ...]]]]:
        """Yield (t, histories of currently exposed nodes) for every step."""
        if self.exposure_deltas is None:
            raise ValueError("trace carries no recorded exposure histories")
        acc: dict[int, tuple[int, ...]] = {}
        for i, delta in enumerate(self.exposure_deltas):
            acc.update(delta)
            current = self.exposed[i]
            yield self.t_start + i, {int(node): acc[int(node)] for node in current}

    def sliced(self, t0: int, t_end: int) -> "EpidemicTrace":
        """Restrict the record to [t0, t_end], keeping pre-t0 exposure state."""
        if t0 > t_end:
            raise ValueError(f"empty slice [{t0}, {t_end}]")
        i0 = self._index(t0)
        i1 = self._index(t_end)
        infected = self.infected[i0 : i1 + 1]
        if not self.is_complex:
            return EpidemicTrace(
                node_count=self.node_count,
                t_start=t0,
                infected=infected,
                meta=dict(self.meta),
            )
        if self.exposure_deltas is not None:
            base: dict[int, tuple[int, ...]] = {}
            for delta in self.exposure_deltas[: i0 + 1]:
                base.update(delta)
            deltas = (base, *self.exposure_deltas[i0 + 1 : i1 + 1])
        else:
            deltas = None
        prior = [] if self.prior_exposed is None else [self.prior_exposed]
        prior.extend(self.exposed[:i0])
        prior_exposed = (
            np.unique(np.concatenate(prior)) if prior else np.array([], dtype=np.int64)
        )
        prior_exposed.flags.writeable = False
        return EpidemicTrace(
            node_count=self.node_count,
            t_start=t0,
            infected=infected,
            exposed=self.exposed[i0 : i1 + 1],
            exposure_deltas=deltas,
            prior_exposed=prior_exposed,
            meta=dict(self.meta),
        )


def p_infect(k: int, degree: int, threshold: float, cfg: SigmoidConfig) -> float:
    """Per-exposure infection probability with k of `degree` neighbors infected.

    eps_low + (eps_high - eps_low) / (1 + exp(-gain * (k - threshold*degree))),
    strictly increasing in k and confined to (eps_low, eps_high).
    """
    if k < 1:
        raise ValueError(f"need at least one infected neighbor, got k={k}")
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    if k > degree:
        raise ValueError(f"k={k} exceeds degree {degree}")
    span = cfg.eps_high - cfg.eps_low
    return cfg.eps_low + span / (1.0 + math.exp(-cfg.gain * (k - threshold * degree)))


def _p_infect_array(
    k: np.ndarray, degree: np.ndarray, threshold: float, cfg: SigmoidConfig
) -> np.ndarray:
    span = cfg.eps_high - cfg.eps_low
    return cfg.eps_low + span / (1.0 + np.exp(-cfg.gain * (k - threshold * degree)))


def infection_at_last_exposure_prob(
    counts: Sequence[int], degree: int, threshold: float, cfg: SigmoidConfig
) -> float:
    """Probability of becoming infected exactly at the final recorded exposure.

    counts[k-1] is the number of exposures received while exactly k neighbors
    were infected. The node survives every exposure except the last, which
    succeeds: prod_{k<K} (1-p_k)^{c_k} * (1-p_K)^{c_K - 1} * p_K.
    """
    if len(counts) == 0:
        raise ValueError("exposure summary is empty")
    if counts[-1] < 1:
        raise ValueError("final exposure count must be >= 1")
    if any(c < 0 for c in counts):
        raise ValueError("exposure counts must be nonnegative")
    top = len(counts)
    prob = 1.0
    for k, c in enumerate(counts, start=1):
        p_k = p_infect(k, degree, threshold, cfg)
        if k < top:
            prob *= (1.0 - p_k) ** c
        else:
            prob *= (1.0 - p_k) ** (c - 1) * p_k
    return prob


def seed_complex(
    net: Network, seed_node: int, gamma: float, rng: np.random.Generator
) -> np.ndarray:
    """Initial infected set: the seed plus a gamma-proportion wave of neighbors.

    The wave size is gamma * degree rounded half away from zero; wave members
    are drawn uniformly without replacement and infected deterministically.
    """
    nbrs = net.neighbors(seed_node)
    wave_size = int(math.floor(gamma * len(nbrs) + 0.5))
    if wave_size > 0:
        wave = rng.choice(np.array(nbrs, dtype=np.int64), size=wave_size, replace=False)
    else:
        wave = np.array([], dtype=np.int64)
    out = np.unique(np.append(wave, seed_node))
    out.flags.writeable = False
    return out


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def simulate_simple(
    net: Network, params: SimpleParams, t_max: int, rng: np.random.Generator
) -> EpidemicTrace:
    """Run the susceptible-infected process for t_max steps past t=0."""
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    net._check_node(params.seed_node)
    n = net.node_count
    flat, offs, degs = net.neighbor_flat, net.neighbor_offsets, net.degrees
    infected_state = np.zeros(n, dtype=bool)
    infected_state[params.seed_node] = True
    current = _frozen(np.array([params.seed_node], dtype=np.int64))
    steps = [current]
    for _ in range(t_max):
        actors = current[degs[current] > 0]
        if len(actors):
            picks = rng.integers(0, degs[actors])
            targets = flat[offs[actors] + picks]
            hits = rng.random(len(actors)) < params.theta
            fresh = targets[hits & ~infected_state[targets]]
            if len(fresh):
                infected_state[fresh] = True
                current = _frozen(np.flatnonzero(infected_state))
        steps.append(current)
    return EpidemicTrace(
        node_count=n,
        t_start=0,
        infected=tuple(steps),
        meta={"model": "simple"},
    )


def simulate_complex(
    net: Network,
    params: ComplexParams,
    cfg: SigmoidConfig,
    t_max: int,
    rng: np.random.Generator,
    record_exposures: bool = True,
) -> EpidemicTrace:
    """Run the exposed-threshold process for t_max steps past t=0.

    With record_exposures=False per-node exposure histories are skipped
    (the infected/exposed evolution is bit-identical either way); inference
    only consumes node sets, so its simulations run in this mode.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    net._check_node(params.seed_node)
    wave = seed_complex(net, params.seed_node, params.gamma, rng)
    meta = {"model": "complex", "empty_seed_wave": len(wave) == 1 and net.degree(params.seed_node) > 0}
    return _run_complex(net, wave, params, cfg, t_max, rng, record_exposures, meta)


def _run_complex(
    net: Network,
    initial_infected: np.ndarray,
    params: ComplexParams,
    cfg: SigmoidConfig,
    t_max: int,
    rng: np.random.Generator,
    record_exposures: bool,
    meta: dict,
) -> EpidemicTrace:
    """Step the complex contagion from an explicit initial infected set."""
    n = net.node_count
    flat, offs, degs = net.neighbor_flat, net.neighbor_offsets, net.degrees
    infected_state = np.zeros(n, dtype=bool)
    infected_state[initial_infected] = True
    exposed_state = np.zeros(n, dtype=bool)

    # infected-neighbor counts, maintained incrementally; frozen per step
    k_count = np.zeros(n, dtype=np.int64)
    if len(initial_infected):
        touched = np.concatenate([flat[offs[v] : offs[v + 1]] for v in initial_infected])
        np.add.at(k_count, touched, 1)

    histories: dict[int, list[int]] = {}
    current_inf = _frozen(np.unique(initial_infected))
    current_exp = _frozen(np.array([], dtype=np.int64))
    inf_steps = [current_inf]
    exp_steps = [current_exp]
    deltas: list[dict[int, tuple[int, ...]]] = [{}]

    for _ in range(t_max):
        actors = current_inf[degs[current_inf] > 0]
        delta: dict[int, tuple[int, ...]] = {}
        fresh = np.array([], dtype=np.int64)
        if len(actors):
            picks = rng.integers(0, degs[actors])
            targets = flat[offs[actors] + picks]
            contacts = rng.random(len(actors)) < params.beta
            event_targets = targets[contacts & ~infected_state[targets]]
            if len(event_targets):
                u_inf = rng.random(len(event_targets))
                kt = k_count[event_targets]
                probs = _p_infect_array(kt, degs[event_targets], params.gamma, cfg)
                success = u_inf < probs
                exposed_state[event_targets] = True
                if record_exposures:
                    fresh_list = []
                    order = np.argsort(event_targets, kind="stable")
                    grouped = event_targets[order]
                    bounds = np.flatnonzero(np.diff(grouped)) + 1
                    for grp in np.split(order, bounds):
                        node = int(event_targets[grp[0]])
                        wins = np.flatnonzero(success[grp])
                        if len(wins):
                            recorded = int(wins[0]) + 1
                            fresh_list.append(node)
                        else:
                            recorded = len(grp)
                        hist = histories.setdefault(node, [])
                        k = int(k_count[node])
                        if len(hist) < k:
                            hist.extend([0] * (k - len(hist)))
                        hist[k - 1] += recorded
                        delta[node] = tuple(hist)
                    fresh = np.array(sorted(fresh_list), dtype=np.int64)
                else:
                    fresh = np.unique(event_targets[success])
        if len(fresh):
            infected_state[fresh] = True
            exposed_state[fresh] = False
            touched = np.concatenate([flat[offs[v] : offs[v + 1]] for v in fresh])
            np.add.at(k_count, touched, 1)
            current_inf = _frozen(np.flatnonzero(infected_state))
        current_exp = _frozen(np.flatnonzero(exposed_state))
        inf_steps.append(current_inf)
        exp_steps.append(current_exp)
        deltas.append(delta)

    return EpidemicTrace(
        node_count=n,
        t_start=0,
        infected=tuple(inf_steps),
        exposed=tuple(exp_steps),
        exposure_deltas=tuple(deltas) if record_exposures else None,
        prior_exposed=None,
        meta=meta,
    )
