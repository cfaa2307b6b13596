"""Likelihood-free posterior sampling for contagion parameters and the seed node.

The sampler keeps a population of particles, each holding a parameter point
(spreading parameters plus seed node) and the discrepancy of a dataset
simulated at that point. Every step each particle proposes a perturbed
point: a Gaussian move on the continuous parameters (scaled by the
population spread of the previous step, truncated to the unit box by
redrawing) and an inverse-degree-weighted move of the seed node to one of
its neighbors. The proposal is accepted with a Metropolis probability at
the current tolerance, times the Hastings ratio of the asymmetric node
kernel and the prior support indicator; the tolerance then cools by a
factor tied to the realized acceptance rate.

All randomness derives from the config seed through per-(step, particle)
substreams, so results are identical no matter how particle proposals are
scheduled.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .contagion import (
    ComplexParams,
    SigmoidConfig,
    SimpleParams,
    simulate_complex,
    simulate_simple,
)
from .discrepancy import Discrepancy, discrepancy_complex, discrepancy_simple
from .graph import Network, PathTable
from .summaries import (
    ObservationWindow,
    SummaryBundle,
    bundle_to_dict,
    summarize_complex,
    summarize_simple,
)

logger = logging.getLogger(__name__)

SCALE_FLOOR = 1e-8
TRUNCATION_TRIES = 100
CUTOFF_WINDOW = 10  # steps in the moving-average acceptance rate


@dataclass(frozen=True)
class Phi:
    """One parameter point: continuous spreading parameters plus seed node."""

    params: tuple[float, ...]
    seed_node: int

    def __post_init__(self):
        if not self.params:
            raise ValueError("continuous part must be nonempty")
        if any(not (0.0 <= x <= 1.0) for x in self.params):
            raise ValueError(f"continuous parameters must lie in [0,1], got {self.params}")
        if self.seed_node < 0:
            raise ValueError("seed node must be a valid id")


@dataclass(frozen=True)
class PriorSpec:
    """Uniform prior: seed node over the t0-infected support, unit box otherwise."""

    seed_support: tuple[int, ...]
    dim: int

    def __post_init__(self):
        if not self.seed_support:
            raise ValueError("seed-node support is empty")
        if self.dim not in (1, 2):
            raise ValueError("continuous dimension must be 1 or 2")

    @classmethod
    def from_observed(cls, observed: SummaryBundle) -> "PriorSpec":
        support = tuple(int(v) for v in observed.infected_sets[0])
        return cls(seed_support=support, dim=2 if observed.is_complex else 1)


@dataclass(frozen=True)
class ParticleState:
    phi: Phi
    distance: float
    bundle: SummaryBundle | None = None


@dataclass(frozen=True)
class SabcConfig:
    population_size: int = 1000
    max_steps: int = 200
    acceptance_rate_cutoff: float = 1e-4
    annealing_velocity: float = 0.3
    initial_tolerance_quantile: float = 0.5
    resample_threshold: int | None = None
    rng_seed: int = 0
    keep_bundles: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")
        if not (0.0 < self.acceptance_rate_cutoff < 1.0):
            raise ValueError("acceptance_rate_cutoff must be in (0,1)")
        if not (0.0 < self.annealing_velocity <= 1.0):
            raise ValueError("annealing_velocity must be in (0,1]")
        if not (0.0 < self.initial_tolerance_quantile <= 1.0):
            raise ValueError("initial_tolerance_quantile must be in (0,1]")


@dataclass(frozen=True)
class PosteriorSample:
    """Final particle population with the run's schedule diagnostics."""

    phis: tuple[Phi, ...]
    distances: np.ndarray
    tolerances: tuple[float, ...]
    acceptance_rates: tuple[float, ...]
    steps_run: int
    config: SabcConfig
    observed_digest: str
    resample_steps: tuple[int, ...] = ()

    @property
    def params_array(self) -> np.ndarray:
        return np.array([p.params for p in self.phis], dtype=float)

    @property
    def seed_nodes(self) -> np.ndarray:
        return np.array([p.seed_node for p in self.phis], dtype=np.int64)


@dataclass(frozen=True)
class AbcProblem:
    """Simulator, summarizer, and discrepancy wired to one observed dataset.

    network_term picks the per-step network distance: "mean" (pairwise
    average, the default; invariant to epidemic size) or "sum" (the raw
    pair sum, which shrinks as the simulated epidemic empties and lets the
    sampler collapse onto near-empty epidemics; kept for comparison runs).
    """

    kind: str
    net: Network
    paths: PathTable
    window: ObservationWindow
    observed: SummaryBundle
    sigmoid: SigmoidConfig = field(default_factory=SigmoidConfig)
    network_term: str = "mean"

    def __post_init__(self):
        if self.kind not in ("simple", "complex"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.network_term not in ("mean", "sum"):
            raise ValueError(f"unknown network term {self.network_term!r}")
        if self.observed.window != self.window:
            raise ValueError("observed bundle does not cover the problem window")
        if self.kind == "complex" and not self.observed.is_complex:
            raise ValueError("complex model needs exposure statistics in the observed bundle")
        if self.observed.node_count != self.net.node_count:
            raise ValueError("observed bundle and network disagree on node count")

    @property
    def dim(self) -> int:
        return 1 if self.kind == "simple" else 2

    def prior_spec(self) -> PriorSpec:
        return PriorSpec.from_observed(self.observed)

    def simulate_bundle(self, phi: Phi, rng: np.random.Generator) -> SummaryBundle:
        if self.kind == "simple":
            params = SimpleParams(theta=phi.params[0], seed_node=phi.seed_node)
            trace = simulate_simple(self.net, params, self.window.t_end, rng)
            return summarize_simple(trace, self.window, self.net)
        params = ComplexParams(beta=phi.params[0], gamma=phi.params[1], seed_node=phi.seed_node)
        trace = simulate_complex(
            self.net, params, self.sigmoid, self.window.t_end, rng, record_exposures=False
        )
        return summarize_complex(trace, self.window, self.net)

    def distance(self, bundle: SummaryBundle) -> Discrepancy:
        normalized = self.network_term == "mean"
        if self.kind == "simple":
            return discrepancy_simple(self.observed, bundle, self.paths, self.window, normalized)
        return discrepancy_complex(self.observed, bundle, self.paths, self.window, normalized)

    def simulate_distance(self, phi: Phi, rng: np.random.Generator) -> tuple[float, SummaryBundle]:
        bundle = self.simulate_bundle(phi, rng)
        return self.distance(bundle).value, bundle


def prior_sample(spec: PriorSpec, rng: np.random.Generator) -> Phi:
    """Independent uniform draws: unit box for each parameter, support for the node."""
    params = tuple(float(x) for x in rng.random(spec.dim))
    node = spec.seed_support[int(rng.integers(len(spec.seed_support)))]
    return Phi(params=params, seed_node=node)


def kernel_node(current: int, net: Network, rng: np.random.Generator) -> int:
    """Move to a neighbor with probability inversely proportional to its degree."""
    nbrs = net.neighbors(current)
    if not nbrs:
        raise ValueError(f"node {current} is isolated and cannot be perturbed")
    weights = 1.0 / net.degrees[list(nbrs)]
    probs = weights / weights.sum()
    return int(rng.choice(np.array(nbrs, dtype=np.int64), p=probs))


def kernel_node_prob(src: int, dst: int, net: Network) -> float:
    """Probability that the node kernel at src proposes dst."""
    nbrs = net.neighbors(src)
    if dst not in nbrs:
        return 0.0
    weights = 1.0 / net.degrees[list(nbrs)]
    return float((1.0 / net.degree(dst)) / weights.sum())


def kernel_continuous(
    current: Sequence[float],
    scale: float | np.ndarray,
    rng: np.random.Generator,
    max_tries: int = TRUNCATION_TRIES,
) -> tuple[float, ...] | None:
    """Gaussian move truncated to the unit box by redrawing.

    Returns None when max_tries draws all left the box, which callers treat
    as a rejected move. scale is a variance (1-D) or covariance matrix.
    """
    x = np.asarray(current, dtype=float)
    d = len(x)
    if d == 1:
        var = float(np.asarray(scale).reshape(()))
        if var <= 0:
            raise ValueError("kernel variance must be positive")
        chol = np.array([[math.sqrt(var)]])
    else:
        cov = np.asarray(scale, dtype=float)
        if cov.shape != (d, d):
            raise ValueError(f"covariance shape {cov.shape} does not match dimension {d}")
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            logger.warning("covariance not positive definite; falling back to its diagonal")
            diag = np.maximum(np.diag(cov), SCALE_FLOOR)
            chol = np.diag(np.sqrt(diag))
    for _ in range(max_tries):
        prop = x + chol @ rng.standard_normal(d)
        if ((prop >= 0.0) & (prop <= 1.0)).all():
            return tuple(float(v) for v in prop)
    return None


def estimate_kernel_scale(population: Sequence[Phi]) -> float | np.ndarray:
    """Unbiased sample variance (1-D) or covariance (2-D) of the continuous parts.

    Degenerate populations get a SCALE_FLOOR on the variance diagonal so the
    kernel never collapses to a point mass.
    """
    if len(population) < 2:
        raise ValueError("need at least two particles to estimate a kernel scale")
    arr = np.array([p.params for p in population], dtype=float)
    if arr.shape[1] == 1:
        var = float(np.var(arr[:, 0], ddof=1))
        if var < SCALE_FLOOR:
            logger.warning("degenerate population: flooring kernel variance at %g", SCALE_FLOOR)
            var = SCALE_FLOOR
        return var
    cov = np.cov(arr.T, ddof=1)
    if np.any(np.diag(cov) < SCALE_FLOOR):
        logger.warning("degenerate population: flooring covariance diagonal at %g", SCALE_FLOOR)
        cov = cov.copy()
        for i in range(cov.shape[0]):
            cov[i, i] = max(cov[i, i], SCALE_FLOOR)
    return cov


def observed_digest(observed: SummaryBundle) -> str:
    payload = json.dumps(bundle_to_dict(observed), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()


def _substream(seed: int, step: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(step, index)))


def _metropolis_prob(d_new: float, d_old: float, eps: float, hastings: float) -> float:
    if eps <= 0.0:
        if d_new < d_old:
            base = math.inf
        elif d_new == d_old:
            base = 1.0
        else:
            base = 0.0
    else:
        base = math.exp(-(d_new - d_old) / eps)
    return min(1.0, base * hastings)


def _propose(
    problem: AbcProblem,
    spec: PriorSpec,
    particle: ParticleState,
    eps: float,
    scale: float | np.ndarray,
    support: frozenset[int],
    keep_bundle: bool,
    rng: np.random.Generator,
) -> ParticleState | None:
    """One particle update; returns the accepted state or None on rejection.

    Draw order is fixed (continuous move, node move, acceptance uniform) so
    the substream consumption is reproducible.
    """
    new_params = kernel_continuous(particle.phi.params, scale, rng)
    if new_params is None:
        return None
    if len(spec.seed_support) == 1:
        # nothing to infer about the seed: node moves would always leave the
        # prior support and deadlock the sampler
        new_node = particle.phi.seed_node
        hastings = 1.0
    else:
        old_node = particle.phi.seed_node
        new_node = kernel_node(old_node, problem.net, rng)
        if new_node not in support:
            return None
        hastings = kernel_node_prob(new_node, old_node, problem.net) / kernel_node_prob(
            old_node, new_node, problem.net
        )
    phi2 = Phi(params=new_params, seed_node=new_node)
    bundle2 = problem.simulate_bundle(phi2, rng)
    d2 = problem.distance(bundle2).value
    if not math.isfinite(d2):
        return None
    alpha = _metropolis_prob(d2, particle.distance, eps, hastings)
    if rng.random() < alpha:
        return ParticleState(phi=phi2, distance=d2, bundle=bundle2 if keep_bundle else None)
    return None


def sabc_run(problem: AbcProblem, spec: PriorSpec, cfg: SabcConfig) -> PosteriorSample:
    """Run the annealed ABC population sampler to termination.

    Stops after max_steps, or earlier once the mean acceptance rate over the
    last CUTOFF_WINDOW steps drops below the configured cutoff.
    """
    if spec.dim != problem.dim:
        raise ValueError("prior dimension does not match the model")
    for node in spec.seed_support:
        problem.net._check_node(node)

    Z = cfg.population_size
    particles: list[ParticleState] = []
    best: tuple[float, Discrepancy] | None = None
    for i in range(Z):
        rng = _substream(cfg.rng_seed, 0, i)
        phi = prior_sample(spec, rng)
        bundle = problem.simulate_bundle(phi, rng)
        disc = problem.distance(bundle)
        d = disc.value
        if best is None or d < best[0]:
            best = (d, disc)
        particles.append(
            ParticleState(phi=phi, distance=d, bundle=bundle if cfg.keep_bundles else None)
        )
    if logger.isEnabledFor(logging.DEBUG) and best is not None:
        logger.debug("initial population: best distance %.6g, components %s", best[0], best[1].components)

    eps = float(np.quantile([p.distance for p in particles], cfg.initial_tolerance_quantile))
    tolerances = [eps]
    acceptance_rates: list[float] = []
    recent: deque[float] = deque(maxlen=CUTOFF_WINDOW)
    resample_steps: list[int] = []
    accepted_since_resample = 0
    support = frozenset(spec.seed_support)
    steps_run = 0

    for step in range(1, cfg.max_steps + 1):
        scale = estimate_kernel_scale([p.phi for p in particles])
        accepted = 0
        updated = list(particles)
        for i in range(Z):
            rng = _substream(cfg.rng_seed, step, i)
            result = _propose(
                problem, spec, particles[i], eps, scale, support, cfg.keep_bundles, rng
            )
            if result is not None:
                updated[i] = result
                accepted += 1
        particles = updated
        rate = accepted / Z
        eps *= 1.0 - cfg.annealing_velocity * rate
        tolerances.append(eps)
        acceptance_rates.append(rate)
        recent.append(rate)
        steps_run = step
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("step %d: eps %.6g, acceptance %.4f", step, eps, rate)

        accepted_since_resample += accepted
        if (
            cfg.resample_threshold is not None
            and accepted_since_resample >= cfg.resample_threshold
        ):
            rng = _substream(cfg.rng_seed, step, Z)
            idx = rng.integers(0, Z, size=Z)
            particles = [particles[int(j)] for j in idx]
            resample_steps.append(step)
            accepted_since_resample = 0

        if len(recent) == CUTOFF_WINDOW and float(np.mean(recent)) < cfg.acceptance_rate_cutoff:
            break

    distances = np.array([p.distance for p in particles], dtype=float)
    distances.flags.writeable = False
    return PosteriorSample(
        phis=tuple(p.phi for p in particles),
        distances=distances,
        tolerances=tuple(tolerances),
        acceptance_rates=tuple(acceptance_rates),
        steps_run=steps_run,
        config=cfg,
        observed_digest=observed_digest(problem.observed),
        resample_steps=tuple(resample_steps),
    )
