"""Point estimation from posterior samples under a mixed loss.

The loss between two parameter points is the Euclidean distance of the
continuous parts plus the raw hop distance between the seed nodes. The loss
is an additive sum of per-component terms, so the posterior-expected-loss
minimizer splits: the continuous minimizer is the geometric median of the
sampled continuous parts (plain median in one dimension) and the node
minimizer is the network node with the smallest mean hop distance to the
sampled seeds, ties broken by smallest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import UNREACHABLE, Network, PathTable, UnreachablePairError
from .inference import Phi, PosteriorSample

WEISZFELD_TOL = 1e-9
WEISZFELD_MAX_ITER = 10_000


@dataclass(frozen=True)
class DistanceMarginal:
    """Posterior seed-node mass binned by hop distance from a reference node.

    node_counts[d] is how many network nodes sit at distance d, so mass per
    node at each distance (the "average marginal") is masses / node_counts.
    """

    masses: np.ndarray
    node_counts: np.ndarray


def _phis(samples: PosteriorSample | Sequence[Phi]) -> Sequence[Phi]:
    if isinstance(samples, PosteriorSample):
        return samples.phis
    return samples


def loss(phi1: Phi, phi2: Phi, paths: PathTable) -> float:
    """Euclidean distance between continuous parts plus seed-node hops."""
    if len(phi1.params) != len(phi2.params):
        raise ValueError("parameter dimensions differ")
    a = np.asarray(phi1.params)
    b = np.asarray(phi2.params)
    return float(np.sqrt(((a - b) ** 2).sum())) + paths.distance(phi1.seed_node, phi2.seed_node)


def geometric_median(points: np.ndarray, tol: float = WEISZFELD_TOL,
                     max_iter: int = WEISZFELD_MAX_ITER) -> np.ndarray:
    """Weiszfeld iteration with the usual shift when an iterate hits a sample."""
    pts = np.asarray(points, dtype=float)
    y = pts.mean(axis=0)
    for _ in range(max_iter):
        dist = np.linalg.norm(pts - y, axis=1)
        at_sample = dist < 1e-15
        if at_sample.any():
            rest = ~at_sample
            if not rest.any():
                return y
            inv = 1.0 / dist[rest]
            pull = (pts[rest] * inv[:, None]).sum(axis=0) / inv.sum()
            resid = ((pts[rest] - y) * inv[:, None]).sum(axis=0)
            r = float(np.linalg.norm(resid))
            multiplicity = int(at_sample.sum())
            if r <= multiplicity:
                return y
            step = multiplicity / r
            y_next = (1.0 - step) * pull + step * y
        else:
            inv = 1.0 / dist
            y_next = (pts * inv[:, None]).sum(axis=0) / inv.sum()
        if np.linalg.norm(y_next - y) <= tol:
            return y_next
        y = y_next
    return y


def _seed_node_scan(seeds: np.ndarray, paths: PathTable, candidates: np.ndarray) -> int:
    sub = paths.hops[np.ix_(candidates, seeds)]
    reachable = ~(sub == UNREACHABLE).any(axis=1)
    if not reachable.any():
        raise UnreachablePairError("no candidate node reaches every sampled seed")
    means = np.full(len(candidates), np.inf)
    means[reachable] = sub[reachable].sum(axis=1, dtype=np.int64) / sub.shape[1]
    return int(candidates[int(np.argmin(means))])


def bayes_estimate(
    samples: PosteriorSample | Sequence[Phi],
    net: Network,
    paths: PathTable,
    medoid: bool = False,
) -> Phi:
    """Minimizer of the empirical posterior expected loss.

    With medoid=True both components are restricted to values present in the
    sample instead of the full parameter space.
    """
    phis = _phis(samples)
    if not phis:
        raise ValueError("empty posterior sample")
    params = np.array([p.params for p in phis], dtype=float)
    seeds = np.array([p.seed_node for p in phis], dtype=np.int64)

    if medoid:
        sums = np.linalg.norm(params[:, None, :] - params[None, :, :], axis=2).sum(axis=0)
        best = tuple(float(v) for v in params[int(np.argmin(sums))])
        node = _seed_node_scan(seeds, paths, np.unique(seeds))
        return Phi(params=best, seed_node=node)

    if params.shape[1] == 1:
        best = (float(np.median(params[:, 0])),)
    else:
        best = tuple(float(v) for v in geometric_median(params))
    node = _seed_node_scan(seeds, paths, np.arange(net.node_count, dtype=np.int64))
    return Phi(params=best, seed_node=node)


def expected_loss(
    phi: Phi, samples: PosteriorSample | Sequence[Phi], paths: PathTable
) -> float:
    """Mean loss from the sampled points to phi."""
    phis = _phis(samples)
    params = np.array([p.params for p in phis], dtype=float)
    seeds = np.array([p.seed_node for p in phis], dtype=np.int64)
    hops = paths.hops[phi.seed_node, seeds]
    if (hops == UNREACHABLE).any():
        raise UnreachablePairError("a sampled seed does not reach the estimate")
    cont = np.linalg.norm(params - np.asarray(phi.params), axis=1).mean()
    return float(cont + hops.mean())


def distance_marginal(
    samples: PosteriorSample | Sequence[Phi], reference: int, paths: PathTable
) -> DistanceMarginal:
    """Bin posterior seed-node mass by hop distance from the reference node."""
    phis = _phis(samples)
    if not phis:
        raise ValueError("empty posterior sample")
    seeds = np.array([p.seed_node for p in phis], dtype=np.int64)
    dists = paths.hops[reference, seeds]
    if (dists == UNREACHABLE).any():
        raise UnreachablePairError("a sampled seed is unreachable from the reference")
    size = paths.rho_max + 1
    masses = np.bincount(dists, minlength=size) / len(seeds)
    row = paths.hops[reference]
    node_counts = np.bincount(row[row != UNREACHABLE], minlength=size)
    masses.flags.writeable = False
    node_counts.flags.writeable = False
    return DistanceMarginal(masses=masses, node_counts=node_counts)
