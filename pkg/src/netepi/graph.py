"""Undirected contact networks: generators, edge-list IO, shortest paths.

All public APIs use dense integer node ids 0..n-1. Networks are immutable
after construction and safe to share across simulation workers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as _csgraph_shortest_path

logger = logging.getLogger(__name__)

UNREACHABLE = -1


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class UnreachablePairError(RuntimeError):
    """A shortest-path lookup hit a pair in different components."""


@dataclass(frozen=True)
class Network:
    """Immutable undirected graph with sorted per-node adjacency.

    Invariants: symmetric adjacency, no self-loops, no duplicate edges,
    node ids dense in 0..node_count-1.
    """

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None  # original labels, loader only

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Network":
        if node_count < 1:
            raise ValueError("node_count must be >= 1")
        neighbor_sets: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u},{v}) out of range for n={node_count}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
        return cls(adjacency=adjacency, labels=tuple(labels) if labels else None)

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)
        deg.flags.writeable = False
        return deg

    @cached_property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    # CSR-style flat arrays for hot simulation loops.
    @cached_property
    def neighbor_flat(self) -> np.ndarray:
        flat = np.fromiter(
            (v for nbrs in self.adjacency for v in nbrs),
            dtype=np.int64,
            count=int(self.degrees.sum()),
        )
        flat.flags.writeable = False
        return flat

    @cached_property
    def neighbor_offsets(self) -> np.ndarray:
        offs = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=offs[1:])
        offs.flags.writeable = False
        return offs

    def _check_node(self, i: int) -> None:
        if not (0 <= i < self.node_count):
            raise ValueError(f"node id {i} out of range 0..{self.node_count - 1}")

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_node(i)
        return self.adjacency[i]

    def degree(self, i: int) -> int:
        self._check_node(i)
        return len(self.adjacency[i])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each undirected edge once, as (u, v) with u < v."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        seen = np.zeros(self.node_count, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.adjacency[u]:
                    if not seen[v]:
                        seen[v] = True
                        nxt.append(v)
            frontier = nxt
        return bool(seen.all())


@dataclass(frozen=True)
class PathTable:
    """All-pairs hop distances with UNREACHABLE sentinel for split pairs.

    rho_max is the largest finite entry (diameter of the widest component).
    """

    hops: np.ndarray  # (n, n) int32, UNREACHABLE where no path exists
    rho_max: int

    @property
    def node_count(self) -> int:
        return self.hops.shape[0]

    def distance(self, i: int, j: int) -> int:
        d = int(self.hops[i, j])
        if d == UNREACHABLE:
            raise UnreachablePairError(f"nodes {i} and {j} are in different components")
        return d


def generate_ba(n: int, m: int, rng: np.random.Generator) -> Network:
    """Preferential-attachment network: n nodes, m edges per new node.

    Starts from m isolated nodes; the first added node attaches to all of
    them (degree-weighted sampling is undefined at total degree zero), and
    every later node draws m distinct targets with probability proportional
    to current degree, rejecting duplicate draws. Yields exactly m*(n-m)
    edges and a connected graph.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n <= m:
        raise ValueError(f"need n > m, got n={n}, m={m}")
    edges: list[tuple[int, int]] = []
    # One entry per unit of degree: O(1) degree-weighted draws.
    pool: list[int] = []
    for new in range(m, n):
        if not pool:
            chosen: set[int] = set(range(m))
        else:
            chosen = set()
            while len(chosen) < m:
                chosen.add(pool[int(rng.integers(len(pool)))])
        for t in chosen:
            edges.append((new, t))
            pool.append(new)
            pool.append(t)
    return Network.from_edges(n, edges)


def generate_er(n: int, p: float, rng: np.random.Generator) -> Network:
    """Erdős–Rényi G(n, p): each dyad carries an independent Bernoulli(p) edge."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"edge probability must be in [0,1], got {p}")
    if n < 1:
        raise ValueError("n must be >= 1")
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(len(iu)) < p
    edges = zip(iu[mask].tolist(), ju[mask].tolist())
    return Network.from_edges(n, edges)


def generate_fixed_size(
    n: int, edge_count: int, m: int, rng: np.random.Generator
) -> Network:
    """Connected heterogeneous network with exactly `edge_count` edges.

    Grows a preferential-attachment backbone (m edges per node) and tops it
    up with uniformly random extra edges. Used to build stand-ins for
    empirical datasets with known node/edge counts.
    """
    base = m * (n - m)
    if edge_count < base or edge_count > n * (n - 1) // 2:
        raise ValueError(f"edge_count {edge_count} infeasible for n={n}, m={m}")
    net = generate_ba(n, m, rng)
    present = {(u, v) for u, v in net.edges()}
    while len(present) < edge_count:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        if e not in present:
            present.add(e)
    return Network.from_edges(n, sorted(present))


def load_edge_list(source: str | Path | IO[str] | Iterable[str]) -> Network:
    """Parse a whitespace-separated edge list into a Network.

    Integer node labels are compacted to dense ids 0..n-1 in order of first
    appearance; lines starting with '#' and blank lines are skipped.
    Self-loops and duplicate edges are dropped with a logged warning count.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return load_edge_list(fh)

    label_to_id: dict[int, int] = {}
    labels: list[str] = []
    edges: set[tuple[int, int]] = set()
    dropped_self_loops = 0
    dropped_duplicates = 0

    def intern(label: int) -> int:
        node = label_to_id.get(label)
        if node is None:
            node = len(labels)
            label_to_id[label] = node
            labels.append(str(label))
        return node

    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected two node labels, got {line!r}")
        try:
            lu, lv = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer node label in {line!r}") from None
        u, v = intern(lu), intern(lv)
        if u == v:
            dropped_self_loops += 1
            continue
        e = (min(u, v), max(u, v))
        if e in edges:
            dropped_duplicates += 1
            continue
        edges.add(e)

    if not labels:
        raise ValueError("edge list is empty: no nodes found")
    if dropped_self_loops or dropped_duplicates:
        logger.warning(
            "edge list: dropped %d self-loop(s) and %d duplicate edge(s)",
            dropped_self_loops,
            dropped_duplicates,
        )
    return Network.from_edges(len(labels), sorted(edges), labels=labels)


def write_edge_list(net: Network, path: str | Path, comments: Sequence[str] = ()) -> None:
    """Write one 'u v' line per edge; comments go first as '#' lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        for u, v in net.edges():
            fh.write(f"{u} {v}\n")


def all_pairs_shortest_paths(net: Network) -> PathTable:
    """BFS-exact hop counts between all node pairs.

    Unreachable pairs get the UNREACHABLE sentinel; downstream consumers
    raise rather than substitute a value when they hit one.
    """
    n = net.node_count
    if net.edge_count == 0:
        hops = np.full((n, n), UNREACHABLE, dtype=np.int32)
        np.fill_diagonal(hops, 0)
        hops.flags.writeable = False
        return PathTable(hops=hops, rho_max=0)
    rows = []
    cols = []
    for u, v in net.edges():
        rows.extend((u, v))
        cols.extend((v, u))
    adj = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    dist = _csgraph_shortest_path(adj, method="D", directed=False, unweighted=True)
    finite = np.isfinite(dist)
    hops = np.where(finite, dist, float(UNREACHABLE)).astype(np.int32)
    hops.flags.writeable = False
    rho_max = int(dist[finite].max())
    return PathTable(hops=hops, rho_max=rho_max)
