"""Exact finite-volume random-cluster probabilities by exhaustive enumeration.

A configuration assigns open/closed to every edge of a region; its
unnormalized weight is q^{k} p^{o} (1-p)^{f} with k the cluster count, o the
open-edge count and f the closed-edge count. Everything here sums these
weights over all 2^|E| configurations, either directly or through integer
(o, k) histograms that are reusable across (p, q). Regions that are forests
skip enumeration entirely: on a forest the measure is a product over edges
with effective open probability p_e / (p_e + q(1-p_e)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError
from .lattice import Coord, Region, boundary_vertices, make_box
from .unionfind import UnionFind

DEFAULT_ENUMERATION_CAP = 26


@dataclass(frozen=True)
class RCParams:
    """Edge density p and cluster weight q, with optional per-edge overrides.

    ``edge_p``, when present, replaces p edge by edge (finite-range couplings
    enter this way); its length must match the edge count of the region it is
    used with.
    """

    p: float
    q: float = 1.0
    edge_p: tuple[float, ...] | None = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.q < 1.0:
            raise ValueError("q must be >= 1; smaller cluster weights are unsupported")
        if self.edge_p is not None:
            edge_p = tuple(float(v) for v in self.edge_p)
            if any(not 0.0 <= v <= 1.0 for v in edge_p):
                raise ValueError("per-edge probabilities must lie in [0, 1]")
            object.__setattr__(self, "edge_p", edge_p)

    @property
    def uniform(self) -> bool:
        return self.edge_p is None

    def edge_probabilities(self, region: Region) -> np.ndarray:
        if self.edge_p is None:
            return np.full(region.n_edges, self.p)
        if len(self.edge_p) != region.n_edges:
            raise ValueError(
                f"edge_p has length {len(self.edge_p)} but the region has "
                f"{region.n_edges} edges"
            )
        return np.asarray(self.edge_p, dtype=float)

    @classmethod
    def from_couplings(cls, region: Region, beta: float, q: float = 1.0) -> "RCParams":
        """Per-edge probabilities p_e = 1 - exp(-beta * J_e) from region couplings."""
        if region.couplings is None:
            raise ValueError("region carries no couplings")
        if beta <= 0:
            raise ValueError("beta must be positive")
        edge_p = tuple(1.0 - math.exp(-beta * j) for j in region.couplings)
        return cls(p=max(edge_p), q=q, edge_p=edge_p)


@dataclass(frozen=True)
class Config:
    """One edge configuration; bits[e] is 1 when edge e is open."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def all_closed(cls, n_edges: int) -> "Config":
        return cls(bits=(0,) * n_edges)

    @classmethod
    def all_open(cls, n_edges: int) -> "Config":
        return cls(bits=(1,) * n_edges)

    @property
    def n_open(self) -> int:
        return sum(self.bits)

    @property
    def n_closed(self) -> int:
        return len(self.bits) - self.n_open

    def is_open(self, e: int) -> bool:
        return self.bits[e] == 1

    def with_edge_open(self, e: int) -> "Config":
        if self.bits[e] == 1:
            return self
        bits = list(self.bits)
        bits[e] = 1
        return Config(tuple(bits))

    def with_edge_closed(self, e: int) -> "Config":
        if self.bits[e] == 0:
            return self
        bits = list(self.bits)
        bits[e] = 0
        return Config(tuple(bits))


@dataclass(frozen=True)
class ClusterStats:
    """Cluster count and per-vertex component labels (first-appearance order)."""

    k: int
    labels: tuple[int, ...]


@dataclass(frozen=True)
class GammaRecord:
    """One value of the random set of vertices not connected to the region boundary."""

    vertex_set: tuple[Coord, ...]
    probability: float


def _component_labels(region: Region, bits: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    uf = UnionFind(region.n_vertices)
    for e, (i, j) in enumerate(region.edges):
        if bits[e]:
            uf.union(i, j)
    labels = [0] * region.n_vertices
    seen: dict[int, int] = {}
    for v in range(region.n_vertices):
        r = uf.find(v)
        if r not in seen:
            seen[r] = len(seen)
        labels[v] = seen[r]
    return len(seen), tuple(labels)


def cluster_stats(region: Region, config: Config) -> ClusterStats:
    _check_config(region, config)
    k, labels = _component_labels(region, config.bits)
    return ClusterStats(k=k, labels=labels)


def connected_in_config(region: Region, config: Config, x: Coord, y: Coord) -> bool:
    """Whether x and y lie in the same open cluster."""
    i, j = region.index_of(x), region.index_of(y)
    if i == j:
        return True
    _, labels = _component_labels(region, config.bits)
    return labels[i] == labels[j]


def connected_to_any(region: Region, config: Config, x: Coord, targets: Iterable[Coord]) -> bool:
    i = region.index_of(x)
    t_idx = [region.index_of(t) for t in targets]
    if i in t_idx:
        return True
    _, labels = _component_labels(region, config.bits)
    return any(labels[i] == labels[t] for t in t_idx)


def connected_within(
    region: Region, config: Config, allowed: Iterable[Coord], x: Coord, y: Coord
) -> bool:
    """Whether x and y are joined by an open path staying inside ``allowed``."""
    allowed_idx = {region.index_of(v) for v in allowed}
    i, j = region.index_of(x), region.index_of(y)
    if i not in allowed_idx or j not in allowed_idx:
        return False
    if i == j:
        return True
    uf = UnionFind(region.n_vertices)
    for e, (a, b) in enumerate(region.edges):
        if config.bits[e] and a in allowed_idx and b in allowed_idx:
            uf.union(a, b)
    return uf.connected(i, j)


def gamma_vertices(region: Region, config: Config, boundary: Iterable[Coord] | None = None) -> tuple[Coord, ...]:
    """Vertices not connected to the boundary (default: the lattice boundary)."""
    bverts = tuple(boundary) if boundary is not None else boundary_vertices(region)
    b_idx = [region.index_of(b) for b in bverts]
    _, labels = _component_labels(region, config.bits)
    b_labels = {labels[b] for b in b_idx}
    return tuple(region.vertices[v] for v in range(region.n_vertices) if labels[v] not in b_labels)


def _check_config(region: Region, config: Config) -> None:
    if len(config.bits) != region.n_edges:
        raise ValueError(
            f"config has {len(config.bits)} bits but the region has {region.n_edges} edges"
        )


def _check_cap(region: Region, max_edges: int) -> None:
    if region.n_edges > max_edges:
        raise ResourceLimitError(
            f"{region.n_edges} edges exceeds the enumeration cap of {max_edges}"
        )


def weight(region: Region, config: Config, params: RCParams) -> float:
    """Unnormalized weight q^k * prod_e p_e^{w_e} (1-p_e)^{1-w_e}."""
    _check_config(region, config)
    k, _ = _component_labels(region, config.bits)
    pe = params.edge_probabilities(region)
    w = params.q ** k
    for e, bit in enumerate(config.bits):
        w *= pe[e] if bit else 1.0 - pe[e]
    return w


def scan_configs(
    region: Region,
    visit: Callable[[Config, int, int, tuple[int, ...]], None],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> None:
    """Call ``visit(config, n_open, k, labels)`` once per configuration.

    Configurations are visited in single-flip (reflected Gray) order, so each
    step toggles exactly one edge. Cluster counts are recomputed per
    configuration; this is the plain pure-Python path, adequate up to ~16-18
    edges. Connectivity queries on larger regions should go through
    ``connectivity_table`` which uses the compiled kernel.
    """
    _check_cap(region, max_edges)
    n_edges = region.n_edges
    bits = [0] * n_edges
    n_open = 0
    for idx in range(1 << n_edges):
        if idx:
            e = (idx & -idx).bit_length() - 1
            if bits[e]:
                bits[e] = 0
                n_open -= 1
            else:
                bits[e] = 1
                n_open += 1
        k, labels = _component_labels(region, bits)
        visit(Config(tuple(bits)), n_open, k, labels)


class EventStatistics:
    """Integer (open count, cluster count) histograms for a region and an event.

    The histograms do not depend on (p, q); probabilities, partition functions
    and p-derivatives for any parameters follow by weighting the cells. Cell
    weights are normalized through a log-space max shift so extreme p cannot
    underflow.
    """

    def __init__(self, n_edges: int, n_vertices: int, total: np.ndarray, event: np.ndarray | None):
        self.n_edges = n_edges
        self.n_vertices = n_vertices
        self.total = total
        self.event = event

    def _require_uniform(self, params: RCParams) -> None:
        if not params.uniform:
            raise ValueError("histogram statistics require a uniform p (no per-edge overrides)")

    def _cell_weights(self, params: RCParams) -> np.ndarray:
        """w[o, k] = q^k p^o (1-p)^(E-o), scaled by exp(-logZ) so sum(total*w) = 1."""
        self._require_uniform(params)
        p, q = params.p, params.q
        o = np.arange(self.n_edges + 1, dtype=float)[:, None]
        k = np.arange(self.n_vertices + 1, dtype=float)[None, :]
        if p in (0.0, 1.0):
            w = (p ** o) * ((1.0 - p) ** (self.n_edges - o)) * (q ** k)
            return w / float((self.total * w).sum())
        logw = o * math.log(p) + (self.n_edges - o) * math.log1p(-p) + k * math.log(q)
        mask = self.total > 0
        shift = float((np.log(self.total[mask]) + logw[mask]).max())
        logz = shift + math.log(float(np.exp(np.log(self.total[mask]) + logw[mask] - shift).sum()))
        return np.exp(logw - logz)

    def partition_function(self, params: RCParams) -> float:
        self._require_uniform(params)
        p, q = params.p, params.q
        o = np.arange(self.n_edges + 1, dtype=float)[:, None]
        k = np.arange(self.n_vertices + 1, dtype=float)[None, :]
        w = (p ** o) * ((1.0 - p) ** (self.n_edges - o)) * (q ** k)
        return float((self.total * w).sum())

    def probability(self, params: RCParams) -> float:
        if self.event is None:
            raise ValueError("no event histogram was collected")
        return float((self.event * self._cell_weights(params)).sum())

    def derivative(self, params: RCParams) -> float:
        """d/dp of the event probability via cov(1_A, open count) / (p(1-p))."""
        if self.event is None:
            raise ValueError("no event histogram was collected")
        if not 0.0 < params.p < 1.0:
            raise ValueError("the derivative requires 0 < p < 1")
        w = self._cell_weights(params)
        o = np.arange(self.n_edges + 1, dtype=float)[:, None]
        mu = float((self.event * w).sum())
        ev_open = float((self.event * o * w).sum())
        mean_open = float((self.total * o * w).sum())
        return (ev_open - mu * mean_open) / (params.p * (1.0 - params.p))


def event_statistics(
    region: Region,
    predicate: Callable[[Config], bool] | None = None,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> EventStatistics:
    total = np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64)
    event = None if predicate is None else np.zeros_like(total)

    def visit(config, n_open, k, labels):
        total[n_open, k] += 1
        if predicate is not None and predicate(config):
            event[n_open, k] += 1

    scan_configs(region, visit, max_edges=max_edges)
    return EventStatistics(region.n_edges, region.n_vertices, total, event)


def _weighted_sums(
    region: Region,
    params: RCParams,
    predicate: Callable[[Config], bool] | None,
    max_edges: int,
) -> tuple[float, float]:
    """(event weight sum, total weight sum) with per-edge probabilities."""
    pe = params.edge_probabilities(region)
    q = params.q
    open_w = [float(v) for v in pe]
    closed_w = [float(1.0 - v) for v in pe]
    sums = [0.0, 0.0]

    def visit(config, n_open, k, labels):
        w = q ** k
        for e, bit in enumerate(config.bits):
            w *= open_w[e] if bit else closed_w[e]
        sums[1] += w
        if predicate is not None and predicate(config):
            sums[0] += w

    scan_configs(region, visit, max_edges=max_edges)
    return sums[0], sums[1]


def partition_function(
    region: Region, params: RCParams, max_edges: int = DEFAULT_ENUMERATION_CAP
) -> float:
    if params.uniform:
        return event_statistics(region, None, max_edges=max_edges).partition_function(params)
    params.edge_probabilities(region)
    _, z = _weighted_sums(region, params, None, max_edges)
    return z


def event_probability(
    region: Region,
    params: RCParams,
    predicate: Callable[[Config], bool],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Probability of {w : predicate(w)} under the region's measure."""
    if params.uniform:
        return event_statistics(region, predicate, max_edges=max_edges).probability(params)
    params.edge_probabilities(region)
    w_event, z = _weighted_sums(region, params, predicate, max_edges)
    return w_event / z


def derivative_event_probability(
    region: Region,
    params: RCParams,
    predicate: Callable[[Config], bool],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Exact d/dp of event_probability at uniform p in (0, 1).

    Computed as sum_e cov(1_A, w_e) / (p(1-p)), which collapses to
    cov(1_A, open count) / (p(1-p)).
    """
    if not params.uniform:
        raise ValueError("the p-derivative is defined for uniform p only")
    if not 0.0 < params.p < 1.0:
        raise ValueError("the derivative requires 0 < p < 1")
    return event_statistics(region, predicate, max_edges=max_edges).derivative(params)


def pivotal_probability(
    region: Region,
    params: RCParams,
    e: int,
    predicate: Callable[[Config], bool],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Probability that edge e decides the event: closed-variant out, open-variant in."""
    if not 0 <= e < region.n_edges:
        raise ValueError(f"edge index {e} out of range")

    def pivotal(config: Config) -> bool:
        return (not predicate(config.with_edge_closed(e))) and predicate(config.with_edge_open(e))

    return event_probability(region, params, pivotal, max_edges=max_edges)


# ---------------------------------------------------------------------------
# Connectivity tables: batched exact connection probabilities


@dataclass(frozen=True)
class ConnQuery:
    source: int
    targets: tuple[int, ...]


def _effective_edge_probabilities(pe: np.ndarray, q: float) -> np.ndarray:
    # conditional odds of one extra open edge on a forest: p : q(1-p)
    return pe / (pe + q * (1.0 - pe))


def _forest_reach_probability(
    region: Region, r_edge: np.ndarray, source: int, targets: frozenset[int]
) -> float:
    """P(source connects to some target) on a forest with independent edges.

    Iterative leaf-to-root pass over the component of ``source`` computing the
    probability that a subtree misses every target.
    """
    if source in targets:
        return 1.0
    adj = region.adjacency
    order = [source]
    parent_edge: dict[int, tuple[int, int]] = {source: (-1, -1)}
    for v in order:
        for nbr, e in adj[v]:
            if nbr not in parent_edge:
                parent_edge[nbr] = (v, e)
                order.append(nbr)
    miss = {}
    for v in reversed(order):
        if v in targets:
            miss[v] = 0.0
            continue
        m = 1.0
        for nbr, e in adj[v]:
            if parent_edge.get(nbr, (None, None))[0] == v:
                r = r_edge[e]
                m *= (1.0 - r) + r * miss[nbr]
        miss[v] = m
    return 1.0 - miss[source]


class ConnectivityTable:
    """Exact connection probabilities for a batch of queries on one region.

    For forests the probabilities come from the product form directly. For
    other regions one enumeration pass (compiled when available) produces
    (o, k) histograms per query; the scan is then reusable for any uniform
    (p, q). Per-edge overrides on non-forests fall back to a direct weighted
    enumeration per call.
    """

    def __init__(self, region: Region, queries: Sequence[ConnQuery], backend: str, workers: int):
        self.region = region
        self.queries = tuple(queries)
        self._forest = region.is_forest
        if not self._forest:
            self._total, self._per_query = _scan_connectivity(region, self.queries, backend, workers)

    def probability(self, params: RCParams, index: int = 0) -> float:
        query = self.queries[index]
        if self._forest:
            pe = params.edge_probabilities(self.region)
            r = _effective_edge_probabilities(pe, params.q)
            return _forest_reach_probability(self.region, r, query.source, frozenset(query.targets))
        if not params.uniform:
            t_idx = set(query.targets)
            pred = lambda cfg: _hits(self.region, cfg, query.source, t_idx)
            return event_probability(self.region, params, pred, max_edges=self.region.n_edges)
        stats = EventStatistics(
            self.region.n_edges, self.region.n_vertices, self._total, self._per_query[index]
        )
        return stats.probability(params)

    def probabilities(self, params: RCParams) -> list[float]:
        return [self.probability(params, i) for i in range(len(self.queries))]


def _hits(region: Region, config: Config, source: int, targets: set[int]) -> bool:
    if source in targets:
        return True
    _, labels = _component_labels(region, config.bits)
    return any(labels[source] == labels[t] for t in targets)


def _scan_connectivity_python(region: Region, queries: Sequence[ConnQuery]):
    total = np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64)
    per_q = np.zeros((len(queries), region.n_edges + 1, region.n_vertices + 1), np.int64)

    def visit(config, n_open, k, labels):
        total[n_open, k] += 1
        for qi, query in enumerate(queries):
            ls = labels[query.source]
            if any(labels[t] == ls for t in query.targets):
                per_q[qi, n_open, k] += 1

    scan_configs(region, visit, max_edges=region.n_edges)
    return total, per_q


def _scan_connectivity(region: Region, queries: Sequence[ConnQuery], backend: str, workers: int):
    if backend == "python":
        return _scan_connectivity_python(region, queries)
    try:
        from . import _kernels
    except ImportError:
        if backend == "numba":
            raise
        return _scan_connectivity_python(region, queries)

    eu = np.array([e[0] for e in region.edges], np.int64)
    ev = np.array([e[1] for e in region.edges], np.int64)
    src = np.array([q.source for q in queries], np.int64)
    off = np.zeros(len(queries) + 1, np.int64)
    for i, q in enumerate(queries):
        off[i + 1] = off[i] + len(q.targets)
    flat = np.array([t for q in queries for t in q.targets], np.int64)
    n_configs = 1 << region.n_edges
    if workers <= 1 or n_configs < (1 << 16):
        return _kernels.scan_connectivity(region.n_vertices, eu, ev, src, off, flat, 0, n_configs)
    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, n_configs, workers + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(
            pool.map(
                lambda se: _kernels.scan_connectivity(
                    region.n_vertices, eu, ev, src, off, flat, int(se[0]), int(se[1])
                ),
                zip(bounds[:-1], bounds[1:]),
            )
        )
    total = sum(p[0] for p in parts)
    per_q = sum(p[1] for p in parts)
    return total, per_q


def connectivity_table(
    region: Region,
    queries: Sequence[tuple[Coord, Sequence[Coord]]],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
    workers: int = 1,
) -> ConnectivityTable:
    """Build a reusable table of exact connection probabilities.

    ``queries`` are (source vertex, target vertices) in region coordinates.
    Forests bypass the enumeration cap; all other regions must fit under
    ``max_edges``.
    """
    conv = [
        ConnQuery(region.index_of(x), tuple(region.index_of(t) for t in targets))
        for x, targets in queries
    ]
    for query in conv:
        if not query.targets:
            raise ValueError("every query needs at least one target")
    if not region.is_forest:
        _check_cap(region, max_edges)
    return ConnectivityTable(region, conv, backend=backend, workers=workers)


def connection_probability(
    region: Region,
    params: RCParams,
    x: Coord,
    y: Coord,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> float:
    """mu(x <-> y) on the region (free boundary)."""
    if region.index_of(x) == region.index_of(y):
        return 1.0
    table = connectivity_table(region, [(x, (y,))], max_edges=max_edges, backend=backend)
    return table.probability(params)


def connection_probability_to_set(
    region: Region,
    params: RCParams,
    x: Coord,
    targets: Sequence[Coord],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> float:
    """mu(x <-> A) for a nonempty vertex set A."""
    if not targets:
        raise ValueError("the target set is empty")
    idx = region.index_of(x)
    if any(region.index_of(t) == idx for t in targets):
        return 1.0
    table = connectivity_table(region, [(x, tuple(targets))], max_edges=max_edges, backend=backend)
    return table.probability(params)


def susceptibility(
    region: Region,
    params: RCParams,
    origin: Coord,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> float:
    """Sum over all vertices x of mu(origin <-> x)."""
    table = connectivity_table(
        region,
        [(origin, (v,)) for v in region.vertices],
        max_edges=max_edges,
        backend=backend,
    )
    return float(sum(table.probabilities(params)))


def gamma_distribution(
    n: int,
    d: int,
    params: RCParams,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> list[GammaRecord]:
    """Full law of the set of box vertices not connected to the box boundary.

    Works on the box of radius n in dimension d under free boundary
    conditions, reading "connected to the complement" as "connected to the
    boundary vertex layer inside the box"; boundary vertices therefore never
    belong to the set.
    """
    box = make_box(d, n)
    _check_cap(box, max_edges)
    b_idx = [box.index_of(v) for v in boundary_vertices(box)]
    pe = params.edge_probabilities(box)
    open_w = [float(v) for v in pe]
    closed_w = [float(1.0 - v) for v in pe]
    q = params.q
    masses: dict[tuple[int, ...], float] = {}
    z_total = [0.0]

    def visit(config, n_open, k, labels):
        w = q ** k
        for e, bit in enumerate(config.bits):
            w *= open_w[e] if bit else closed_w[e]
        b_labels = {labels[b] for b in b_idx}
        gamma = tuple(v for v in range(box.n_vertices) if labels[v] not in b_labels)
        masses[gamma] = masses.get(gamma, 0.0) + w
        z_total[0] += w

    scan_configs(box, visit, max_edges=max_edges)
    z = z_total[0]
    records = [
        GammaRecord(
            vertex_set=tuple(box.vertices[v] for v in key),
            probability=mass / z,
        )
        for key, mass in masses.items()
        if mass > 0.0
    ]
    records.sort(key=lambda r: (len(r.vertex_set), r.vertex_set))
    return records
