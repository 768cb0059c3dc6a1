"""Monte Carlo estimation beyond the enumeration cap.

Two samplers with the finite-volume measure as stationary law: bond/spin
cluster resampling for integer q >= 2 (measurements are taken on the bond
configuration, whose marginal is the target measure) and a single-edge
heat-bath chain for any real q >= 1. Randomness comes from a counter-based
generator (Philox) keyed by an explicit seed, consumed in a fixed pattern,
so every estimate is bit-reproducible from (seed, parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .exact import Config, RCParams
from .lattice import Coord, Region, boundary_vertices, make_box
from .sharpness import DecayFit, DecayPoint

MIN_BURNIN = 1000
BURNIN_FRACTION = 0.1
N_BATCHES = 32
_BLOCK = 256


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n_sweeps: int
    seed: int


@dataclass(eq=False)
class SpinConfig:
    """Per-vertex color in {0, ..., q-1} (integer q only)."""

    labels: np.ndarray
    q: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.q < 2:
            raise ValueError("spin configurations need integer q >= 2")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.q):
            raise ValueError("spin labels out of range")

    @classmethod
    def constant(cls, n_vertices: int, q: int) -> "SpinConfig":
        return cls(labels=np.zeros(n_vertices, np.int64), q=q)


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator from an integer seed or a SeedSequence."""
    return np.random.Generator(np.random.Philox(seed))


def _integer_q(params: RCParams) -> int:
    q = int(params.q)
    if q != params.q or q < 2:
        raise ValueError("cluster resampling needs integer q >= 2")
    return q


def _choose_sampler(params: RCParams, sampler: str) -> str:
    if sampler == "auto":
        return "sw" if params.q == int(params.q) and params.q >= 2 else "heatbath"
    if sampler not in ("sw", "heatbath"):
        raise ValueError(f"unknown sampler {sampler!r}")
    if sampler == "sw":
        _integer_q(params)
    return sampler


def _edge_arrays(region: Region):
    eu = np.array([e[0] for e in region.edges], np.int64)
    ev = np.array([e[1] for e in region.edges], np.int64)
    return eu, ev


def heat_bath_sweep(
    region: Region, params: RCParams, config: Config, rng: np.random.Generator
) -> Config:
    """One deterministic-order pass resampling every edge from its conditional law."""
    if len(config.bits) != region.n_edges:
        raise ValueError("config does not match the region")
    eu, ev = _edge_arrays(region)
    pe = params.edge_probabilities(region)
    bonds = np.array(config.bits, np.bool_)
    roots = np.empty(region.n_vertices, np.int64)
    _kernels.heat_bath_sweep(
        region.n_vertices, eu, ev, params.q, pe, bonds, rng.random(region.n_edges), roots
    )
    return Config(tuple(int(b) for b in bonds))


def swendsen_wang_sweep(
    region: Region, params: RCParams, spins: SpinConfig, rng: np.random.Generator
) -> tuple[SpinConfig, Config]:
    """One bond/spin resampling step; returns the new spins and the bond configuration."""
    q = _integer_q(params)
    if spins.labels.shape[0] != region.n_vertices:
        raise ValueError("spin configuration does not match the region")
    if spins.q != q:
        raise ValueError("spin configuration was built for a different q")
    eu, ev = _edge_arrays(region)
    pe = params.edge_probabilities(region)
    new_labels = spins.labels.copy()
    bonds = np.empty(region.n_edges, np.bool_)
    roots = np.empty(region.n_vertices, np.int64)
    _kernels.swendsen_wang_sweep(
        region.n_vertices,
        eu,
        ev,
        pe,
        new_labels,
        rng.random(region.n_edges),
        rng.integers(0, q, size=region.n_vertices, dtype=np.int64),
        bonds,
        roots,
    )
    return SpinConfig(labels=new_labels, q=q), Config(tuple(int(b) for b in bonds))


def _run_chain(
    region: Region,
    params: RCParams,
    queries: Sequence[tuple],
    n_sweeps: int,
    seed: int,
    sampler: str,
) -> np.ndarray:
    """Per-sweep indicators for ('conn', src, targets) and ('edge', e) queries."""
    kind = _choose_sampler(params, sampler)
    eu, ev = _edge_arrays(region)
    pe = params.edge_probabilities(region)
    n_v, n_e = region.n_vertices, region.n_edges
    rng = make_rng(seed)
    out = np.zeros((n_sweeps, len(queries)), np.bool_)
    roots = np.empty(n_v, np.int64)
    bonds = np.zeros(n_e, np.bool_)
    conv = []
    for query in queries:
        if query[0] == "conn":
            conv.append(("conn", int(query[1]), np.asarray(query[2], np.int64)))
        elif query[0] == "edge":
            conv.append(("edge", int(query[1]), None))
        else:
            raise ValueError(f"unknown query kind {query[0]!r}")
    if kind == "sw":
        q_int = _integer_q(params)
        spins = np.zeros(n_v, np.int64)
    done = 0
    while done < n_sweeps:
        block = min(_BLOCK, n_sweeps - done)
        urand = rng.random((block, n_e))
        if kind == "sw":
            colors = rng.integers(0, q_int, size=(block, n_v), dtype=np.int64)
        for t in range(block):
            if kind == "sw":
                _kernels.swendsen_wang_sweep(
                    n_v, eu, ev, pe, spins, urand[t], colors[t], bonds, roots
                )
            else:
                _kernels.heat_bath_sweep(n_v, eu, ev, params.q, pe, bonds, urand[t], roots)
            row = out[done + t]
            for qi, (knd, a, targets) in enumerate(conv):
                if knd == "conn":
                    row[qi] = bool(np.any(roots[targets] == roots[a]))
                else:
                    row[qi] = bool(bonds[a])
        done += block
    return out


def default_burn_in(n_sweeps: int) -> int:
    return max(MIN_BURNIN, n_sweeps // 10)


def _batch_means(series: np.ndarray, n_sweeps: int, burn_in: int | None) -> np.ndarray:
    burn = default_burn_in(n_sweeps) if burn_in is None else burn_in
    if n_sweeps <= burn:
        raise ValueError(f"n_sweeps={n_sweeps} does not exceed the burn-in of {burn}")
    m = series[burn:].astype(float)
    size = len(m) // N_BATCHES
    if size < 1:
        raise ValueError(f"need at least {N_BATCHES} measurement sweeps after burn-in")
    m = m[len(m) - N_BATCHES * size :]
    return m.reshape(N_BATCHES, size).mean(axis=1)


def _batch_estimate(series: np.ndarray, n_sweeps: int, seed: int, burn_in: int | None) -> McEstimate:
    batches = _batch_means(series, n_sweeps, burn_in)
    return McEstimate(
        mean=float(batches.mean()),
        stderr=float(batches.std(ddof=1) / math.sqrt(N_BATCHES)),
        n_sweeps=n_sweeps,
        seed=seed,
    )


def estimate_connection(
    region: Region,
    params: RCParams,
    x: Coord,
    y: Coord,
    n_sweeps: int,
    seed: int,
    sampler: str = "auto",
    burn_in: int | None = None,
) -> McEstimate:
    """Time average of the x <-> y indicator with batch-means error bars."""
    query = ("conn", region.index_of(x), [region.index_of(y)])
    series = _run_chain(region, params, [query], n_sweeps, seed, sampler)[:, 0]
    return _batch_estimate(series, n_sweeps, seed, burn_in)


def estimate_edge_open(
    region: Region,
    params: RCParams,
    e: int,
    n_sweeps: int,
    seed: int,
    sampler: str = "auto",
    burn_in: int | None = None,
) -> McEstimate:
    """Empirical open frequency of one edge."""
    if not 0 <= e < region.n_edges:
        raise ValueError(f"edge index {e} out of range")
    series = _run_chain(region, params, [("edge", e, None)], n_sweeps, seed, sampler)[:, 0]
    return _batch_estimate(series, n_sweeps, seed, burn_in)


def estimate_theta(
    d: int,
    q: float,
    p: float,
    n: int,
    n_sweeps: int,
    seed: int,
    sampler: str = "auto",
    burn_in: int | None = None,
) -> McEstimate:
    """Estimate of mu(0 <-> box boundary) on the box of radius n."""
    region = make_box(d, n)
    params = RCParams(p=p, q=q)
    origin = region.index_of((0,) * d)
    targets = [region.index_of(v) for v in boundary_vertices(region)]
    series = _run_chain(region, params, [("conn", origin, targets)], n_sweeps, seed, sampler)[:, 0]
    return _batch_estimate(series, n_sweeps, seed, burn_in)


def fit_decay(
    d: int,
    q: float,
    p: float,
    m: int,
    distances: Sequence[int],
    n_sweeps: int,
    seed: int,
    sampler: str = "auto",
    ptilde_lower: float | None = None,
    burn_in: int | None = None,
) -> DecayFit:
    """Fit log mu(0 <-> x) against |x| along an axis of the box of radius m.

    Each distance is estimated from its own chain, spawned deterministically
    from the seed, so the fitted points are statistically independent and the
    weighted-least-squares rate error is honest. Zero-count estimates are
    censored: they are reported as points but excluded from the fit, and no
    pseudo-counts are invented. When fewer than two points survive, the fit
    fields are None.
    """
    distances = [int(k) for k in distances]
    if not distances:
        raise ValueError("distances must be nonempty")
    if any(k < 1 or k > m for k in distances):
        raise ValueError("distances must lie in [1, m]")
    if len(set(distances)) != len(distances):
        raise ValueError("distances must be distinct")
    if ptilde_lower is not None and p >= ptilde_lower:
        raise ValueError(
            f"p={p} is not below the decay-regime bracket lower bound {ptilde_lower}"
        )
    region = make_box(d, m)
    params = RCParams(p=p, q=q)
    origin = region.index_of((0,) * d)
    children = np.random.SeedSequence(seed).spawn(len(distances))
    points = []
    for col, k in enumerate(distances):
        query = ("conn", origin, [region.index_of((k,) + (0,) * (d - 1))])
        series = _run_chain(region, params, [query], n_sweeps, children[col], sampler)[:, 0]
        batches = _batch_means(series, n_sweeps, burn_in)
        points.append(
            DecayPoint(
                distance=k,
                estimate=float(batches.mean()),
                stderr=float(batches.std(ddof=1) / math.sqrt(N_BATCHES)),
            )
        )
    points = tuple(points)
    censored = tuple(pt.distance for pt in points if pt.estimate == 0.0)
    fit_pts = [pt for pt in points if pt.estimate > 0.0]
    if len(fit_pts) < 2:
        return DecayFit(
            p=p, q=q, points=points, rate=None, rate_stderr=None,
            r_squared=None, censored=censored,
        )
    xs = np.array([pt.distance for pt in fit_pts], float)
    ys = np.log(np.array([pt.estimate for pt in fit_pts]))
    # delta method for log; tiny floor keeps zero-variance points finite-weighted
    sigma = np.array([max(pt.stderr / pt.estimate, 1e-8) for pt in fit_pts])
    w = 1.0 / sigma**2
    wsum = w.sum()
    xbar = float((w * xs).sum() / wsum)
    ybar = float((w * ys).sum() / wsum)
    sxx = float((w * (xs - xbar) ** 2).sum())
    slope = float((w * (xs - xbar) * (ys - ybar)).sum() / sxx)
    resid = ys - (ybar + slope * (xs - xbar))
    ss_res = float((w * resid**2).sum())
    ss_tot = float((w * (ys - ybar) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DecayFit(
        p=p,
        q=q,
        points=points,
        rate=-slope,
        rate_stderr=math.sqrt(1.0 / sxx),
        r_squared=r_squared,
        censored=censored,
    )


def combine_estimates(estimates: Sequence[McEstimate]) -> McEstimate:
    """Inverse-variance pooling of independent chains, in seed order."""
    if not estimates:
        raise ValueError("nothing to combine")
    ordered = sorted(estimates, key=lambda e: e.seed)
    if any(e.stderr <= 0 for e in ordered):
        raise ValueError("cannot pool estimates with zero stderr")
    w = np.array([1.0 / e.stderr**2 for e in ordered])
    means = np.array([e.mean for e in ordered])
    return McEstimate(
        mean=float((w * means).sum() / w.sum()),
        stderr=float(1.0 / math.sqrt(w.sum())),
        n_sweeps=sum(e.n_sweeps for e in ordered),
        seed=ordered[0].seed,
    )
