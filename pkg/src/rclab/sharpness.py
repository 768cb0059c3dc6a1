"""Boundary two-point sums, critical-point brackets, and decay bounds.

The central quantity is phi_p(S): p times the sum, over lattice edges {x, y}
leaving a finite set S containing the origin, of the probability inside S
that the origin connects to the inner endpoint x. Having phi_p(S) < 1 for
some S certifies exponential decay of connection probabilities at that p,
with rate controlled by phi and the radius of S; the supremum of such p over
all finite S is an alternate critical point, bracketed here by bisection
over a supplied family of candidate sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .exact import DEFAULT_ENUMERATION_CAP, RCParams, connectivity_table
from .lattice import Coord, Region, edge_boundary, region_radius, sup_norm


@dataclass(frozen=True)
class PhiTerm:
    """One boundary edge {x, y} with its inner connection probability."""

    edge: tuple[Coord, Coord]
    mu: float
    p_edge: float


@dataclass(frozen=True)
class PhiResult:
    p: float
    q: float
    set_S: Region
    terms: tuple[PhiTerm, ...]
    value: float


@dataclass(frozen=True)
class BisectionStep:
    p: float
    phi_min: float
    witness_index: int
    below_one: bool


@dataclass(frozen=True)
class CriticalEstimate:
    """Certified bracket for the alternate critical point over a set family."""

    lower: float
    upper: float
    witness: Region
    family: str
    q: float
    transcript: tuple[BisectionStep, ...]


@dataclass(frozen=True)
class DecayBound:
    """phi^floor(|z|/L): an upper bound for the connection probability to z."""

    bound: float
    phi_value: float
    L: int
    exponent: int


@dataclass(frozen=True)
class DecayPoint:
    distance: int
    estimate: float
    stderr: float


@dataclass(frozen=True)
class DecayFit:
    """Exponential fit of two-point estimates against distance."""

    p: float
    q: float
    points: tuple[DecayPoint, ...]
    rate: float | None
    rate_stderr: float | None
    r_squared: float | None
    censored: tuple[int, ...]


def phi(
    S: Region,
    params: RCParams,
    boundary_p: Sequence[float] | None = None,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> PhiResult:
    """Exact phi_p(S) with per-boundary-edge terms.

    The boundary is taken against the full lattice. Each term is weighted by
    the uniform p unless ``boundary_p`` supplies one probability per boundary
    edge (in the deterministic boundary order); overrides on the edges inside
    S enter through ``params.edge_p`` as usual.
    """
    origin = (0,) * S.dimension
    if origin not in S.vertex_index:
        raise ValueError("S must contain the origin")
    boundary = edge_boundary(S, None)
    edges = boundary.boundary_edges
    if boundary_p is not None and len(boundary_p) != len(edges):
        raise ValueError(
            f"boundary_p has length {len(boundary_p)}, expected {len(edges)}"
        )
    inner = sorted({x for x, _ in edges})
    table = connectivity_table(
        S, [(origin, (x,)) for x in inner], max_edges=max_edges, backend=backend
    )
    mu = dict(zip(inner, table.probabilities(params)))
    terms = []
    for i, (x, y) in enumerate(edges):
        p_edge = float(boundary_p[i]) if boundary_p is not None else params.p
        terms.append(PhiTerm(edge=(x, y), mu=mu[x], p_edge=p_edge))
    value = sum(t.p_edge * t.mu for t in terms)
    return PhiResult(p=params.p, q=params.q, set_S=S, terms=tuple(terms), value=value)


def _phi_family_min(
    family: Sequence[Region], p: float, q: float, max_edges: int, backend: str
) -> tuple[float, int]:
    best, best_idx = math.inf, -1
    for i, S in enumerate(family):
        value = phi(S, RCParams(p=p, q=q), max_edges=max_edges, backend=backend).value
        if value < best:
            best, best_idx = value, i
    return best, best_idx


def bracket_ptilde(
    d: int,
    q: float,
    family: Sequence[Region],
    tol: float = 1e-4,
    upper: float = 1.0,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> CriticalEstimate:
    """Bisection bracket for the alternate critical point over a family of sets.

    Returns the largest p (within tol) at which some member S of the family
    has phi_p(S) < 1. Because the family is only a subset of all finite sets
    containing 0, this is a certified lower bound; ``upper`` stays at 1.0
    unless the caller supplies external knowledge.
    """
    if not family:
        raise ValueError("the candidate family is empty")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for S in family:
        if (0,) * d not in S.vertex_index:
            raise ValueError("every candidate set must contain the origin")
    transcript: list[BisectionStep] = []

    def g(p: float) -> tuple[float, int]:
        value, idx = _phi_family_min(family, p, q, max_edges, backend)
        transcript.append(BisectionStep(p=p, phi_min=value, witness_index=idx, below_one=value < 1.0))
        return value, idx

    lo, hi = 0.0, upper
    hi_value, _ = g(hi)
    if hi_value < 1.0:
        # the whole range is subcritical for this family; the bracket degenerates
        lo = hi
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            value, _ = g(mid)
            if value < 1.0:
                lo = mid
            else:
                hi = mid
    _, witness_idx = _phi_family_min(family, lo, q, max_edges, backend)
    family_desc = f"{len(family)} candidate sets, radii up to {max(region_radius(S) for S in family)}"
    return CriticalEstimate(
        lower=lo,
        upper=upper,
        witness=family[witness_idx],
        family=family_desc,
        q=q,
        transcript=tuple(transcript),
    )


def decay_upper_bound(
    S: Region,
    params: RCParams,
    z: Coord,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
) -> DecayBound:
    """Connection-probability bound phi_p(S)^floor(|z|/L) from one subcritical set.

    L is the radius of the smallest origin-centered box containing S (at
    least 1). Only valid when phi_p(S) < 1; otherwise the bound is vacuous
    and this raises.
    """
    result = phi(S, params, max_edges=max_edges, backend=backend)
    if result.value >= 1.0:
        raise ValueError(f"phi = {result.value:.6f} >= 1: the decay bound is vacuous")
    L = max(1, region_radius(S))
    exponent = sup_norm(z) // L
    return DecayBound(
        bound=result.value ** exponent, phi_value=result.value, L=L, exponent=exponent
    )


def theta_lower_bound(p: float, estimate: CriticalEstimate) -> float:
    """(p - lower)/p: conservative percolation lower bound above the bracket."""
    if p <= estimate.lower:
        raise ValueError(f"p = {p} is not above the bracket lower bound {estimate.lower}")
    return (p - estimate.lower) / p
