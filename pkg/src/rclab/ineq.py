"""Exact numerical checks of the correlation inequalities and identities.

Every checker returns structured reports instead of asserting, so claims
whose finite-volume status is unproven produce data rather than brittle
failures; the test suite decides which instances must hold. ``slack`` is
oriented so that ``holds`` is always ``slack >= -TOLERANCE``: for
inequalities it is the margin in the claimed direction, for equalities it is
minus the absolute difference.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .events import Event, boundary_connection_event
from .exact import (
    DEFAULT_ENUMERATION_CAP,
    Config,
    EventStatistics,
    RCParams,
    connected_within,
    connection_probability,
    connectivity_table,
    event_probability,
    event_statistics,
    gamma_vertices,
    pivotal_probability,
    scan_configs,
)
from .lattice import Coord, Region, boundary_vertices, edge_boundary, make_box

TOLERANCE = 1e-10


@dataclass(frozen=True)
class CheckReport:
    name: str
    instance: str
    lhs: float
    rhs: float
    holds: bool
    slack: float
    details: dict | None = None

    def to_json_dict(self) -> dict:
        return asdict(self)


def _inequality_report(name, instance, lhs, rhs, details=None) -> CheckReport:
    # claim: lhs <= rhs
    lhs, rhs = float(lhs), float(rhs)
    slack = rhs - lhs
    return CheckReport(
        name=name,
        instance=instance,
        lhs=lhs,
        rhs=rhs,
        holds=bool(slack >= -TOLERANCE),
        slack=slack,
        details=details,
    )


def _equality_report(name, instance, lhs, rhs, details=None) -> CheckReport:
    lhs, rhs = float(lhs), float(rhs)
    slack = -abs(rhs - lhs)
    return CheckReport(
        name=name,
        instance=instance,
        lhs=lhs,
        rhs=rhs,
        holds=bool(slack >= -TOLERANCE),
        slack=slack,
        details=details,
    )


def _describe(params: RCParams) -> str:
    tag = f"p={params.p:g} q={params.q:g}"
    if params.edge_p is not None:
        tag += " (per-edge overrides)"
    return tag


def check_tanh_bound(p: float) -> CheckReport:
    """tanh(-log(1-p)/2) <= p; the left side simplifies to p/(2-p)."""
    if not 0.0 <= p < 1.0:
        raise ValueError("p must lie in [0, 1)")
    lhs = math.tanh(-0.5 * math.log1p(-p))
    return _inequality_report("tanh_bound", f"p={p:g}", lhs, p)


def check_fkg(
    region: Region,
    params: RCParams,
    a: Event,
    b: Event,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> CheckReport:
    """Positive association: mu(A)mu(B) <= mu(A and B) for increasing A, B."""
    if not (a.increasing and b.increasing):
        raise ValueError("both events must be declared increasing")
    hists = {
        "a": np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64),
        "b": np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64),
        "ab": np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64),
        "total": np.zeros((region.n_edges + 1, region.n_vertices + 1), np.int64),
    }

    def visit(config, n_open, k, labels):
        hists["total"][n_open, k] += 1
        in_a, in_b = a(config), b(config)
        if in_a:
            hists["a"][n_open, k] += 1
        if in_b:
            hists["b"][n_open, k] += 1
        if in_a and in_b:
            hists["ab"][n_open, k] += 1

    if params.uniform:
        scan_configs(region, visit, max_edges=max_edges)
        stats = EventStatistics(region.n_edges, region.n_vertices, hists["total"], None)
        w = stats._cell_weights(params)
        mu_a = float((hists["a"] * w).sum())
        mu_b = float((hists["b"] * w).sum())
        mu_ab = float((hists["ab"] * w).sum())
    else:
        mu_a = event_probability(region, params, a, max_edges=max_edges)
        mu_b = event_probability(region, params, b, max_edges=max_edges)
        mu_ab = event_probability(
            region, params, lambda c: a(c) and b(c), max_edges=max_edges
        )
    instance = f"region={region.fingerprint()} A=[{a.description}] B=[{b.description}] {_describe(params)}"
    return _inequality_report("fkg", instance, mu_a * mu_b, mu_ab)


def _restrict_params(params: RCParams, ambient: Region, sub: Region) -> RCParams:
    """Per-edge overrides of the ambient, restricted to the edges of a subregion."""
    if params.edge_p is None:
        return params
    edge_p = tuple(
        params.edge_p[ambient.edge_between(sub.vertices[i], sub.vertices[j])]
        for i, j in sub.edges
    )
    return RCParams(p=params.p, q=params.q, edge_p=edge_p)


def simon_reports(
    ambient: Region,
    S: Region,
    z: Coord,
    params_list: Sequence[RCParams],
    origin: Coord | None = None,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
    workers: int = 1,
) -> list[CheckReport]:
    """Two-point splitting bound through the boundary of S, over a parameter grid.

    Checks mu(origin <-> z) <= sum over boundary edges {x, y} of S of
    p_xy * mu_S(origin <-> x) * mu(y <-> z), with the ambient region standing
    in for the full lattice. One enumeration pass serves the whole grid.
    """
    z = tuple(z)
    origin = tuple(origin) if origin is not None else (0,) * ambient.dimension
    for params in params_list:
        if params.q != 2.0:
            raise ValueError("the splitting bound is checked at q = 2 only")
    if origin not in S.vertex_index:
        raise ValueError("origin must lie in S")
    if z in S.vertex_index:
        raise ValueError("z must lie outside S")
    ambient.index_of(z)
    boundary = edge_boundary(S, ambient).boundary_edges
    ambient_queries = [(origin, (z,))] + [(y, (z,)) for _, y in boundary]
    ambient_table = connectivity_table(
        ambient, ambient_queries, max_edges=max_edges, backend=backend, workers=workers
    )
    inner = sorted({x for x, _ in boundary})
    s_table = connectivity_table(
        S, [(origin, (x,)) for x in inner], max_edges=max_edges, backend=backend
    )
    reports = []
    for params in params_list:
        s_params = _restrict_params(params, ambient, S)
        mu_inner = dict(zip(inner, s_table.probabilities(s_params)))
        lhs = ambient_table.probability(params, 0)
        rhs = 0.0
        terms = []
        for i, (x, y) in enumerate(boundary):
            if params.edge_p is not None:
                p_edge = params.edge_p[ambient.edge_between(x, y)]
            else:
                p_edge = params.p
            mu_yz = ambient_table.probability(params, 1 + i)
            rhs += p_edge * mu_inner[x] * mu_yz
            terms.append(
                {"edge": [list(x), list(y)], "p_edge": float(p_edge),
                 "mu_S": float(mu_inner[x]), "mu_ambient": float(mu_yz)}
            )
        instance = (
            f"ambient={ambient.fingerprint()} S={S.fingerprint()} "
            f"origin={origin} z={z} {_describe(params)}"
        )
        reports.append(_inequality_report("simon", instance, lhs, rhs, details={"terms": terms}))
    return reports


def check_simon(
    ambient: Region,
    S: Region,
    z: Coord,
    params: RCParams,
    origin: Coord | None = None,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
    backend: str = "auto",
    workers: int = 1,
) -> CheckReport:
    return simon_reports(
        ambient, S, z, [params], origin=origin, max_edges=max_edges,
        backend=backend, workers=workers,
    )[0]


def _edge_event_scan(region: Region, event: Event, max_edges: int):
    """One pass collecting, per edge, histograms of A with the edge forced.

    Returns (total, ev, open_e, ev_and_open, ev_forced_open, ev_forced_closed)
    where the last two count configurations whose edge-e modification lies in
    the event.
    """
    shape = (region.n_edges + 1, region.n_vertices + 1)
    total = np.zeros(shape, np.int64)
    ev = np.zeros(shape, np.int64)
    n_e = region.n_edges
    open_e = np.zeros((n_e,) + shape, np.int64)
    ev_and_open = np.zeros((n_e,) + shape, np.int64)
    forced_open = np.zeros((n_e,) + shape, np.int64)
    forced_closed = np.zeros((n_e,) + shape, np.int64)

    def visit(config, n_open, k, labels):
        total[n_open, k] += 1
        in_a = event(config)
        if in_a:
            ev[n_open, k] += 1
        for e in range(n_e):
            if config.bits[e]:
                open_e[e, n_open, k] += 1
                if in_a:
                    ev_and_open[e, n_open, k] += 1
                up = in_a
                down = event(config.with_edge_closed(e))
            else:
                up = event(config.with_edge_open(e))
                down = in_a
            if up:
                forced_open[e, n_open, k] += 1
            if down:
                forced_closed[e, n_open, k] += 1

    scan_configs(region, visit, max_edges=max_edges)
    return total, ev, open_e, ev_and_open, forced_open, forced_closed


def check_derivative_identity(
    region: Region,
    params: RCParams,
    event: Event,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> CheckReport:
    """Audit of the conditional-difference form of the p-derivative.

    lhs is the exact derivative (covariance form, cross-checked against a
    central finite difference); rhs is sum_e mu(A | w_e=1) - mu(A | w_e=0).
    The two agree when q = 1 but differ in general, so this reports rather
    than asserts; per-edge ratios of the two summands land in details.
    """
    if not event.increasing:
        raise ValueError("the event must be declared increasing")
    if not params.uniform or not 0.0 < params.p < 1.0:
        raise ValueError("requires uniform p strictly inside (0, 1)")
    total, ev, open_e, ev_and_open, _, _ = _edge_event_scan(region, event, max_edges)
    stats = EventStatistics(region.n_edges, region.n_vertices, total, ev)
    lhs = stats.derivative(params)
    h = min(1e-4, 0.5 * params.p, 0.5 * (1.0 - params.p))
    fd = (
        EventStatistics(region.n_edges, region.n_vertices, total, ev).probability(
            RCParams(p=params.p + h, q=params.q)
        )
        - stats.probability(RCParams(p=params.p - h, q=params.q))
    ) / (2.0 * h)
    w = stats._cell_weights(params)
    mu_a = float((ev * w).sum())
    denom = params.p * (1.0 - params.p)
    rhs = 0.0
    per_edge = []
    for e in range(region.n_edges):
        mu_open = float((open_e[e] * w).sum())
        if mu_open <= 0.0 or mu_open >= 1.0:
            raise ValueError(f"conditioning on a deterministic edge state (edge {e})")
        mu_a_open = float((ev_and_open[e] * w).sum())
        cond_diff = mu_a_open / mu_open - (mu_a - mu_a_open) / (1.0 - mu_open)
        cov_term = (mu_a_open - mu_a * mu_open) / denom
        rhs += cond_diff
        per_edge.append(
            {
                "edge": e,
                "conditional_difference": cond_diff,
                "covariance_term": cov_term,
                "ratio": cond_diff / cov_term if abs(cov_term) > 1e-14 else None,
            }
        )
    instance = f"region={region.fingerprint()} A=[{event.description}] {_describe(params)}"
    return _equality_report(
        "derivative_identity",
        instance,
        lhs,
        rhs,
        details={"finite_difference": float(fd), "per_edge": per_edge},
    )


def check_pivotal_lower_chain(
    region: Region,
    params: RCParams,
    event: Event,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> list[CheckReport]:
    """Edge-by-edge audit of the pivotality lower bound for increasing events.

    For each edge e, checks mu(A | w_e=1) - mu(A | w_e=0) >= mu(w^e in A) -
    mu(w_e in A) (a positive-association step) and that the right side equals
    the pivotality probability of e.
    """
    if not event.increasing:
        raise ValueError("the event must be declared increasing")
    if not params.uniform or not 0.0 < params.p < 1.0:
        raise ValueError("requires uniform p strictly inside (0, 1)")
    total, ev, open_e, ev_and_open, forced_open, forced_closed = _edge_event_scan(
        region, event, max_edges
    )
    stats = EventStatistics(region.n_edges, region.n_vertices, total, ev)
    w = stats._cell_weights(params)
    mu_a = float((ev * w).sum())
    reports = []
    for e in range(region.n_edges):
        mu_open = float((open_e[e] * w).sum())
        mu_a_open = float((ev_and_open[e] * w).sum())
        cond_diff = mu_a_open / mu_open - (mu_a - mu_a_open) / (1.0 - mu_open)
        delta = float((forced_open[e] * w).sum()) - float((forced_closed[e] * w).sum())
        piv = pivotal_probability(region, params, e, event, max_edges=max_edges)
        instance = (
            f"region={region.fingerprint()} A=[{event.description}] edge={e} {_describe(params)}"
        )
        reports.append(_inequality_report("pivotal_chain_fkg_step", instance, delta, cond_diff))
        reports.append(_equality_report("pivotal_chain_identity", instance, delta, piv))
    return reports


def check_differential_inequality(
    n: int,
    d: int,
    params_list: Sequence[RCParams],
    ptilde_lower: float | None = None,
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> list[CheckReport]:
    """d/dp of the box-boundary reach probability vs (1 - theta_n)/p.

    The inequality is claimed above the alternate critical point; instances
    are tagged with their position relative to the supplied bracket so the
    claimed regime can be told apart. One enumeration serves the whole grid.
    """
    box = make_box(d, n)
    event = boundary_connection_event(box)
    stats = event_statistics(box, event.predicate, max_edges=max_edges)
    reports = []
    for params in params_list:
        if not params.uniform or not 0.0 < params.p < 1.0:
            raise ValueError("requires uniform p strictly inside (0, 1)")
        theta = stats.probability(params)
        lhs = stats.derivative(params)
        rhs = (1.0 - theta) / params.p
        regime = "unknown"
        if ptilde_lower is not None:
            regime = "above_bracket" if params.p > ptilde_lower else "at_or_below_bracket"
        instance = f"d={d} n={n} {_describe(params)} regime={regime}"
        # claim: lhs >= rhs, so the margin is lhs - rhs
        lhs, rhs = float(lhs), float(rhs)
        slack = lhs - rhs
        reports.append(
            CheckReport(
                name="differential_inequality",
                instance=instance,
                lhs=lhs,
                rhs=rhs,
                holds=bool(slack >= -TOLERANCE),
                slack=slack,
                details={"theta": float(theta)},
            )
        )
    return reports


def check_markov_factorization(
    n: int,
    d: int,
    params: RCParams,
    S: Region,
    e: tuple[Coord, Coord],
    max_edges: int = DEFAULT_ENUMERATION_CAP,
) -> CheckReport:
    """Factorization across the closed boundary of the untouched interior set.

    With gamma the set of box vertices not connected to the box boundary and
    e = (x, y) a lattice edge leaving S, checks
    mu(origin <->_S x, gamma = S) = mu_S(origin <-> x) * mu(gamma = S).
    Instances with mu(gamma = S) = 0 are reported as degenerate.
    """
    box = make_box(d, n)
    origin = (0,) * d
    x, y = tuple(e[0]), tuple(e[1])
    s_vertices = set(S.vertices)
    if origin not in s_vertices:
        raise ValueError("S must contain the origin")
    if not s_vertices <= set(box.vertices):
        raise ValueError("S must lie inside the box")
    if x not in s_vertices or y in s_vertices:
        raise ValueError("e must have exactly its first endpoint in S")
    if sum(abs(a - b) for a, b in zip(x, y)) != 1:
        raise ValueError("e must be a nearest-neighbor lattice edge")
    box.index_of(y)
    bverts = boundary_vertices(box)

    def gamma_is_s(config: Config) -> bool:
        return set(gamma_vertices(box, config, bverts)) == s_vertices

    def lhs_event(config: Config) -> bool:
        return gamma_is_s(config) and connected_within(box, config, S.vertices, origin, x)

    mu_gamma = event_probability(box, params, gamma_is_s, max_edges=max_edges)
    lhs = event_probability(box, params, lhs_event, max_edges=max_edges)
    s_params = _restrict_params(params, box, S)
    mu_s = connection_probability(S, s_params, origin, x, max_edges=max_edges)
    rhs = mu_s * mu_gamma
    degenerate = mu_gamma == 0.0
    instance = (
        f"d={d} n={n} S={S.fingerprint()} x={x} y={y} {_describe(params)}"
        + (" degenerate" if degenerate else "")
    )
    return _equality_report(
        "markov_factorization",
        instance,
        lhs,
        rhs,
        details={"mu_gamma": float(mu_gamma), "mu_S": float(mu_s), "degenerate": degenerate},
    )


def summarize(reports: Sequence[CheckReport]) -> list[dict]:
    """Per-checker rollup: instance count, holds count, minimum slack."""
    order: list[str] = []
    grouped: dict[str, list[CheckReport]] = {}
    for r in reports:
        if r.name not in grouped:
            grouped[r.name] = []
            order.append(r.name)
        grouped[r.name].append(r)
    return [
        {
            "checker": name,
            "instances": len(grouped[name]),
            "holds": sum(1 for r in grouped[name] if r.holds),
            "min_slack": min(r.slack for r in grouped[name]),
        }
        for name in order
    ]


def format_summary(reports: Sequence[CheckReport]) -> str:
    rows = summarize(reports)
    lines = [f"{'checker':<28} {'instances':>9} {'holds':>6} {'min slack':>12}"]
    for row in rows:
        lines.append(
            f"{row['checker']:<28} {row['instances']:>9} {row['holds']:>6} "
            f"{row['min_slack']:>12.3e}"
        )
    return "\n".join(lines)
