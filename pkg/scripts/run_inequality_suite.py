#!/usr/bin/env python3
"""Run every inequality checker over its standard instance grid.

Writes one JSONL stream with all reports plus a per-checker summary table on
stdout. Strict checkers (FKG, Markov factorization, pivotal chain, tanh)
exit nonzero on any violation; the audited identities (conditional-difference
derivative, differential inequality, splitting bound) are report-only.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from rclab.events import (
    always_event,
    boundary_connection_event,
    connection_event,
    edge_open_event,
)
from rclab.exact import RCParams
from rclab.ineq import (
    check_derivative_identity,
    check_differential_inequality,
    check_fkg,
    check_markov_factorization,
    check_pivotal_lower_chain,
    check_tanh_bound,
    format_summary,
    simon_reports,
)
from rclab.lattice import from_vertices, make_box, make_rect
from rclab.sharpness import bracket_ptilde


@dataclass
class SuiteConfig:
    out: Path = Path("artifacts/inequality_reports.jsonl")
    p_values: tuple[float, ...] = (0.3, 0.5, 0.7)
    q_values: tuple[float, ...] = (1.0, 1.7, 2.0, 3.0)
    tanh_grid: int = 1000
    strict_names: tuple[str, ...] = (
        "fkg",
        "markov_factorization",
        "pivotal_chain_fkg_step",
        "pivotal_chain_identity",
        "tanh_bound",
    )
    reports: list = field(default_factory=list)


def small_regions():
    edge = from_vertices(1, [(0,), (1,)])
    path = from_vertices(1, [(0,), (1,), (2,)])
    square = from_vertices(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    return edge, path, square


def run(config: SuiteConfig) -> int:
    edge, path, square = small_regions()
    box = make_box(2, 1)

    for i in range(config.tanh_grid):
        config.reports.append(check_tanh_bound(0.999 * i / (config.tanh_grid - 1)))

    fkg_cases = [
        (edge, edge_open_event(0), always_event()),
        (path, connection_event(path, (0,), (2,)), edge_open_event(0)),
        (square, connection_event(square, (0, 0), (1, 1)), connection_event(square, (0, 1), (1, 0))),
    ]
    for q in config.q_values:
        for p in config.p_values:
            for region, a, b in fkg_cases:
                config.reports.append(check_fkg(region, RCParams(p=p, q=q), a, b))
    config.reports.append(
        check_fkg(
            box,
            RCParams(p=0.5, q=2.0),
            connection_event(box, (0, 0), (1, 1)),
            boundary_connection_event(box),
        )
    )

    s_path = from_vertices(1, [(-1,), (0,), (1,)])
    for p in config.p_values:
        for q in (1.0, 2.0):
            config.reports.append(
                check_markov_factorization(2, 1, RCParams(p=p, q=q), s_path, ((1,), (2,)))
            )
            config.reports.append(
                check_markov_factorization(1, 2, RCParams(p=p, q=q), make_box(2, 0), ((0, 0), (0, 1)))
            )

    for region, event in [
        (edge, edge_open_event(0)),
        (path, connection_event(path, (0,), (2,))),
        (square, connection_event(square, (0, 0), (1, 1))),
    ]:
        for q in (1.0, 2.0):
            for p in config.p_values:
                config.reports.extend(
                    check_pivotal_lower_chain(region, RCParams(p=p, q=q), event)
                )

    for region, event, p, q in [
        (edge, edge_open_event(0), 0.5, 2.0),
        (path, connection_event(path, (0,), (2,)), 0.4, 1.0),
        (square, connection_event(square, (0, 0), (1, 1)), 0.5, 2.0),
    ]:
        config.reports.append(check_derivative_identity(region, RCParams(p=p, q=q), event))

    bracket = bracket_ptilde(2, 2.0, [make_box(2, 0), make_box(2, 1)], tol=1e-4)
    grid = [RCParams(p=round(0.05 * i, 2), q=2.0) for i in range(1, 20)]
    config.reports.extend(
        check_differential_inequality(1, 2, grid, ptilde_lower=bracket.lower)
    )

    config.reports.extend(
        simon_reports(
            make_box(1, 3), make_box(1, 1), (3,),
            [RCParams(p=p, q=2.0) for p in (0.2, 0.4, 0.5, 0.6, 0.8)],
        )
    )
    config.reports.extend(
        simon_reports(
            make_rect((-1, -1), (2, 2)), make_box(2, 1), (2, 2),
            [RCParams(p=p, q=2.0) for p in (0.2, 0.4, 0.6, 0.8)],
        )
    )

    config.out.parent.mkdir(parents=True, exist_ok=True)
    with config.out.open("w") as handle:
        for report in config.reports:
            handle.write(json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
    print(format_summary(config.reports))
    print(f"\n{len(config.reports)} reports -> {config.out}")

    strict_violations = [
        r for r in config.reports if r.name in config.strict_names and not r.holds
    ]
    if strict_violations:
        print(f"{len(strict_violations)} strict violations", file=sys.stderr)
        return 1
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=SuiteConfig.out)
    args = parser.parse_args()
    return run(SuiteConfig(out=args.out))


if __name__ == "__main__":
    sys.exit(main())
