#!/usr/bin/env python3
"""Scan the boundary two-point sum over box families and bracket the
alternate critical point.

Emits a CSV of phi values over a p-grid for each box radius and a JSON file
with the bisection brackets (d=2 box families and the d=1 ladder, whose
forests evaluate exactly at any radius).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from rclab.exact import RCParams
from rclab.lattice import candidate_sets, make_box, region_radius
from rclab.sharpness import bracket_ptilde, decay_upper_bound, phi, theta_lower_bound


@dataclass
class ScanConfig:
    q: float = 2.0
    d2_max_radius: int = 1
    d1_max_radius: int = 20
    p_step: float = 0.05
    tol: float = 1e-4
    out_dir: Path = Path("artifacts")


def run(config: ScanConfig) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    grid = [round(config.p_step * i, 10) for i in range(int(1.0 / config.p_step))]

    csv_path = config.out_dir / "phi_scan.csv"
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("S_descriptor", "p", "q", "phi", "n_boundary_edges"))
        for d, max_r in ((1, 4), (2, config.d2_max_radius)):
            for k in range(max_r + 1):
                S = make_box(d, k)
                for p in grid:
                    result = phi(S, RCParams(p=p, q=config.q))
                    writer.writerow(
                        (f"d{d}-box:{k}", repr(p), repr(config.q), repr(result.value), len(result.terms))
                    )
    print(f"phi scan -> {csv_path}")

    brackets = {}
    d2_family = candidate_sets(2, config.d2_max_radius)
    for label, d, family in (
        ("d2-singleton", 2, [make_box(2, 0)]),
        (f"d2-boxes-0..{config.d2_max_radius}", 2, d2_family),
        (f"d1-boxes-0..{config.d1_max_radius}", 1, candidate_sets(1, config.d1_max_radius)),
    ):
        estimate = bracket_ptilde(d, config.q, family, tol=config.tol)
        brackets[label] = {
            "lower": estimate.lower,
            "upper": estimate.upper,
            "witness_radius": region_radius(estimate.witness),
            "family": estimate.family,
        }
        print(f"{label}: lower={estimate.lower:.6f} (witness radius {region_radius(estimate.witness)})")

    lower = brackets[f"d2-boxes-0..{config.d2_max_radius}"]["lower"]
    surrogates = {
        "percolation_lower_bound_at_p": {
            repr(p): theta_lower_bound(p, bracket_ptilde(2, config.q, d2_family, tol=config.tol))
            for p in (0.6, 0.8, 1.0)
            if p > lower
        },
        "decay_bound_at_quarter": [
            {
                "z": [k, 0],
                "bound": decay_upper_bound(make_box(2, 1), RCParams(p=0.25, q=config.q), (k, 0)).bound,
            }
            for k in range(1, 9)
        ],
    }
    json_path = config.out_dir / "sharpness_brackets.json"
    json_path.write_text(
        json.dumps({"q": config.q, "brackets": brackets, "surrogates": surrogates},
                   sort_keys=True, indent=2) + "\n"
    )
    print(f"brackets -> {json_path}")
    return 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=float, default=ScanConfig.q)
    parser.add_argument("--out-dir", type=Path, default=ScanConfig.out_dir)
    args = parser.parse_args()
    return run(ScanConfig(q=args.q, out_dir=args.out_dir))


if __name__ == "__main__":
    sys.exit(main())
