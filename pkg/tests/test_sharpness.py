import numpy as np
import pytest

import helpers
from rclab.exact import RCParams
from rclab.lattice import candidate_sets, edge_boundary, from_vertices, make_box, region_radius
from rclab.sharpness import (
    bracket_ptilde,
    decay_upper_bound,
    phi,
    theta_lower_bound,
)


def effective_p(p, q):
    return p / (p + q * (1.0 - p))


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 1.0])
def test_phi_singleton_is_2dp(d, p):
    S = make_box(d, 0)
    result = phi(S, RCParams(p=p, q=2.0))
    assert result.value == pytest.approx(2 * d * p, abs=1e-12)
    assert len(result.terms) == 2 * d
    for term in result.terms:
        assert term.mu == 1.0 and term.p_edge == p


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("p,q", [(0.5, 2.0), (0.3, 1.5), (0.8, 2.0)])
def test_phi_d1_closed_form(k, p, q):
    S = make_box(1, k)
    value = phi(S, RCParams(p=p, q=q)).value
    assert value == pytest.approx(2 * p * effective_p(p, q) ** k, abs=1e-10)


def test_phi_d1_verified_by_enumeration():
    # cross-check the tree fast path against raw enumeration for k <= 4
    for k in range(5):
        S = make_box(1, k)
        p, q = 0.6, 2.0
        mu = helpers.rc_event_probability(
            S, p, q, lambda bits: helpers.bits_connected(S, bits, (0,), (k,))
        )
        assert phi(S, RCParams(p=p, q=q)).value == pytest.approx(2 * p * mu, abs=1e-10)


def test_phi_d1_nesting_identity():
    p, q = 0.55, 2.0
    for k in range(4):
        a = phi(make_box(1, k), RCParams(p=p, q=q)).value
        b = phi(make_box(1, k + 1), RCParams(p=p, q=q)).value
        assert b == pytest.approx(a * effective_p(p, q), abs=1e-10)


def test_phi_d2_box1_matches_independent_oracle():
    S = make_box(2, 1)
    for p in (0.25, 0.5):
        result = phi(S, RCParams(p=p, q=2.0))
        boundary = edge_boundary(S).boundary_edges
        assert len(boundary) == 12
        oracle = 0.0
        mu_cache = {}
        for x, _ in boundary:
            if x not in mu_cache:
                mu_cache[x] = helpers.rc_event_probability(
                    S, p, 2.0, lambda bits, x=x: helpers.bits_connected(S, bits, (0, 0), x)
                )
            oracle += p * mu_cache[x]
        assert result.value == pytest.approx(oracle, abs=1e-10)


def test_phi_zero_at_p_zero_and_monotone():
    S = make_box(2, 1)
    assert phi(S, RCParams(p=0.0, q=2.0)).value == 0.0
    grid = np.linspace(0.0, 1.0, 17)
    values = [phi(S, RCParams(p=float(p), q=2.0)).value for p in grid]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_phi_requires_origin():
    S = from_vertices(2, [(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        phi(S, RCParams(p=0.5, q=2.0))


def test_phi_boundary_overrides():
    S = make_box(1, 0)
    base = phi(S, RCParams(p=0.5, q=2.0))
    scaled = phi(S, RCParams(p=0.5, q=2.0), boundary_p=[0.1, 0.2])
    assert scaled.value == pytest.approx(0.1 + 0.2, abs=1e-12)
    assert base.value == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        phi(S, RCParams(p=0.5, q=2.0), boundary_p=[0.1])


def test_bracket_singleton_family_d2():
    est = bracket_ptilde(2, 2.0, [make_box(2, 0)], tol=1e-4)
    assert est.lower == pytest.approx(0.25, abs=2e-4)
    assert est.upper == 1.0
    assert phi(est.witness, RCParams(p=est.lower, q=2.0)).value < 1.0
    assert est.transcript


def test_bracket_two_boxes_d2_strictly_larger():
    small = bracket_ptilde(2, 2.0, [make_box(2, 0)], tol=1e-4)
    both = bracket_ptilde(2, 2.0, candidate_sets(2, 1), tol=1e-4)
    assert both.lower > 0.2501
    assert both.lower > small.lower
    # a certified lower bracket can never exceed the known self-dual critical value
    assert both.lower <= 0.586 + 0.01
    assert region_radius(both.witness) == 1


def test_bracket_monotone_in_family():
    fam1 = [make_box(2, 0)]
    fam2 = candidate_sets(2, 1)
    lo1 = bracket_ptilde(2, 2.0, fam1, tol=1e-3).lower
    lo2 = bracket_ptilde(2, 2.0, fam2, tol=1e-3).lower
    assert lo2 >= lo1


def test_bracket_d1_big_family():
    est = bracket_ptilde(1, 2.0, candidate_sets(1, 20), tol=1e-3)
    assert est.lower >= 0.9
    # closed form: phi_p(box k) = 2p r^k with r = p/(2-p)
    r = effective_p(est.lower, 2.0)
    assert min(2 * est.lower * r**k for k in range(21)) < 1.0


def test_bracket_validation():
    with pytest.raises(ValueError):
        bracket_ptilde(2, 2.0, [], tol=1e-4)
    with pytest.raises(ValueError):
        bracket_ptilde(2, 2.0, [from_vertices(2, [(1, 1)])], tol=1e-4)
    with pytest.raises(ValueError):
        bracket_ptilde(2, 2.0, [make_box(2, 0)], tol=0.0)


def test_decay_upper_bound_examples():
    # phi = 4p = 0.5 at p = 0.125 for the singleton in d=2, L clamps to 1
    bound = decay_upper_bound(make_box(2, 0), RCParams(p=0.125, q=2.0), (10, 0))
    assert bound.phi_value == pytest.approx(0.5, abs=1e-12)
    assert bound.L == 1 and bound.exponent == 10
    assert bound.bound == pytest.approx(2.0**-10, abs=1e-12)

    # |z| < L: exponent 0, bound 1
    s2 = make_box(1, 2)
    small = decay_upper_bound(s2, RCParams(p=0.5, q=2.0), (1,))
    assert small.exponent == 0 and small.bound == 1.0

    # d=1, S of radius 2 at p=0.5: phi = 1/9, z=6 -> (1/9)^3
    b = decay_upper_bound(s2, RCParams(p=0.5, q=2.0), (6,))
    assert b.phi_value == pytest.approx(1.0 / 9.0, abs=1e-12)
    assert b.L == 2 and b.exponent == 3
    assert b.bound == pytest.approx((1.0 / 9.0) ** 3, abs=1e-14)

    with pytest.raises(ValueError):
        decay_upper_bound(make_box(2, 0), RCParams(p=0.5, q=2.0), (10, 0))


def test_decay_bound_dominates_finite_volume_probabilities():
    # in d=1 every finite-volume probability is exactly r^|z|
    p, q = 0.5, 2.0
    S = make_box(1, 2)
    r = effective_p(p, q)
    for z in (4, 6, 8, 12):
        b = decay_upper_bound(S, RCParams(p=p, q=q), (z,))
        for m in (z, z + 2, z + 5):
            from rclab.exact import connection_probability

            mu = connection_probability(make_box(1, m), RCParams(p=p, q=q), (0,), (z,))
            assert mu == pytest.approx(r**z, rel=1e-10)
            assert mu <= b.bound + 1e-12


def test_theta_lower_bound():
    est = bracket_ptilde(2, 2.0, [make_box(2, 0)], tol=1e-4)
    assert theta_lower_bound(1.0, est) == pytest.approx(1.0 - est.lower)
    assert theta_lower_bound(0.5, est) == pytest.approx((0.5 - est.lower) / 0.5, abs=2e-3)
    with pytest.raises(ValueError):
        theta_lower_bound(est.lower, est)
    eps = 1e-9
    assert theta_lower_bound(est.lower + eps, est) < 1e-6
