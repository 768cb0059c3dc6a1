import numpy as np
import pytest

from rclab.exact import Config, RCParams, connection_probability, event_probability
from rclab.lattice import from_vertices, make_box
from rclab.mc import (
    McEstimate,
    SpinConfig,
    combine_estimates,
    default_burn_in,
    estimate_connection,
    estimate_edge_open,
    estimate_theta,
    fit_decay,
    heat_bath_sweep,
    make_rng,
    swendsen_wang_sweep,
)

N_SWEEPS = 40_000


def single_edge():
    return from_vertices(1, [(0,), (1,)])


def test_single_edge_stationary_both_samplers():
    region = single_edge()
    params = RCParams(p=0.5, q=2.0)
    exact = 1.0 / 3.0
    for sampler, seed in (("heatbath", 101), ("sw", 102)):
        est = estimate_edge_open(region, params, 0, N_SWEEPS, seed=seed, sampler=sampler)
        assert abs(est.mean - exact) <= 4 * est.stderr, (sampler, est)


def test_connection_estimate_matches_exact_on_box():
    region = make_box(2, 1)
    params = RCParams(p=0.5, q=2.0)
    exact = connection_probability(region, params, (0, 0), (1, 1))
    sw = estimate_connection(region, params, (0, 0), (1, 1), N_SWEEPS, seed=7, sampler="sw")
    hb = estimate_connection(region, params, (0, 0), (1, 1), N_SWEEPS, seed=8, sampler="heatbath")
    assert abs(sw.mean - exact) <= 4 * sw.stderr
    assert abs(hb.mean - exact) <= 4 * hb.stderr
    # the two samplers also agree with each other
    combined = (sw.stderr**2 + hb.stderr**2) ** 0.5
    assert abs(sw.mean - hb.mean) <= 4 * combined


def test_trivial_estimates():
    region = make_box(2, 1)
    est = estimate_connection(
        region, RCParams(p=0.5, q=2.0), (0, 0), (0, 0), 34_000, seed=1
    )
    assert est.mean == 1.0 and est.stderr == 0.0
    theta = estimate_theta(2, 2.0, 1.0, 1, 34_000, seed=2)
    assert theta.mean == 1.0 and theta.stderr == 0.0


def test_q1_edge_frequency_is_p():
    region = make_box(2, 1)
    for p in (0.3, 0.7):
        est = estimate_edge_open(
            region, RCParams(p=p, q=1.0), 3, N_SWEEPS, seed=21, sampler="heatbath"
        )
        assert abs(est.mean - p) <= 4 * est.stderr


def test_determinism_bit_identical():
    region = make_box(2, 1)
    params = RCParams(p=0.5, q=2.0)
    a = estimate_connection(region, params, (0, 0), (1, 1), 34_000, seed=5)
    b = estimate_connection(region, params, (0, 0), (1, 1), 34_000, seed=5)
    assert a == b
    f1 = fit_decay(1, 2.0, 0.5, 6, [1, 2, 3], 34_000, seed=6)
    f2 = fit_decay(1, 2.0, 0.5, 6, [1, 2, 3], 34_000, seed=6)
    assert f1 == f2
    c = estimate_connection(region, params, (0, 0), (1, 1), 34_000, seed=9)
    assert c != a


def test_sweep_functions_are_valid_updates():
    region = make_box(2, 1)
    params = RCParams(p=0.5, q=2.0)
    rng = make_rng(3)
    config = Config.all_closed(region.n_edges)
    config = heat_bath_sweep(region, params, config, rng)
    assert len(config.bits) == region.n_edges

    spins = SpinConfig.constant(region.n_vertices, 2)
    new_spins, bonds = swendsen_wang_sweep(region, params, spins, rng)
    # bonds only between equal spins of the previous state (all equal here),
    # and the new coloring is constant on bond clusters
    from rclab.exact import cluster_stats

    stats = cluster_stats(region, bonds)
    for e, (i, j) in enumerate(region.edges):
        if bonds.bits[e]:
            assert stats.labels[i] == stats.labels[j]
            assert new_spins.labels[i] == new_spins.labels[j]
    labels_by_cluster = {}
    for v in range(region.n_vertices):
        labels_by_cluster.setdefault(stats.labels[v], set()).add(int(new_spins.labels[v]))
    assert all(len(colors) == 1 for colors in labels_by_cluster.values())


def test_heat_bath_p_zero_absorbing():
    region = single_edge()
    rng = make_rng(0)
    config = Config.all_closed(1)
    for _ in range(5):
        config = heat_bath_sweep(region, RCParams(p=0.0, q=2.0), config, rng)
        assert config.bits == (0,)


def test_sw_rejects_bad_q():
    region = single_edge()
    with pytest.raises(ValueError):
        swendsen_wang_sweep(region, RCParams(p=0.5, q=1.5), SpinConfig.constant(2, 2), make_rng(0))
    with pytest.raises(ValueError):
        estimate_connection(region, RCParams(p=0.5, q=1.5), (0,), (1,), 34_000, seed=1, sampler="sw")
    with pytest.raises(ValueError):
        SpinConfig(labels=np.array([0, 2]), q=2)
    with pytest.raises(ValueError):
        estimate_connection(region, RCParams(p=0.5, q=2.0), (0,), (1,), 34_000, seed=1, sampler="bogus")


def test_auto_sampler_routing():
    region = single_edge()
    # q=1.5 routes to heat-bath; the run must succeed and match the exact value
    params = RCParams(p=0.5, q=1.5)
    est = estimate_edge_open(region, params, 0, N_SWEEPS, seed=31)
    exact = event_probability(region, params, lambda c: c.bits[0] == 1)
    assert abs(est.mean - exact) <= 4 * est.stderr


def test_burn_in_validation():
    region = single_edge()
    params = RCParams(p=0.5, q=2.0)
    assert default_burn_in(50_000) == 5000
    assert default_burn_in(2000) == 1000
    with pytest.raises(ValueError):
        estimate_connection(region, params, (0,), (1,), 900, seed=1)
    with pytest.raises(ValueError):
        estimate_connection(region, params, (0,), (1,), 1010, seed=1)


def test_fit_decay_d1_rate():
    fit = fit_decay(1, 2.0, 0.5, 8, [1, 2, 3, 4, 5, 6], 100_000, seed=5)
    assert fit.censored == ()
    assert fit.rate is not None and fit.rate_stderr > 0
    assert abs(fit.rate - np.log(3.0)) <= 3 * fit.rate_stderr
    assert fit.r_squared > 0.99
    assert [pt.distance for pt in fit.points] == [1, 2, 3, 4, 5, 6]


def test_fit_decay_censored_path():
    fit = fit_decay(1, 2.0, 0.0, 4, [1, 2, 3], 34_000, seed=4)
    assert fit.rate is None and fit.rate_stderr is None and fit.r_squared is None
    assert fit.censored == (1, 2, 3)
    assert all(pt.estimate == 0.0 for pt in fit.points)


def test_fit_decay_validation():
    with pytest.raises(ValueError):
        fit_decay(1, 2.0, 0.5, 4, [], 34_000, seed=1)
    with pytest.raises(ValueError):
        fit_decay(1, 2.0, 0.5, 4, [1, 5], 34_000, seed=1)
    with pytest.raises(ValueError):
        fit_decay(1, 2.0, 0.5, 4, [1, 1], 34_000, seed=1)
    with pytest.raises(ValueError):
        fit_decay(1, 2.0, 0.5, 4, [1, 2], 34_000, seed=1, ptilde_lower=0.4)


def test_estimate_theta_small_box_matches_exact():
    from rclab.events import boundary_connection_event

    region = make_box(2, 1)
    params = RCParams(p=0.5, q=2.0)
    event = boundary_connection_event(region)
    exact = event_probability(region, params, event.predicate)
    est = estimate_theta(2, 2.0, 0.5, 1, N_SWEEPS, seed=13)
    assert abs(est.mean - exact) <= 4 * est.stderr


def test_combine_estimates():
    a = McEstimate(mean=0.4, stderr=0.01, n_sweeps=1000, seed=2)
    b = McEstimate(mean=0.5, stderr=0.02, n_sweeps=1000, seed=1)
    pooled = combine_estimates([a, b])
    w_a, w_b = 1 / 0.01**2, 1 / 0.02**2
    assert pooled.mean == pytest.approx((w_a * 0.4 + w_b * 0.5) / (w_a + w_b))
    assert pooled.stderr == pytest.approx((w_a + w_b) ** -0.5)
    assert pooled.seed == 1 and pooled.n_sweeps == 2000
    assert combine_estimates([b, a]) == pooled
    with pytest.raises(ValueError):
        combine_estimates([])
    with pytest.raises(ValueError):
        combine_estimates([McEstimate(mean=1.0, stderr=0.0, n_sweeps=10, seed=0)])
