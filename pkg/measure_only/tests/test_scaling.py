import numpy as np
import pandas as pd
import pytest

from measure_only.datasets.synthetic import (
    get_synt_collapse, get_synt_growth, get_synt_power_law)
from measure_only.scaling import (
    ScalingDataset, collapse_error, find_collapse, bootstrap_collapse,
    crossing_point, fit_log_growth, fit_power_law, fit_area_law)

data = get_synt_collapse(p_c=0.5, nu=4 / 3, sizes=(32, 64, 128))


def test_collapse_error_linear_points():
    line = ScalingDataset([0., 1., 2.], [1, 1, 1], [0., 1., 2.])
    assert collapse_error(line, 0., 1.) == 0
    kink = ScalingDataset([0., 1., 2.], [1, 1, 1], [0., 1., 0.])
    np.testing.assert_allclose(collapse_error(kink, 0., 1.), 1.)


def test_collapse_error_affine():
    eps = collapse_error(data, 0.48, 1.2)
    shifted = ScalingDataset(data.P, data.L, data.y + 3.)
    scaled = ScalingDataset(data.P, data.L, 2. * data.y)
    np.testing.assert_allclose(collapse_error(shifted, 0.48, 1.2), eps)
    np.testing.assert_allclose(collapse_error(scaled, 0.48, 1.2), 4 * eps)


def test_collapse_error_coincident_points():
    flat = ScalingDataset([0.5, 0.5, 0.5, 0.6], [8, 8, 8, 8],
                          [1., 2., 3., 4.])
    _, diag = collapse_error(flat, 0.5, 1., return_diagnostics=True)
    assert diag['n_skipped'] == 1
    with pytest.raises(ValueError):
        collapse_error(data, 0.5, 0.)
    with pytest.raises(ValueError):
        ScalingDataset([0., 1.], [8, 8], [0., 1.])
    with pytest.raises(ValueError):
        ScalingDataset([0., 1., 2.], [8, 8, 8], [0., 1., 2.],
                       [0., -1., 0.])


def test_collapse_error_mutual_info_reference():
    P = np.tile([0.4, 0.5, 0.6], 2)
    L = np.repeat([8, 16], 3)
    y = np.array([1., 2., 4., 0., 2., 6.])
    ref = np.repeat([1.5, 1.], 3)  # each sweep interpolated at 0.45
    transformed = ScalingDataset(P, L, np.abs(y - ref))
    np.testing.assert_allclose(
        collapse_error(ScalingDataset(P, L, y), 0.45, 1.3, mutual_info=True),
        collapse_error(transformed, 0.45, 1.3))


def test_collapse_error_weighted():
    noisy = get_synt_collapse(noise=0.01, seed=1)
    eps = collapse_error(noisy, 0.5, 4 / 3, weighted=True)
    assert eps >= 0


def test_find_collapse_recovers_synthetic():
    result = find_collapse(data, p_c_range=(0.4, 0.6), nu_range=(0.8, 2.5),
                           n_grid=41)
    np.testing.assert_allclose(result.p_c, 0.5, atol=0.01)
    np.testing.assert_allclose(result.nu, 4 / 3, atol=0.1)
    assert not result.at_boundary
    assert len(result.trace) == 3
    assert result.epsilon_min >= 0
    assert result.to_frame().shape == (41 * 41, 3)
    assert result.to_dict()['n_refinements'] == 2


def test_find_collapse_boundary_flag():
    result = find_collapse(data, p_c_range=(0.55, 0.6), n_grid=11,
                           n_refine=0)
    assert result.on_boundary['p_c']
    with pytest.raises(ValueError):
        find_collapse(data, p_c_range=(0.6, 0.5))
    with pytest.raises(ValueError):
        find_collapse(data.subset([32]))


def test_bootstrap_collapse():
    rng = np.random.RandomState(0)
    samples = [y + 0.05 * rng.randn(20) for y in data.y]
    result = find_collapse(data, n_grid=11, n_refine=0)
    p_c_ci, nu_ci, estimates = bootstrap_collapse(
        data, samples, n_bootstrap=4, seed=0, result=result, n_grid=11,
        n_refine=0)
    assert estimates.shape == (4, 2)
    assert p_c_ci[0] <= p_c_ci[1]
    assert nu_ci[0] <= nu_ci[1]
    assert result.p_c_ci == p_c_ci


def test_crossing_point():
    P = np.tile([0.4, 0.45, 0.55, 0.6], 2)
    L = np.repeat([16, 32], 4)
    y = np.concatenate([P[:4], 2 * P[:4] - 0.5])
    (small, large, cross), = crossing_point(ScalingDataset(P, L, y))
    assert (small, large) == (16, 32)
    np.testing.assert_allclose(cross, 0.5)


def test_from_frame():
    df = pd.DataFrame(dict(
        observable=['s_topo'] * 3 + ['half_chain'] * 3 + ['s_topo'],
        L=[8, 8, 16, 8, 8, 16, 16], p_x=[0.1, 0.2, 0.1] * 2 + [0.2],
        t=[-1] * 6 + [4], mean=np.arange(7.), stderr=np.zeros(7)))
    dataset = ScalingDataset.from_frame(df, 'p_x', observable='s_topo')
    assert len(dataset) == 3
    np.testing.assert_equal(dataset.sizes, [8, 16])


def test_fit_log_growth():
    t, S = get_synt_growth(a_t=0.27, b=0.78)
    fit = fit_log_growth(t, S)
    np.testing.assert_allclose(fit['a_t'], 0.27, atol=1e-6)
    np.testing.assert_allclose(fit['b'], 0.78, atol=1e-6)
    assert fit.residual_norm >= 0
    fit = fit_log_growth(t, S, window=(2, 10))
    assert fit.n_points == 9
    with pytest.raises(ValueError):
        fit_log_growth(t, S, window=(2, 4))
    with pytest.raises(ValueError):
        fit_log_growth(np.full(6, 3.), np.arange(6.))


def test_fit_log_growth_pooled_sizes():
    t = np.tile(np.arange(1., 9.), 2)
    L = np.repeat([16., 32.], 8)
    _, S = get_synt_growth(a_t=0.14, b=0.45, t=t, L=L)
    fit = fit_log_growth(t, S, L=L)
    np.testing.assert_allclose(fit['a_t'], 0.14, atol=1e-6)
    np.testing.assert_allclose(fit['b'], 0.45, atol=1e-6)


def test_fit_power_law():
    d, I = get_synt_power_law(K=0.7)
    fit = fit_power_law(d, I)
    np.testing.assert_allclose(fit['K'], 0.7, atol=1e-6)
    np.testing.assert_allclose(fit['amplitude'], 1., atol=1e-6)
    I[:3] = 0.
    fit = fit_power_law(d, I)
    assert fit.diagnostics['n_excluded'] == 3
    np.testing.assert_allclose(fit['K'], 0.7, atol=1e-6)
    with pytest.raises(ValueError):
        fit_power_law([1., 2., 3.], [1., 0.5, 0.3])
    with pytest.raises(ValueError):
        fit_power_law([0.5, 2., 3., 4.], [1., 0.5, 0.3, 0.2])


def test_fit_area_law():
    sizes = np.arange(8, 49, 8)
    fit = fit_area_law(sizes, np.full(6, 1.5), np.full(6, 0.01))
    np.testing.assert_allclose(fit['slope'], 0., atol=1e-12)
    np.testing.assert_allclose(fit['intercept'], 1.5)
    fit = fit_area_law(sizes, 0.5 * sizes + 1, np.zeros(6))
    np.testing.assert_allclose(fit['slope'], 0.5)
    assert fit.stderr['slope'] >= 0
    with pytest.raises(ValueError):
        fit_area_law([8, 16], [1., 1.])
