import os

import numpy as np
import pandas as pd
import pytest

from measure_only import experiments
from measure_only.experiments import (
    Constraint, resolve_constraint, parse_grid, parse_spec, ExperimentSpec,
    PRESETS, SCALES, COLUMNS, get_preset, run_experiment, read_results,
    _atomic_write)


@pytest.mark.parametrize('constraint, sweep, value, expected', [
    ("p_x = p_zz", "p_zxz", 0.508, (0.246, 0.246, 0.508)),
    ("p_x = p_zz", "p_zxz", 0., (0.5, 0.5, 0.)),
    ("p_x = 3 p_zz", "p_zxz", 0.6, (0.3, 0.1, 0.6)),
    ("p_zz = 1/3 p_x", "p_zxz", 0.6, (0.3, 0.1, 0.6)),
    ("p_zxz = 0", "p_x", 0.3, (0.3, 0.7, 0.)),
    ("p_zz = p_zxz", "p_x", 1., (1., 0., 0.)),
])
def test_resolve_constraint(constraint, sweep, value, expected):
    triple = resolve_constraint(constraint, sweep, value)
    np.testing.assert_allclose(triple, expected, atol=1e-12)
    np.testing.assert_allclose(sum(triple), 1.)


def test_resolve_constraint_errors():
    with pytest.raises(ValueError):
        resolve_constraint("p_x = p_zz", "p_zxz", 1.2)
    with pytest.raises(ValueError):
        resolve_constraint("p_zz = 0.8", "p_zxz", 0.5)
    with pytest.raises(ValueError):
        resolve_constraint("p_x = 3 p_zz", "p_x", 0.5)
    with pytest.raises(ValueError):
        Constraint.parse("p_x == p_y")
    with pytest.raises(ValueError):
        Constraint.parse("p_x = p_x")


def test_constraint_parse():
    c = Constraint.parse("p_zxz = 1/3 p_zz")
    assert (c.lhs, c.rhs) == ("p_zxz", "p_zz")
    np.testing.assert_allclose(c.ratio, 1 / 3)
    assert not c.is_fixed
    assert Constraint.parse("p_x = 0").is_fixed
    assert Constraint.parse("p_x = p_zz").ratio == 1.
    for text in ("p_x = 3*p_zz", "p_x = 3·p_zz", "p_x = 3 * p_zz"):
        c = Constraint.parse(text)
        assert (c.lhs, c.rhs, c.ratio) == ("p_x", "p_zz", 3.)


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0.1:0.3:0.1"), [0.1, 0.2, 0.3])
    np.testing.assert_allclose(parse_grid("1/3, 0.5"), [1 / 3, 0.5])
    assert len(parse_grid("0.35:0.65:0.01")) == 31
    with pytest.raises(ValueError):
        parse_grid("0:1:0")


def test_parse_spec():
    spec = parse_spec("""
# a boundary sweep
kind = Collapse
observable = s_topo   # topological entropy
sweep = p_zz
grid = 0.3:0.7:0.1
constraint = p_x = 0
sizes = 8, 16
n_samples = 10
window = 0:0.5
collapse = yes
""")
    assert spec.kind == "Collapse"
    assert spec.sizes == (8, 16)
    assert spec.collapse
    assert spec.window == (0., 0.5)
    value, triple = spec.points()[1]
    np.testing.assert_allclose(triple, (0., 0.4, 0.6))


@pytest.mark.parametrize('text', [
    "observable = s_topo",
    "kind = Sweep\ncolour = red",
    "kind = Sweep\nsweep = p_x\ngrid = 0.5, 0.4\nconstraint = p_zxz = 0",
    "kind = Sweep\nsweep = p_x\ngrid = 0.5\nconstraint = p_zxz = 0\n"
    "sizes = 12\nobservable = mi_probe",
    "kind = Sweep\np_x = 0.5\np_zz = 0.5\np_zxz = 0.5",
    "kind = Bogus\np_x = 1\np_zz = 0\np_zxz = 0",
])
def test_parse_spec_errors(text):
    with pytest.raises(ValueError):
        parse_spec(text)


@pytest.mark.parametrize('scale', sorted(SCALES))
@pytest.mark.parametrize('name', sorted(PRESETS))
def test_presets_build(name, scale):
    specs = get_preset(name, scale=scale, output="out/%s.csv" % name)
    assert len(specs) == len(PRESETS[name])
    outputs = {spec.output for spec in specs}
    assert len(outputs) == len(specs)
    for spec in specs:
        assert spec.points()


@pytest.mark.parametrize('scale', sorted(SCALES))
def test_initial_state_preset(scale):
    spec, = get_preset("initial_state", scale=scale)
    assert spec.sizes == (128,)
    (_, triple), = spec.points()
    np.testing.assert_allclose(triple, (1 / 3, 1 / 3, 1 / 3))


def test_unknown_preset():
    with pytest.raises(ValueError):
        get_preset("fig10")
    with pytest.raises(ValueError):
        get_preset("fig5a", scale="huge")


def test_sweep_with_collapse(tmp_path):
    path = str(tmp_path / "sweep.csv")
    spec = ExperimentSpec(
        "Collapse", observable="mi_probe", sweep="p_x", grid=[0.3, 0.5, 0.7],
        constraint="p_zxz = 0", sizes=(8, 16), n_samples=4,
        t_max_factor=2., t_measure_factor=1., seed=3, output=path)
    result = run_experiment(spec)
    frame = read_results(path)
    assert len(frame) == 6
    assert list(frame.columns) == list(result.frame.columns)
    assert (frame['observable'] == "mi_probe").all()
    assert 'collapse' in result.summary
    with open(path, 'rb') as f:
        csv_bytes = f.read()
    with open(path + '.result.txt', 'rb') as f:
        summary_bytes = f.read()
    assert b"collapse.p_c = " in summary_bytes
    run_experiment(spec, n_jobs=2)
    with open(path, 'rb') as f:
        assert f.read() == csv_bytes
    with open(path + '.result.txt', 'rb') as f:
        assert f.read() == summary_bytes


def test_growth():
    spec = ExperimentSpec(
        "Growth", sweep="p_zxz", grid=[0.508], constraint="p_x = p_zz",
        sizes=(8, 16), n_samples=5, t_max_factor=1., t_measure_factor=0.5)
    result = run_experiment(spec)
    frame = result.frame
    assert (frame['t'] > 0).sum() == 8 + 16
    fit = result.summary['p_zxz=0.508']['pooled']
    assert fit['model'] == "LogGrowth"
    assert fit['n_points'] == 4 + 8


def test_growth_pools_sizes_in_time_steps(monkeypatch):
    # S = a_t ln(t) + b in time steps t, identical for every size
    rows = [dict(kind="Growth", observable="half_chain", L=L,
                 sweep_value=0.5, t=t, mean=0.27 * np.log(t) + 0.78, stderr=0.)
            for L in (32, 64, 128) for t in range(1, 4 * L + 1)]
    frame = pd.DataFrame(rows, columns=COLUMNS)
    monkeypatch.setattr(experiments, "_ensembles",
                        lambda spec, n_jobs, **kwargs: (frame, []))
    spec = ExperimentSpec(
        "Growth", sweep="p_zxz", grid=[0.5], constraint="p_x = p_zz",
        sizes=(32, 64, 128))
    _, summary = experiments._run_growth(spec, 1, False)
    fits = summary["p_zxz=0.5"]
    assert fits["pooled"]["n_points"] == 16 + 32 + 64
    for fit in fits.values():
        np.testing.assert_allclose(fit["a_t"], 0.27, atol=1e-9)
        np.testing.assert_allclose(fit["b"], 0.78, atol=1e-9)


def test_distance_mi():
    spec = ExperimentSpec(
        "DistanceMI", sweep="p_zz", p_x=0., p_zz=1., p_zxz=0., sizes=(16,),
        distances=(2, 4, 6, 8), n_samples=3, t_max_factor=2.)
    result = run_experiment(spec)
    np.testing.assert_allclose(result.frame['mean'], 1.)
    fit = result.summary['p_zz=1.L=16']
    np.testing.assert_allclose(fit['K'], 0., atol=1e-12)
    np.testing.assert_allclose(fit['amplitude'], 1.)


def test_area_law():
    spec = ExperimentSpec(
        "AreaLaw", sweep="p_x", p_x=1., p_zz=0., p_zxz=0., sizes=(16,),
        subsystem_sizes=(2, 4, 6), n_samples=3, t_max_factor=1.)
    result = run_experiment(spec)
    fit = result.summary['p_x=1.L=16']
    np.testing.assert_allclose(fit['slope'], 0., atol=1e-12)
    np.testing.assert_allclose(fit['intercept'], 0., atol=1e-12)


def test_initial_state():
    spec = ExperimentSpec(
        "InitialState", sweep="p_zxz", p_x=0., p_zz=0., p_zxz=1.,
        sizes=(8,), n_samples=3, t_max_factor=2.)
    result = run_experiment(spec)
    assert set(result.frame['initial_state']) == {"plus", "zero"}
    summary = result.summary['p_zxz=1.L=8']
    np.testing.assert_allclose(summary['difference'],
                               summary['plus'] - summary['zero'])


def test_percolation(tmp_path):
    path = str(tmp_path / "perc.csv")
    spec = ExperimentSpec("Percolation", grid=[0.3, 0.5, 0.7],
                          sizes=(4, 6, 8), n_samples=10, output=path)
    result = run_experiment(spec)
    assert len(read_results(path)) == 9
    assert 'collapse' in result.summary
    assert set(result.frame['observable']) == {"spanning"}


def test_oracle_audit():
    spec = ExperimentSpec("OracleAudit", sizes=(4,), n_samples=2,
                          t_max_factor=4.)
    result = run_experiment(spec)
    assert result.summary['audit']['passed']
    assert len(result.frame) == 0
    with pytest.raises(ValueError):
        ExperimentSpec("OracleAudit", sizes=(12,))


def test_failed_write_leaves_nothing(tmp_path):
    path = str(tmp_path / "out.csv")

    def fail(f):
        f.write("partial")
        raise RuntimeError("disk full")

    with pytest.raises(RuntimeError):
        _atomic_write(path, fail)
    assert os.listdir(str(tmp_path)) == []
