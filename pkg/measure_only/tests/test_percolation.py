import numpy as np
import pytest

from measure_only.circuit import X_GATE, ZZ_GATE, ZXZ_GATE
from measure_only.experiments import bond_rate_audit
from measure_only.percolation import (
    BondLattice, ClusterLabeling, transcribe_circuit, percolate,
    flood_fill_labels, bond_rates, spanning_probability, spanning_dataset,
    estimate_percolation_exponents)


def _log(*gates):
    kinds, sites, times = zip(*gates)
    return np.array(kinds), np.array(sites), np.array(times)


def test_empty_log():
    empty = (np.array([], dtype=int),) * 3
    lattice = transcribe_circuit(empty, 8, n_steps=5)
    assert lattice.width == 4
    assert lattice.depth == 6
    assert lattice.n_bonds == (0, 5 * 4)
    labeling = ClusterLabeling(lattice)
    assert labeling.n_clusters == 4
    assert labeling.spanning


def test_cluster_evolution_example():
    # ZXZ on (3, 4, 5) at t=1, ZZ on (4, 5) at t=3, 8 qubits, 5 steps
    gates = _log((ZXZ_GATE, 4, 1), (ZZ_GATE, 4, 3))
    lattice = transcribe_circuit(gates, 8, parity="odd", n_steps=5)
    # sublattice columns: sites 1, 3, 5, 7
    assert lattice.horizontal[1, 1]
    assert lattice.horizontal.sum() == 1
    assert not lattice.vertical[2, 2]
    assert (~lattice.vertical).sum() == 1
    even = transcribe_circuit(gates, 8, parity="even", n_steps=5)
    assert even.horizontal.sum() == 0
    assert not even.vertical[2, 1]


def test_transcription_errors():
    with pytest.raises(ValueError):
        transcribe_circuit(_log((X_GATE, 2, 1)), 8)
    with pytest.raises(ValueError):
        transcribe_circuit(_log((ZZ_GATE, 2, 0)), 8)
    with pytest.raises(ValueError):
        transcribe_circuit(_log((ZZ_GATE, 2, 1)), 8, parity="red")


def test_all_zz_log():
    gates = _log(*[(ZZ_GATE, i, t) for t in (1, 2, 3) for i in range(1, 8)])
    lattice = transcribe_circuit(gates, 8)
    assert lattice.n_bonds == (0, 0)
    labeling = ClusterLabeling(lattice)
    assert labeling.n_clusters == lattice.n_nodes
    assert not labeling.spanning


def test_percolate_limits():
    empty = percolate(6, 5, 0., 0., seed=0)
    assert empty.n_clusters == 30
    assert not empty.spanning
    full = percolate(6, 5, 1., 1., seed=0)
    assert full.n_clusters == 1
    assert full.spanning
    np.testing.assert_equal(full.cluster_sizes(), [30])
    with pytest.raises(ValueError):
        percolate(6, 5, 1.5, 0.)


@pytest.mark.parametrize('seed', range(5))
@pytest.mark.parametrize('width', [1, 3, 16])
def test_union_find_matches_flood_fill(seed, width):
    lattice = BondLattice.from_random(width, 12, 0.5, 0.5, rng=seed)
    labeling = ClusterLabeling(lattice)
    np.testing.assert_equal(labeling.labels(), flood_fill_labels(lattice))
    assert labeling.cluster_sizes().sum() == lattice.n_nodes
    root = labeling.find(5)
    assert labeling.find(root) == root


def test_bond_rates():
    lattice = transcribe_circuit(
        _log((ZXZ_GATE, 2, 1), (ZZ_GATE, 1, 2), (ZXZ_GATE, 3, 3),
             (ZZ_GATE, 2, 4)), 8)
    rates = bond_rates(lattice)
    assert rates['n_updates'] == 4
    np.testing.assert_allclose(rates['horizontal'], 1 / 4)
    np.testing.assert_allclose(rates['vertical'], 0.5 * (1 - 2 / 4))


def test_bond_rates_from_circuit():
    rates = bond_rate_audit((0., 0.4, 0.6), n_sites=16, n_updates=20000,
                            seed=0)
    assert abs(rates['horizontal_z']) < 4
    assert abs(rates['vertical_z']) < 4
    np.testing.assert_allclose(rates['horizontal'], 0.3, atol=0.02)
    np.testing.assert_allclose(rates['vertical'], 0.3, atol=0.02)


def test_spanning_probability():
    low, _ = spanning_probability(16, 16, 0.3, 0.3, 100, seed=0)
    mid, err = spanning_probability(16, 16, 0.5, 0.5, 200, seed=0)
    high, _ = spanning_probability(16, 16, 0.7, 0.7, 100, seed=0)
    assert low < 0.2 < 0.8 < high
    assert 0.3 < mid < 0.7
    assert err > 0


def test_spanning_dataset_is_deterministic():
    a = spanning_dataset((4, 8), [0.3, 0.5, 0.7], 10, seed=1)
    b = spanning_dataset((4, 8), [0.3, 0.5, 0.7], 10, seed=1, n_jobs=2)
    np.testing.assert_equal(a.y, b.y)
    assert a.observable == "spanning"
    assert len(a) == 6


def test_exponents_boundary_flag():
    result = estimate_percolation_exponents(
        (8, 12, 16), [0.1, 0.15, 0.2], 20, seed=0, n_grid=11, n_refine=0)
    assert result.at_boundary
    with pytest.raises(ValueError):
        estimate_percolation_exponents((8, 16), [0.4, 0.5], 5)
