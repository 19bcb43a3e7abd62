import numpy as np
import pytest
from sklearn.utils import check_random_state

from measure_only.circuit import sample_gates, gate_operator
from measure_only.observables import (
    partition4, probe_sites, distance_sites, centered_subsystem, s_topo,
    mutual_info, mutual_info_vs_distance, half_chain_entropy, get_observable,
    TopologicalEntropy, ProbeMutualInfo, HalfChainEntropy)
from measure_only.pauli import zz_gate
from measure_only.stabilizer import StabilizerState


def test_partition4():
    regions = partition4(8)
    np.testing.assert_equal(regions['A'], [1, 2])
    np.testing.assert_equal(regions['B'], [3, 4])
    np.testing.assert_equal(regions['D'], [5, 6])
    np.testing.assert_equal(regions['C'], [7, 8])
    with pytest.raises(ValueError):
        partition4(10)


def test_region_helpers():
    assert probe_sites(16) == (2, 14)
    assert distance_sites(16, 4) == (6, 10)
    np.testing.assert_equal(centered_subsystem(16, 4), [7, 8, 9, 10])
    with pytest.raises(ValueError):
        probe_sites(12)
    with pytest.raises(ValueError):
        distance_sites(16, 3)
    with pytest.raises(ValueError):
        distance_sites(16, 18)
    with pytest.raises(ValueError):
        centered_subsystem(16, 3)


@pytest.mark.parametrize('L', [8, 12, 16])
def test_s_topo_fixtures(L):
    assert s_topo(StabilizerState.spt(L)) == 2
    assert s_topo(StabilizerState.all_plus(L)) == 0
    assert s_topo(StabilizerState.ghz(L)) == 0
    assert s_topo(StabilizerState.cluster(L)) == 0


def test_mutual_info():
    ghz = StabilizerState.ghz(8)
    assert mutual_info(ghz, [1], [7]) == 1
    assert mutual_info_vs_distance(ghz, 4) == 1
    assert mutual_info(StabilizerState.all_plus(8), [1], [7]) == 0
    with pytest.raises(ValueError):
        mutual_info(ghz, [1, 2], [2, 3])
    with pytest.raises(ValueError):
        mutual_info(ghz, [], [2])


def test_half_chain_entropy():
    assert half_chain_entropy(StabilizerState.cluster(8)) == 1
    assert half_chain_entropy(StabilizerState.ghz(8)) == 1
    with pytest.raises(ValueError):
        half_chain_entropy(StabilizerState.ghz(7))


def test_observable_classes_match_functions():
    L = 16
    for state in [StabilizerState.spt(L), StabilizerState.ghz(L),
                  StabilizerState.cluster(L)]:
        assert TopologicalEntropy().value(state) == s_topo(state)
        assert ProbeMutualInfo().value(state) == mutual_info(
            state, [2], [14])
        assert HalfChainEntropy().value(state) == half_chain_entropy(state)
        assert get_observable('mi_dist:6').value(state) == \
            mutual_info_vs_distance(state, 6)
        assert get_observable('sub:4').value(state) == state.entropy(
            [7, 8, 9, 10])


def test_get_observable():
    assert get_observable('s_topo').name == 's_topo'
    assert get_observable(' mi_dist:8 ').name == 'mi_dist:8'
    obs = get_observable('sub:4')
    assert get_observable(obs) is obs
    for bad in ['entropy', 'mi_dist:x', 'mi_dist', 'sub:']:
        with pytest.raises(ValueError):
            get_observable(bad)
    with pytest.raises(ValueError):
        get_observable('s_topo').check(10)


def test_mutual_info_vs_distance_bonded_centre():
    # Z3Z4 and Z4Z5 tie sites 3, 4, 5 into a GHZ block
    state = StabilizerState.all_plus(8)
    state.measure(zz_gate(8, 3)).measure(zz_gate(8, 4))
    assert mutual_info_vs_distance(state, 2) == 1
    assert mutual_info_vs_distance(state, 4) == 0


def _remix(state, rng, n_ops=200):
    x, z = state.x.copy(), state.z.copy()
    L = state.n_sites
    for _ in range(n_ops):
        i, j = rng.choice(L, 2, replace=False)
        x[i] ^= x[j]
        z[i] ^= z[j]
    order = rng.permutation(L)
    return StabilizerState(x[order], z[order], L)


@pytest.mark.parametrize('seed', range(4))
def test_observables_ignore_generator_presentation(seed):
    L = 16
    rng = check_random_state(seed)
    state = StabilizerState.all_plus(L)
    kinds, sites = sample_gates(rng, L, np.full(3, 1 / 3), 2 * L)
    for kind, site in zip(kinds, sites):
        state.measure(gate_operator(L, kind, site))
    for original in (state, StabilizerState.spt(L)):
        mixed = _remix(original, rng)
        mixed.audit()
        assert s_topo(mixed) == s_topo(original)
        assert half_chain_entropy(mixed) == half_chain_entropy(original)
        assert (mutual_info(mixed, [1, 2], [9, 10, 11]) ==
                mutual_info(original, [1, 2], [9, 10, 11]))
        assert (mutual_info_vs_distance(mixed, 6) ==
                mutual_info_vs_distance(original, 6))
