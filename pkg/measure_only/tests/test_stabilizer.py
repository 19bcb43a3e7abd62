import numpy as np
import pytest
from sklearn.utils import check_random_state

from measure_only.circuit import sample_gates, gate_operator
from measure_only.pauli import PauliString, zz_gate, x_gate
from measure_only.stabilizer import (
    StabilizerState, new_all_plus, new_all_zero, measure, entropy)


def test_product_states():
    for state in [new_all_plus(8), new_all_zero(8)]:
        assert state.rank() == 8
        assert state.entropy(range(1, 5)) == 0
        assert state.entropy([2, 7]) == 0
    assert new_all_zero(3).to_labels() == ['ZII', 'IZI', 'IIZ']


def test_bell_pair():
    state = new_all_plus(2)
    measure(state, zz_gate(2, 1))
    assert state.to_labels() == ['ZZ', 'XX']
    assert entropy(state, [1]) == 1
    assert entropy(state, [1, 2]) == 0


def test_commuting_measurement_is_noop():
    state = new_all_plus(4)
    before = state.to_labels()
    state.measure(x_gate(4, 3))
    assert state.to_labels() == before


def test_case_two_uses_old_pivot():
    # both X1 and X2 anticommute with Z1Z2: X2 must become X1 X2
    state = new_all_plus(3)
    state.measure(zz_gate(3, 1))
    assert state.to_labels() == ['ZZI', 'XXI', 'IIX']
    state.audit()


def test_fixtures():
    L = 8
    ghz = StabilizerState.ghz(L)
    for size in range(1, L):
        assert ghz.entropy(range(1, size + 1)) == 1
    cluster = StabilizerState.cluster(L)
    assert cluster.entropy(range(1, L // 2 + 1)) == 1
    spt = StabilizerState.spt(L)
    assert spt.entropy(range(1, L // 2 + 1)) == 2
    with pytest.raises(ValueError):
        StabilizerState.spt(2)


def test_entropy_edge_cases():
    state = StabilizerState.ghz(6)
    assert state.entropy([]) == 0
    assert state.entropy([1, 1, 2]) == state.entropy([1, 2])
    with pytest.raises(ValueError):
        state.entropy([7])


def test_invalid_measurements():
    state = new_all_plus(4)
    with pytest.raises(ValueError):
        state.measure(PauliString.identity(4))
    with pytest.raises(ValueError):
        state.measure(zz_gate(5, 1))


def test_from_generators_validation():
    with pytest.raises(ValueError):
        StabilizerState.from_labels(['XI', 'ZI'])
    with pytest.raises(ValueError):
        StabilizerState.from_labels(['ZZ', 'ZZ'])
    with pytest.raises(ValueError):
        StabilizerState.from_labels(['ZZ', 'XX', 'IX'])


@pytest.mark.parametrize('L', [8, 13, 70])
def test_random_measurements_keep_invariants(L):
    rng = check_random_state(L)
    state = StabilizerState.all_plus(L)
    state.debug = True
    kinds, sites = sample_gates(rng, L, np.array([0.3, 0.3, 0.4]), 4 * L)
    for kind, site in zip(kinds, sites):
        state.measure(gate_operator(L, kind, site))
    assert state.rank() == L
    for size in [1, L // 3, L // 2, L - 1]:
        S = state.entropy(range(1, size + 1))
        assert 0 <= S <= min(size, L - size)
        # pure state: S_A = S_complement
        assert S == state.entropy(range(size + 1, L + 1))


@pytest.mark.parametrize('seed', range(3))
def test_measure_is_idempotent(seed):
    L = 10
    rng = check_random_state(seed)
    state = StabilizerState.all_plus(L)
    kinds, sites = sample_gates(rng, L, np.full(3, 1 / 3), 3 * L)
    for kind, site in zip(kinds, sites):
        op = gate_operator(L, kind, site)
        once = state.measure(op).copy()
        state.measure(op)
        np.testing.assert_array_equal(state.x, once.x)
        np.testing.assert_array_equal(state.z, once.z)


def test_copy_is_independent():
    state = new_all_plus(4)
    other = state.copy()
    other.measure(zz_gate(4, 1))
    assert state.entropy([1]) == 0
    assert other.entropy([1]) == 1
