"""Brute-force statevector reference for small chains.

Basis states are indexed so that site 1 is the most significant bit, i.e.
the bit of site i in basis index b is ``(b >> (L - i)) & 1``.
"""
import logging

import numpy as np
from scipy.linalg import svdvals
from sklearn.utils import check_random_state

from measure_only.circuit import sample_gates, gate_operator
from measure_only.stabilizer import StabilizerState
from measure_only.utils import derive_seed

logger = logging.getLogger(__name__)

MAX_SITES = 10
ZERO_PROBABILITY = 1e-12
FIXTURES = ("ghz", "cluster", "spt", "plus", "zero")


def _check_size(n_sites):
    if not 1 <= n_sites <= MAX_SITES:
        raise ValueError("the exact oracle handles 1 <= L <= %i, got L=%s"
                         % (MAX_SITES, n_sites))


class DenseState():
    """Normalised state vector of L <= 10 qubits."""

    def __init__(self, amplitudes, n_sites):
        _check_size(n_sites)
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (2 ** n_sites,):
            raise ValueError("expected %i amplitudes, got %s"
                             % (2 ** n_sites, amplitudes.shape))
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1) > 1e-9:
            raise ValueError("state is not normalised, norm %.3e" % norm)
        self.amplitudes = amplitudes
        self.n_sites = int(n_sites)

    @classmethod
    def zero(cls, n_sites):
        _check_size(n_sites)
        amplitudes = np.zeros(2 ** n_sites, dtype=complex)
        amplitudes[0] = 1
        return cls(amplitudes, n_sites)

    @classmethod
    def plus(cls, n_sites):
        _check_size(n_sites)
        return cls(np.full(2 ** n_sites, 2 ** (-n_sites / 2), dtype=complex),
                   n_sites)

    @classmethod
    def from_stabilizer(cls, state, seed=0):
        """A joint +1 eigenvector of the generators of ``state``.

        A random vector is projected on the +1 eigenspace of every
        generator in turn; the result is the stabilizer state for one
        choice of generator signs.
        """
        _check_size(state.n_sites)
        rng = check_random_state(seed)
        dim = 2 ** state.n_sites
        psi = rng.randn(dim) + 1j * rng.randn(dim)
        for op in state.generators:
            psi = (psi + _apply(psi, op)) / 2
        norm = np.linalg.norm(psi)
        if norm < 1e-8:
            raise ValueError("generators have no joint +1 eigenvector")
        return cls(psi / norm, state.n_sites)

    def copy(self):
        return DenseState(self.amplitudes.copy(), self.n_sites)

    def __repr__(self):
        return "DenseState(L=%i)" % self.n_sites


def _basis_mask(bits):
    n_sites = bits.shape[0]
    return int(sum(1 << (n_sites - i - 1) for i in np.flatnonzero(bits)))


def _apply(psi, op):
    n_sites = op.n_sites
    mx = _basis_mask(op.x_bits)
    mz = _basis_mask(op.z_bits)
    n_y = bin(mx & mz).count('1')
    b = np.arange(2 ** n_sites)
    sign_bits = (b[:, None] >> np.arange(n_sites)) & 1
    parity = sign_bits[:, np.flatnonzero(
        (mz >> np.arange(n_sites)) & 1)].sum(axis=1) % 2
    out = np.empty_like(psi)
    out[b ^ mx] = (1j) ** n_y * (1 - 2 * parity) * psi
    return out


def apply_pauli(state, op):
    """op |psi>, with Y = i X Z on every site."""
    if op.n_sites != state.n_sites:
        raise ValueError("size mismatch: operator on %i sites, state on %i"
                         % (op.n_sites, state.n_sites))
    return DenseState(_apply(state.amplitudes, op), state.n_sites)


def expectation(state, op):
    """<psi| op |psi>, real for a Hermitian Pauli string."""
    psi = state.amplitudes
    return float(np.real(np.vdot(psi, apply_pauli(state, op).amplitudes)))


def project(state, op, outcome):
    """Projective measurement of ``op`` with a forced outcome.

    Parameters
    ----------
    state: DenseState
    op: PauliString
    outcome: int
        +1 or -1

    Returns
    -------
    state: DenseState or None
        post-measurement state, None when the outcome has zero probability
    probability: float
    """
    if outcome not in (1, -1):
        raise ValueError("outcome must be +1 or -1, got %s" % outcome)
    if op.n_sites != state.n_sites:
        raise ValueError("size mismatch: operator on %i sites, state on %i"
                         % (op.n_sites, state.n_sites))
    psi = state.amplitudes
    projected = (psi + outcome * _apply(psi, op)) / 2
    probability = float(np.real(np.vdot(projected, projected)))
    if probability < ZERO_PROBABILITY:
        return None, probability
    return (DenseState(projected / np.sqrt(probability), state.n_sites),
            probability)


def exact_entropy(state, sites):
    """Von Neumann entropy (bits) of the reduced state on ``sites``."""
    sites = np.unique(np.asarray(list(sites), dtype=np.int64))
    if sites.size == 0:
        return 0.
    n_sites = state.n_sites
    if sites.min() < 1 or sites.max() > n_sites:
        raise ValueError("sites out of range [1, %i]" % n_sites)
    rest = np.setdiff1d(np.arange(1, n_sites + 1), sites)
    psi = state.amplitudes.reshape((2,) * n_sites)
    psi = np.transpose(psi, np.concatenate([sites, rest]) - 1)
    s = svdvals(psi.reshape(2 ** sites.size, -1))
    lam = s ** 2
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log2(lam)))


def make_fixture(kind, n_sites):
    """Dense fixture state: "ghz", "cluster", "spt", "plus" or "zero"."""
    _check_size(n_sites)
    if kind == "plus":
        return DenseState.plus(n_sites)
    if kind == "zero":
        return DenseState.zero(n_sites)
    if kind == "ghz":
        amplitudes = np.zeros(2 ** n_sites, dtype=complex)
        amplitudes[0] = amplitudes[-1] = 1 / np.sqrt(2)
        return DenseState(amplitudes, n_sites)
    if kind == "cluster":
        # CZ on every bond of |+>^L
        b = np.arange(2 ** n_sites)
        bits = (b[:, None] >> np.arange(n_sites)) & 1
        n_bonds = (bits[:, :-1] & bits[:, 1:]).sum(axis=1)
        return DenseState((1 - 2 * (n_bonds % 2)) * 2 ** (-n_sites / 2),
                          n_sites)
    if kind == "spt":
        return DenseState.from_stabilizer(StabilizerState.spt(n_sites))
    raise ValueError("unknown fixture %r, expected one of %s"
                     % (kind, FIXTURES))


def contiguous_regions(n_sites):
    return [np.arange(i, j + 1) for i in range(1, n_sites + 1)
            for j in range(i, n_sites + 1)]


class AuditReport():
    """Outcome of ``audit_equivalence``.

    Attributes
    ----------
    n_circuits, n_updates, n_sites: int
    n_checks: int
        (branch, region) entropy comparisons performed
    max_deviation: float
        largest distance of an exact entropy from the nearest integer
    n_mismatches: int
        comparisons where the stabilizer and exact entropies differ
    n_branch_disagreements: int
        measurements whose two outcomes give different exact entropies
    mismatches: list
        (circuit, update, region) of the first mismatches
    """

    def __init__(self, n_circuits, n_updates, n_sites):
        self.n_circuits = n_circuits
        self.n_updates = n_updates
        self.n_sites = n_sites
        self.n_checks = 0
        self.max_deviation = 0.
        self.n_mismatches = 0
        self.n_branch_disagreements = 0
        self.mismatches = []

    @property
    def passed(self):
        return (self.n_mismatches == 0 and self.n_branch_disagreements == 0
                and self.max_deviation < 1e-9)

    def to_dict(self):
        return dict(n_circuits=self.n_circuits, n_updates=self.n_updates,
                    L=self.n_sites, n_checks=self.n_checks,
                    max_deviation=self.max_deviation,
                    n_mismatches=self.n_mismatches,
                    n_branch_disagreements=self.n_branch_disagreements,
                    passed=self.passed)

    def __repr__(self):
        return "AuditReport(%s, checks=%i, mismatches=%i)" % (
            "passed" if self.passed else "FAILED", self.n_checks,
            self.n_mismatches)


def audit_equivalence(n_circuits=100, n_sites=8, n_updates=64, seed=0,
                      probs=(1 / 3, 1 / 3, 1 / 3), verbose=False):
    """Compare the stabilizer engine with exact evolution on random circuits.

    At every update both measurement outcomes are projected exactly; the
    entropies of all contiguous regions in every possible branch are
    compared with the stabilizer entropies, and the walk continues on an
    outcome drawn with its Born probability.
    """
    probs = np.asarray(probs, dtype=float)
    regions = contiguous_regions(n_sites)
    report = AuditReport(n_circuits, n_updates, n_sites)
    for c in range(n_circuits):
        rng = check_random_state(derive_seed(seed, c))
        stab = StabilizerState.all_plus(n_sites)
        dense = DenseState.plus(n_sites)
        kinds, sites = sample_gates(rng, n_sites, probs, n_updates)
        for u in range(n_updates):
            op = gate_operator(n_sites, kinds[u], sites[u])
            stab.measure(op)
            expected = [stab.entropy(A) for A in regions]
            branches = [project(dense, op, outcome) for outcome in (1, -1)]
            entropies = []
            for branch, _ in branches:
                if branch is None:
                    continue
                values = np.array([exact_entropy(branch, A)
                                   for A in regions])
                entropies.append(values)
                report.n_checks += len(regions)
                report.max_deviation = max(
                    report.max_deviation,
                    float(np.abs(values - np.round(values)).max()))
                bad = np.flatnonzero(np.abs(values - expected) > 1e-9)
                report.n_mismatches += bad.size
                for k in bad[:max(0, 10 - len(report.mismatches))]:
                    report.mismatches.append((c, u + 1, regions[k].tolist()))
            if len(entropies) == 2 and np.abs(
                    entropies[0] - entropies[1]).max() > 1e-9:
                report.n_branch_disagreements += 1
            p_plus = branches[0][1]
            pick = 0 if rng.random_sample() < p_plus else 1
            if branches[pick][0] is None:
                pick = 1 - pick
            dense = branches[pick][0]
        if verbose:
            logger.info("audit circuit %i / %i", c + 1, n_circuits)
    if not report.passed:
        logger.warning("oracle audit failed: %r", report)
    return report
