"""Entanglement diagnostics of stabilizer states.

All entropies are in bits (log base 2) and integer-valued.
"""

import numpy as np

from measure_only.utils import site_mask


def partition4(n_sites):
    """Regions A, B, D, C: four equal blocks in that order along the chain.

    Returns a dict mapping 'A', 'B', 'C', 'D' to 1-based site arrays. The
    union A u B u C is not contiguous since D sits between B and C.
    """
    if n_sites < 4 or n_sites % 4:
        raise ValueError(
            "S_topo needs L divisible by 4, got L=%s" % n_sites)
    q = n_sites // 4
    blocks = [np.arange(k * q + 1, (k + 1) * q + 1) for k in range(4)]
    return dict(A=blocks[0], B=blocks[1], D=blocks[2], C=blocks[3])


def probe_sites(n_sites):
    """Single-qubit probes at L/8 and 7L/8."""
    if n_sites % 8:
        raise ValueError(
            "probe sites L/8, 7L/8 need L divisible by 8, got L=%s"
            % n_sites)
    return n_sites // 8, 7 * n_sites // 8


def distance_sites(n_sites, d):
    """Qubits at L/2 - d/2 and L/2 + d/2."""
    if n_sites % 2:
        raise ValueError("distance probes need an even L, got %s" % n_sites)
    if d < 1 or d % 2:
        raise ValueError("distance d must be even and positive, got %s" % d)
    i, j = n_sites // 2 - d // 2, n_sites // 2 + d // 2
    if i < 1 or j > n_sites:
        raise ValueError(
            "distance %i places probes outside the chain of L=%i"
            % (d, n_sites))
    return i, j


def centered_subsystem(n_sites, size):
    """Sites of the block [L/2 - size/2 + 1, L/2 + size/2]."""
    if size < 1 or size > n_sites or (n_sites - size) % 2:
        raise ValueError(
            "cannot centre a block of %s sites in L=%s" % (size, n_sites))
    start = (n_sites - size) // 2
    return np.arange(start + 1, start + size + 1)


def s_topo(state):
    """S_topo = S_AB + S_BC - S_B - S_ABC on the A, B, D, C partition."""
    r = partition4(state.n_sites)
    A, B, C = r['A'], r['B'], r['C']
    return (state.entropy(np.concatenate([A, B])) +
            state.entropy(np.concatenate([B, C])) -
            state.entropy(B) -
            state.entropy(np.concatenate([A, B, C])))


def mutual_info(state, A, B):
    """I(A, B) = S_A + S_B - S_AB for disjoint non-empty A, B."""
    A = np.unique(np.asarray(list(A), dtype=np.int64))
    B = np.unique(np.asarray(list(B), dtype=np.int64))
    if A.size == 0 or B.size == 0:
        raise ValueError("mutual information needs non-empty regions")
    if np.intersect1d(A, B).size:
        raise ValueError(
            "regions overlap on sites %s" % np.intersect1d(A, B).tolist())
    return (state.entropy(A) + state.entropy(B) -
            state.entropy(np.concatenate([A, B])))


def mutual_info_vs_distance(state, d):
    i, j = distance_sites(state.n_sites, d)
    return mutual_info(state, [i], [j])


def half_chain_entropy(state):
    if state.n_sites % 2:
        raise ValueError(
            "half-chain entropy needs an even L, got %s" % state.n_sites)
    return state.entropy(np.arange(1, state.n_sites // 2 + 1))


class Observable():
    """Base class of the observables recorded along trajectories.

    Subclasses define ``name`` and ``regions(L)``: a list of (sign, sites)
    terms whose signed entropies add up to the observable. Masks are cached
    per system size.
    """
    name = None

    def __init__(self):
        self._cache = {}

    def check(self, n_sites):
        self.regions(n_sites)

    def regions(self, n_sites):
        raise NotImplementedError

    def _masks(self, n_sites):
        if n_sites not in self._cache:
            self._cache[n_sites] = [
                (sign, site_mask(n_sites, sites), len(sites))
                for sign, sites in self.regions(n_sites)]
        return self._cache[n_sites]

    def value(self, state):
        return sum(sign * state.entropy_mask(mask, size)
                   for sign, mask, size in self._masks(state.n_sites))

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self.name)


class HalfChainEntropy(Observable):
    name = "half_chain"

    def regions(self, n_sites):
        if n_sites % 2:
            raise ValueError(
                "half-chain entropy needs an even L, got %s" % n_sites)
        return [(1, np.arange(1, n_sites // 2 + 1))]


class TopologicalEntropy(Observable):
    name = "s_topo"

    def regions(self, n_sites):
        r = partition4(n_sites)
        A, B, C = r['A'], r['B'], r['C']
        return [(1, np.concatenate([A, B])), (1, np.concatenate([B, C])),
                (-1, B), (-1, np.concatenate([A, B, C]))]


class ProbeMutualInfo(Observable):
    """I(A, B) between the single qubits at L/8 and 7L/8."""
    name = "mi_probe"

    def regions(self, n_sites):
        i, j = probe_sites(n_sites)
        return [(1, [i]), (1, [j]), (-1, [i, j])]


class DistanceMutualInfo(Observable):

    def __init__(self, d):
        super().__init__()
        self.d = int(d)
        self.name = "mi_dist:%i" % self.d

    def regions(self, n_sites):
        i, j = distance_sites(n_sites, self.d)
        return [(1, [i]), (1, [j]), (-1, [i, j])]


class SubsystemEntropy(Observable):
    """Entropy of a block of ``size`` sites centred in the chain."""

    def __init__(self, size):
        super().__init__()
        self.size = int(size)
        self.name = "sub:%i" % self.size

    def regions(self, n_sites):
        return [(1, centered_subsystem(n_sites, self.size))]


_SIMPLE = {cls.name: cls for cls in
           (HalfChainEntropy, TopologicalEntropy, ProbeMutualInfo)}
_PARAMETRIZED = {"mi_dist": DistanceMutualInfo, "sub": SubsystemEntropy}


def get_observable(name):
    """Observable from its identifier, e.g. 's_topo' or 'mi_dist:8'."""
    if isinstance(name, Observable):
        return name
    name = name.strip()
    if name in _SIMPLE:
        return _SIMPLE[name]()
    head, _, arg = name.partition(':')
    if head in _PARAMETRIZED and arg:
        try:
            return _PARAMETRIZED[head](int(arg))
        except ValueError:
            pass
    raise ValueError(
        "unknown observable %r, expected one of %s or mi_dist:<d>, sub:<n>"
        % (name, sorted(_SIMPLE)))
