import numpy as np

from measure_only.pauli import PauliString
from measure_only.utils import (
    n_words, site_mask, measure_rows, masked_rank, gf2_rank,
    symplectic_product)


class StabilizerState():
    """Pure stabilizer state stored as its L x 2L binary stabilizer matrix.

    Row ``r`` of ``x`` and ``z`` holds the packed X and Z parts of the
    generator S_r. Generators are kept mutually commuting and independent
    over GF(2); signs are not tracked, entanglement does not depend on them.

    Parameters
    ----------
    x: np.array, shape (L, n_words), dtype uint64
    z: np.array, shape (L, n_words), dtype uint64
    n_sites: int
        number of qubits L
    debug: bool
        when True, the invariants are audited after every measurement
    """

    def __init__(self, x, z, n_sites, debug=False):
        if n_sites < 2:
            raise ValueError("a state needs L >= 2 sites, got %s" % n_sites)
        x = np.ascontiguousarray(x, dtype=np.uint64)
        z = np.ascontiguousarray(z, dtype=np.uint64)
        if x.shape != (n_sites, n_words(n_sites)) or x.shape != z.shape:
            raise ValueError(
                "stabilizer matrix of shape %s does not match L=%i"
                % (x.shape, n_sites))
        self.x = x
        self.z = z
        self.n_sites = int(n_sites)
        self.debug = debug

    @classmethod
    def from_generators(cls, generators, debug=False):
        generators = list(generators)
        n_sites = generators[0].n_sites
        if len(generators) != n_sites:
            raise ValueError(
                "need exactly %i generators, got %i" % (n_sites,
                                                        len(generators)))
        x = np.array([g.x_words for g in generators], dtype=np.uint64)
        z = np.array([g.z_words for g in generators], dtype=np.uint64)
        state = cls(x, z, n_sites, debug=debug)
        state.audit()
        return state

    @classmethod
    def from_labels(cls, labels, debug=False):
        return cls.from_generators(
            [PauliString.from_label(s) for s in labels], debug=debug)

    @classmethod
    def all_plus(cls, n_sites):
        """|+>^L, generators X_1, ..., X_L."""
        cls._check_size(n_sites)
        x = np.zeros((n_sites, n_words(n_sites)), dtype=np.uint64)
        for i in range(n_sites):
            x[i] = site_mask(n_sites, [i + 1])
        return cls(x, np.zeros_like(x), n_sites)

    @classmethod
    def all_zero(cls, n_sites):
        """|0>^L, generators Z_1, ..., Z_L."""
        state = cls.all_plus(n_sites)
        state.x, state.z = state.z, state.x
        return state

    @classmethod
    def ghz(cls, n_sites):
        """|0...0> + |1...1>: Z_i Z_{i+1} for all bonds and X_1 ... X_L."""
        cls._check_size(n_sites)
        gens = [PauliString.from_support(n_sites, [], [i, i + 1])
                for i in range(1, n_sites)]
        gens.append(PauliString.from_support(n_sites, range(1, n_sites + 1)))
        return cls.from_generators(gens)

    @classmethod
    def cluster(cls, n_sites):
        """Open-chain cluster (graph) state.

        Bulk Z_{i-1} X_i Z_{i+1} completed by X_1 Z_2 and Z_{L-1} X_L.
        """
        cls._check_size(n_sites)
        gens = [PauliString.from_support(n_sites, [1], [2])]
        gens += [PauliString.from_support(n_sites, [i], [i - 1, i + 1])
                 for i in range(2, n_sites)]
        gens.append(PauliString.from_support(n_sites, [n_sites],
                                             [n_sites - 1]))
        return cls.from_generators(gens)

    @classmethod
    def spt(cls, n_sites):
        """Fixed point of repeated ZXZ measurements started from |+>^L.

        Bulk Z_{i-1} X_i Z_{i+1} together with the two symmetry generators,
        the products of X over odd and over even sites.
        """
        if n_sites < 3:
            raise ValueError("the SPT fixture needs L >= 3, got %s" % n_sites)
        gens = [PauliString.from_support(n_sites, [i], [i - 1, i + 1])
                for i in range(2, n_sites)]
        gens.append(PauliString.from_support(
            n_sites, range(1, n_sites + 1, 2)))
        gens.append(PauliString.from_support(
            n_sites, range(2, n_sites + 1, 2)))
        return cls.from_generators(gens)

    @staticmethod
    def _check_size(n_sites):
        if n_sites < 2:
            raise ValueError("a state needs L >= 2 sites, got %s" % n_sites)

    @property
    def generators(self):
        return [PauliString(self.n_sites, self.x[r], self.z[r])
                for r in range(self.n_sites)]

    def copy(self):
        return StabilizerState(self.x.copy(), self.z.copy(), self.n_sites,
                               debug=self.debug)

    def rank(self):
        scratch = np.hstack([self.x, self.z])
        return gf2_rank(scratch)

    def audit(self):
        """Check that the rows commute pairwise and have full rank L."""
        for a in range(self.n_sites):
            for b in range(a + 1, self.n_sites):
                if symplectic_product(self.x[a], self.z[a],
                                      self.x[b], self.z[b]):
                    raise ValueError(
                        "generators %i and %i anticommute" % (a + 1, b + 1))
        rank = self.rank()
        if rank != self.n_sites:
            raise ValueError(
                "generators are dependent: rank %i < %i"
                % (rank, self.n_sites))

    def measure(self, op):
        """Projective measurement of ``op``, in place; returns self."""
        self._measure(op)
        return self

    def _measure(self, op):
        if op.n_sites != self.n_sites:
            raise ValueError(
                "size mismatch: operator on %i sites, state on %i"
                % (op.n_sites, self.n_sites))
        if op.is_identity():
            raise ValueError("cannot measure the identity operator")
        pivot = measure_rows(self.x, self.z, op.x_words, op.z_words)
        if self.debug:
            self.audit()
        return pivot

    def entropy(self, sites):
        """Entanglement entropy (bits) of the site set ``sites``.

        S_A = rank(M_T restricted to the columns of A) - |A|.
        """
        sites = np.unique(np.asarray(list(sites), dtype=np.int64))
        if sites.size == 0:
            return 0
        mask = site_mask(self.n_sites, sites)
        return self.entropy_mask(mask, sites.size)

    def entropy_mask(self, mask, size):
        """Entropy of a region given as a precomputed packed mask."""
        return int(masked_rank(self.x, self.z, mask)) - int(size)

    def to_labels(self):
        return [g.to_label() for g in self.generators]

    def __repr__(self):
        return "StabilizerState(%s)" % ', '.join(self.to_labels())


def new_all_plus(n_sites):
    return StabilizerState.all_plus(n_sites)


def new_all_zero(n_sites):
    return StabilizerState.all_zero(n_sites)


def measure(state, op):
    return state.measure(op)


def entropy(state, sites):
    return state.entropy(sites)
