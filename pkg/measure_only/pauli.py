"""Phase-free Pauli strings over GF(2).

A Pauli string on L qubits is stored as two packed bit vectors, the X part
and the Z part, so that ``S = prod_i X_i^{x_i} prod_j Z_j^{z_j}`` up to a
phase. Site labels are 1-based at every public entry point.
"""

import numpy as np

from measure_only.utils import (
    n_words, site_mask, unpack_bits, symplectic_product)

_LABELS = {(False, False): 'I', (True, False): 'X', (False, True): 'Z',
           (True, True): 'Y'}


def _frozen(words):
    words = np.array(words, dtype=np.uint64)
    words.setflags(write=False)
    return words


class PauliString():
    """Pauli operator up to phase, as a 2L-component bit vector.

    Parameters
    ----------
    n_sites: int
        number of qubits L
    x_words: np.array, shape (n_words,), dtype uint64
        packed X exponents
    z_words: np.array, shape (n_words,), dtype uint64
        packed Z exponents

    Instances are immutable: the word arrays are read-only, so they can be
    shared between workers.
    """

    __slots__ = ('n_sites', 'x_words', 'z_words')

    def __init__(self, n_sites, x_words, z_words):
        if n_sites < 1:
            raise ValueError("n_sites must be positive, got %s" % n_sites)
        size = n_words(n_sites)
        if len(x_words) != size or len(z_words) != size:
            raise ValueError(
                "expected %i words for %i sites" % (size, n_sites))
        self.n_sites = int(n_sites)
        self.x_words = _frozen(x_words)
        self.z_words = _frozen(z_words)
        tail = n_sites % 64
        if tail and ((self.x_words[-1] | self.z_words[-1]) >>
                     np.uint64(tail)):
            raise ValueError("bits set beyond site %i" % n_sites)

    @classmethod
    def identity(cls, n_sites):
        zeros = np.zeros(n_words(n_sites), dtype=np.uint64)
        return cls(n_sites, zeros, zeros)

    @classmethod
    def from_support(cls, n_sites, x_sites=(), z_sites=()):
        """X on ``x_sites`` and Z on ``z_sites``; a shared site is Y."""
        return cls(n_sites, site_mask(n_sites, x_sites),
                   site_mask(n_sites, z_sites))

    @classmethod
    def from_label(cls, label):
        """Parse a string over {I, X, Y, Z}, site 1 first (e.g. 'ZXZII')."""
        label = label.strip().upper()
        if not label:
            raise ValueError("empty Pauli label")
        bad = set(label) - set('IXYZ')
        if bad:
            raise ValueError(
                "invalid characters %s in Pauli label %r" % (sorted(bad),
                                                            label))
        x_sites = [i + 1 for i, c in enumerate(label) if c in 'XY']
        z_sites = [i + 1 for i, c in enumerate(label) if c in 'ZY']
        return cls.from_support(len(label), x_sites, z_sites)

    @property
    def x_bits(self):
        return unpack_bits(self.x_words, self.n_sites)

    @property
    def z_bits(self):
        return unpack_bits(self.z_words, self.n_sites)

    @property
    def support(self):
        """1-based sites on which the operator acts non-trivially."""
        return np.flatnonzero(self.x_bits | self.z_bits) + 1

    @property
    def weight(self):
        return len(self.support)

    def is_identity(self):
        return not (self.x_words.any() or self.z_words.any())

    def to_label(self):
        return ''.join(_LABELS[bool(x), bool(z)]
                       for x, z in zip(self.x_bits, self.z_bits))

    def _check_size(self, other):
        if self.n_sites != other.n_sites:
            raise ValueError(
                "size mismatch: %i vs %i sites" % (self.n_sites,
                                                   other.n_sites))

    def commutes(self, other):
        self._check_size(other)
        return not symplectic_product(
            self.x_words, self.z_words, other.x_words, other.z_words)

    def __mul__(self, other):
        self._check_size(other)
        return PauliString(self.n_sites, self.x_words ^ other.x_words,
                           self.z_words ^ other.z_words)

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.n_sites == other.n_sites and
                np.array_equal(self.x_words, other.x_words) and
                np.array_equal(self.z_words, other.z_words))

    def __hash__(self):
        return hash((self.n_sites, self.x_words.tobytes(),
                     self.z_words.tobytes()))

    def __repr__(self):
        return "PauliString(%r)" % self.to_label()


def from_support(n_sites, x_sites=(), z_sites=()):
    return PauliString.from_support(n_sites, x_sites, z_sites)


def commutes(a, b):
    """True iff ``a`` and ``b`` commute (symplectic inner product is 0)."""
    return a.commutes(b)


def multiply(a, b):
    """Phase-free product: XOR of the X parts and of the Z parts."""
    return a * b


def x_gate(n_sites, i):
    """Single-qubit X on site ``i``."""
    return PauliString.from_support(n_sites, [i], [])


def zz_gate(n_sites, i):
    """Z_i Z_{i+1}, 1 <= i <= L - 1."""
    if not 1 <= i <= n_sites - 1:
        raise ValueError(
            "ZZ left site %i out of range [1, %i]" % (i, n_sites - 1))
    return PauliString.from_support(n_sites, [], [i, i + 1])


def zxz_gate(n_sites, i):
    """Z_{i-1} X_i Z_{i+1} centred on ``i``, 2 <= i <= L - 1."""
    if not 2 <= i <= n_sites - 1:
        raise ValueError(
            "ZXZ centre %i out of range [2, %i]" % (i, n_sites - 1))
    return PauliString.from_support(n_sites, [i], [i - 1, i + 1])
