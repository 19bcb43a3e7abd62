import time
import numpy as np
from numba import njit

WORD_BITS = 64

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def n_words(n_sites):
    """Number of 64-bit words needed to store ``n_sites`` bits."""
    return (n_sites + WORD_BITS - 1) // WORD_BITS


def site_mask(n_sites, sites):
    """Packed bit mask with the (1-based) ``sites`` set.

    Parameters
    ----------
    n_sites: int
        number of qubits L
    sites: iterable of int
        1-based site labels, all in [1, n_sites]

    Returns
    -------
    mask: np.array, shape (n_words(n_sites),), dtype uint64
    """
    idx = np.asarray(list(sites) if not isinstance(sites, np.ndarray)
                     else sites, dtype=np.int64)
    if idx.size and (idx.min() < 1 or idx.max() > n_sites):
        bad = idx[(idx < 1) | (idx > n_sites)][0]
        raise ValueError(
            "site %i out of range [1, %i]" % (bad, n_sites))
    mask = np.zeros(n_words(n_sites), dtype=np.uint64)
    idx = idx - 1
    np.bitwise_or.at(
        mask, idx // WORD_BITS,
        np.left_shift(np.uint64(1), (idx % WORD_BITS).astype(np.uint64)))
    return mask


def unpack_bits(words, n_sites):
    """Boolean array of length ``n_sites`` from packed words."""
    bits = np.unpackbits(
        np.ascontiguousarray(words, dtype='<u8').view(np.uint8),
        bitorder='little')
    return bits[:n_sites].astype(bool)


@njit
def word_parity(w):
    w ^= w >> np.uint64(32)
    w ^= w >> np.uint64(16)
    w ^= w >> np.uint64(8)
    w ^= w >> np.uint64(4)
    w ^= w >> np.uint64(2)
    w ^= w >> np.uint64(1)
    return w & _ONE


@njit
def symplectic_product(ax, az, bx, bz):
    """Parity of a.x . b.z + a.z . b.x, 1 iff the strings anticommute."""
    acc = _ZERO
    for w in range(ax.shape[0]):
        acc ^= (ax[w] & bz[w]) ^ (az[w] & bx[w])
    return word_parity(acc)


@njit
def set_bit(words, i):
    words[i // 64] |= _ONE << np.uint64(i % 64)


@njit
def measure_rows(x, z, ox, oz):
    """Two-case projective update of the stabilizer rows, in place.

    The first anticommuting row is the pivot; every later anticommuting row
    is multiplied by the old pivot before the pivot is overwritten by the
    measured operator. Returns the pivot index, -1 when nothing changed.
    """
    n_rows, n_w = x.shape
    pivot = -1
    for r in range(n_rows):
        if symplectic_product(x[r], z[r], ox, oz):
            if pivot < 0:
                pivot = r
            else:
                for w in range(n_w):
                    x[r, w] ^= x[pivot, w]
                    z[r, w] ^= z[pivot, w]
    if pivot >= 0:
        for w in range(n_w):
            x[pivot, w] = ox[w]
            z[pivot, w] = oz[w]
    return pivot


@njit
def gf2_rank(rows):
    """Rank over GF(2) of packed rows; ``rows`` is eliminated in place."""
    n_rows, n_w = rows.shape
    rank = 0
    for w in range(n_w):
        for b in range(64):
            bit = _ONE << np.uint64(b)
            pivot = -1
            for r in range(rank, n_rows):
                if rows[r, w] & bit:
                    pivot = r
                    break
            if pivot < 0:
                continue
            if pivot != rank:
                for k in range(w, n_w):
                    tmp = rows[rank, k]
                    rows[rank, k] = rows[pivot, k]
                    rows[pivot, k] = tmp
            for r in range(rank + 1, n_rows):
                if rows[r, w] & bit:
                    for k in range(w, n_w):
                        rows[r, k] ^= rows[rank, k]
            rank += 1
            if rank == n_rows:
                return rank
    return rank


@njit
def masked_rank(x, z, mask):
    """GF(2) rank of the stabilizer matrix restricted to the masked sites."""
    n_rows, n_w = x.shape
    scratch = np.empty((n_rows, 2 * n_w), dtype=np.uint64)
    for r in range(n_rows):
        for w in range(n_w):
            scratch[r, w] = x[r, w] & mask[w]
            scratch[r, n_w + w] = z[r, w] & mask[w]
    return gf2_rank(scratch)


def derive_seed(master_seed, *keys):
    """Deterministic 32-bit seed from a master seed and integer keys.

    Built on ``numpy.random.SeedSequence`` spawn keys, so that seeds of
    sibling trajectories are independent of each other and of the order in
    which they are requested.
    """
    seq = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, dtype=np.uint32)[0])


class Monitor():
    """
    Class used to store observable values at each time step of a trajectory.
    """
    def __init__(self, names, n_steps):
        self.t0 = time.time()
        self.names = list(names)
        self.values = np.full((n_steps, len(self.names)), np.nan)
        self.times = []

    def __call__(self, step, values):
        self.values[step, :] = values
        self.times.append(time.time() - self.t0)

    def series(self):
        return {name: self.values[:, k] for k, name in enumerate(self.names)}
