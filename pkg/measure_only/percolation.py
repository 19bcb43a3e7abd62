# This files contains the bond-percolation side of the model: the map from
# a ZXZ/ZZ gate log to a bond lattice on one sublattice of the chain, and a
# union-find engine for square-lattice bond percolation.
import logging
from collections import deque

import numpy as np
from numba import njit
from joblib import Parallel, delayed
from sklearn.utils import check_random_state

from measure_only.circuit import X_GATE, ZZ_GATE, ZXZ_GATE
from measure_only.scaling import ScalingDataset, find_collapse
from measure_only.utils import derive_seed

logger = logging.getLogger(__name__)

PARITIES = ("odd", "even")


class BondLattice():
    """Bonds of a ``depth`` x ``width`` square lattice.

    Node (t, j) sits at time row t and sublattice column j.

    Parameters
    ----------
    horizontal: np.array of bool, shape (depth, width - 1)
        bond between (t, j) and (t, j + 1)
    vertical: np.array of bool, shape (depth - 1, width)
        bond between (t, j) and (t + 1, j)
    """

    def __init__(self, width, depth, horizontal, vertical):
        if width < 1 or depth < 1:
            raise ValueError("lattice needs width, depth >= 1, got %s, %s"
                             % (width, depth))
        horizontal = np.array(horizontal, dtype=bool)
        vertical = np.array(vertical, dtype=bool)
        if horizontal.shape != (depth, width - 1):
            raise ValueError("horizontal bonds of shape %s, expected %s"
                             % (horizontal.shape, (depth, width - 1)))
        if vertical.shape != (depth - 1, width):
            raise ValueError("vertical bonds of shape %s, expected %s"
                             % (vertical.shape, (depth - 1, width)))
        horizontal.setflags(write=False)
        vertical.setflags(write=False)
        self.width = int(width)
        self.depth = int(depth)
        self.horizontal = horizontal
        self.vertical = vertical

    @classmethod
    def from_random(cls, width, depth, p_h, p_v, rng=None):
        """Every bond drawn independently, horizontal ones first."""
        for name, p in (("p_h", p_h), ("p_v", p_v)):
            if not 0 <= p <= 1:
                raise ValueError("%s must lie in [0, 1], got %s" % (name, p))
        rng = check_random_state(rng)
        horizontal = rng.random_sample((depth, width - 1)) < p_h
        vertical = rng.random_sample((depth - 1, width)) < p_v
        return cls(width, depth, horizontal, vertical)

    @property
    def n_nodes(self):
        return self.width * self.depth

    @property
    def n_bonds(self):
        """(horizontal, vertical) occupied bond counts."""
        return int(self.horizontal.sum()), int(self.vertical.sum())

    def __repr__(self):
        return "BondLattice(width=%i, depth=%i, bonds=%s)" % (
            self.width, self.depth, self.n_bonds)


def _sublattice(n_sites, parity):
    if parity not in PARITIES:
        raise ValueError("parity must be one of %s, got %r"
                         % (PARITIES, parity))
    offset = 1 if parity == "odd" else 2
    width = (n_sites - offset) // 2 + 1
    return offset, width


def transcribe_circuit(gate_log, n_sites, parity="odd", n_steps=None):
    """Bond lattice of one sublattice from a gate log without X gates.

    Row 0 is the initial time; the gates of time ``t`` act between rows
    t - 1 and t. A ZXZ centred at i whose outer sites i - 1, i + 1 belong
    to the sublattice draws a horizontal bond between them at row t. The
    vertical bond of a sublattice site between rows t - 1 and t is present
    unless a ZZ touches that site at time t.

    Parameters
    ----------
    gate_log: tuple of np.array
        (kinds, sites, times) as returned by ``run_trajectory`` with
        ``record_gates=True``; times are >= 1
    n_sites: int
        chain length L
    parity: str
        "odd" or "even" sublattice
    n_steps: int or None
        number of times, ``times.max()`` when None

    Returns
    -------
    lattice: BondLattice
    """
    kinds, sites, times = (np.asarray(a, dtype=np.int64) for a in gate_log)
    offset, width = _sublattice(n_sites, parity)
    if np.any(kinds == X_GATE):
        raise ValueError("X gates have no bond-percolation image, the map "
                         "holds for p_x = 0 only")
    if n_steps is None:
        n_steps = int(times.max()) if times.size else 0
    if times.size and (times.min() < 1 or times.max() > n_steps):
        raise ValueError("gate times must lie in [1, %i]" % n_steps)
    depth = n_steps + 1
    horizontal = np.zeros((depth, width - 1), dtype=bool)
    vertical = np.ones((depth - 1, width), dtype=bool)

    zxz = kinds == ZXZ_GATE
    left = sites[zxz] - 1
    on = (left - offset) % 2 == 0
    horizontal[times[zxz][on], (left[on] - offset) // 2] = True

    zz = kinds == ZZ_GATE
    touched = np.concatenate([sites[zz], sites[zz] + 1])
    when = np.concatenate([times[zz], times[zz]])
    on = (touched - offset) % 2 == 0
    vertical[when[on] - 1, (touched[on] - offset) // 2] = False
    return BondLattice(width, depth, horizontal, vertical)


def bond_rates(lattice, n_updates=None):
    """Empirical bond rates of a transcribed lattice.

    Horizontal bonds per updating step, and half of one minus the missing
    vertical bonds per updating step. With one gate per row they estimate
    P_ZXZ / 2 and (1 - P_ZZ) / 2.
    """
    n_updates = lattice.depth - 1 if n_updates is None else n_updates
    if n_updates < 1:
        raise ValueError("need at least one updating step")
    h_rate = lattice.horizontal.sum() / n_updates
    missing = (~lattice.vertical).sum() / n_updates
    v_rate = 0.5 * (1 - missing)
    return dict(
        horizontal=float(h_rate), vertical=float(v_rate),
        horizontal_stderr=float(np.sqrt(h_rate * (1 - h_rate) / n_updates)),
        vertical_stderr=float(0.5 * np.sqrt(missing * (1 - missing) /
                                            n_updates)),
        n_updates=int(n_updates))


@njit
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@njit
def _union(parent, rank, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra == rb:
        return
    if rank[ra] < rank[rb]:
        ra, rb = rb, ra
    parent[rb] = ra
    if rank[ra] == rank[rb]:
        rank[ra] += 1


@njit
def _merge_bonds(horizontal, vertical, parent, rank):
    depth, width = vertical.shape[0] + 1, vertical.shape[1]
    for t in range(depth):
        for j in range(width - 1):
            if horizontal[t, j]:
                _union(parent, rank, t * width + j, t * width + j + 1)
    for t in range(depth - 1):
        for j in range(width):
            if vertical[t, j]:
                _union(parent, rank, t * width + j, (t + 1) * width + j)
    for a in range(parent.shape[0]):
        _find(parent, a)


def _canonical(roots):
    """Relabel clusters 0, 1, ... in order of their first node."""
    _, first, inverse = np.unique(roots, return_index=True,
                                  return_inverse=True)
    order = np.empty(first.shape[0], dtype=np.int64)
    order[np.argsort(first)] = np.arange(first.shape[0])
    return order[inverse.ravel()]


class ClusterLabeling():
    """Union-find clusters of a BondLattice.

    Attributes
    ----------
    parent, rank: np.array of int64, shape (n_nodes,)
        union-find forest, fully path-compressed after construction
    """

    def __init__(self, lattice):
        self.lattice = lattice
        n = lattice.n_nodes
        self.parent = np.arange(n, dtype=np.int64)
        self.rank = np.zeros(n, dtype=np.int64)
        _merge_bonds(lattice.horizontal, lattice.vertical, self.parent,
                     self.rank)

    def find(self, node):
        return int(_find(self.parent, node))

    def labels(self):
        """Cluster label of every node, shape (depth, width)."""
        return _canonical(self.parent).reshape(self.lattice.depth,
                                               self.lattice.width)

    def cluster_sizes(self):
        return np.bincount(self.labels().ravel())

    @property
    def n_clusters(self):
        return int(np.unique(self.parent).shape[0])

    @property
    def spanning(self):
        """True iff a cluster connects the first and the last time row."""
        width = self.lattice.width
        top = self.parent[:width]
        bottom = self.parent[-width:]
        return bool(np.intersect1d(top, bottom).size)

    def __repr__(self):
        return "ClusterLabeling(n_clusters=%i, spanning=%s)" % (
            self.n_clusters, self.spanning)


def flood_fill_labels(lattice):
    """Breadth-first cluster labels, numbered in order of first node."""
    depth, width = lattice.depth, lattice.width
    labels = np.full((depth, width), -1, dtype=np.int64)
    current = 0
    for t0 in range(depth):
        for j0 in range(width):
            if labels[t0, j0] >= 0:
                continue
            labels[t0, j0] = current
            queue = deque([(t0, j0)])
            while queue:
                t, j = queue.popleft()
                neighbours = []
                if j > 0 and lattice.horizontal[t, j - 1]:
                    neighbours.append((t, j - 1))
                if j < width - 1 and lattice.horizontal[t, j]:
                    neighbours.append((t, j + 1))
                if t > 0 and lattice.vertical[t - 1, j]:
                    neighbours.append((t - 1, j))
                if t < depth - 1 and lattice.vertical[t, j]:
                    neighbours.append((t + 1, j))
                for nt, nj in neighbours:
                    if labels[nt, nj] < 0:
                        labels[nt, nj] = current
                        queue.append((nt, nj))
            current += 1
    return labels


def percolate(width, depth, p_horizontal, p_vertical, seed=None):
    """Sample a random bond lattice and label its clusters."""
    lattice = BondLattice.from_random(width, depth, p_horizontal,
                                      p_vertical, rng=seed)
    return ClusterLabeling(lattice)


def spanning_probability(width, depth, p_h, p_v, n_samples, seed=0):
    """Fraction of ``n_samples`` lattices with a time-spanning cluster.

    Returns
    -------
    mean, stderr: float
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1, got %s" % n_samples)
    hits = np.array([
        percolate(width, depth, p_h, p_v, seed=derive_seed(seed, k)).spanning
        for k in range(n_samples)], dtype=float)
    stderr = (hits.std(ddof=1) / np.sqrt(n_samples) if n_samples > 1
              else 0.)
    return hits.mean(), stderr


def _spanning_cell(size, p, n_samples, seed, aspect):
    depth = max(1, int(round(aspect * size)))
    return spanning_probability(size, depth, p, p, n_samples, seed=seed)


def spanning_dataset(sizes, p_values, n_samples, seed=0, aspect=1.,
                     n_jobs=1):
    """Isotropic spanning probability for every (size, p) cell.

    Cell (size, k) is seeded by ``derive_seed(seed, size, k)``.

    Returns
    -------
    data: ScalingDataset
        observable "spanning", one point per cell
    """
    cells = [(int(size), k, float(p)) for size in sizes
             for k, p in enumerate(p_values)]
    logger.info("percolation: %i cells of %i samples", len(cells), n_samples)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_spanning_cell)(size, p, n_samples,
                                derive_seed(seed, size, k), aspect)
        for size, k, p in cells)
    P = [p for _, _, p in cells]
    L = [size for size, _, _ in cells]
    y = [mean for mean, _ in results]
    y_err = [err for _, err in results]
    return ScalingDataset(P, L, y, y_err, observable="spanning",
                          path="isotropic square-lattice bond percolation")


def estimate_percolation_exponents(sizes, p_values, n_samples, seed=0,
                                   aspect=1., n_jobs=1, return_data=False,
                                   **kwargs):
    """Collapse the spanning probability to estimate (p_c, nu).

    Extra keyword arguments go to ``find_collapse``; with ``return_data``
    the spanning dataset is returned alongside the result.
    """
    if len(set(sizes)) < 3:
        raise ValueError("need >= 3 distinct sizes, got %s" % list(sizes))
    data = spanning_dataset(sizes, p_values, n_samples, seed=seed,
                            aspect=aspect, n_jobs=n_jobs)
    result = find_collapse(data, n_jobs=n_jobs, **kwargs)
    if return_data:
        return result, data
    return result
