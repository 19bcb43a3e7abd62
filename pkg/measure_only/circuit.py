import logging

import numpy as np
from numba import njit
from joblib import Parallel, delayed
from sklearn.utils import check_random_state

from measure_only import __version__
from measure_only.observables import get_observable
from measure_only.pauli import x_gate, zz_gate, zxz_gate
from measure_only.stabilizer import StabilizerState
from measure_only.utils import (
    set_bit, measure_rows, derive_seed, Monitor)

logger = logging.getLogger(__name__)

X_GATE, ZZ_GATE, ZXZ_GATE = 0, 1, 2
GATE_NAMES = ("X", "ZZ", "ZXZ")
INITIAL_STATES = ("plus", "zero")


class CircuitConfig():
    """Parameters of the measurement-only circuit.

    Parameters
    ----------
    L: int
        chain length, open boundaries
    p_x, p_zz, p_zxz: float
        gate-type probabilities, summing to one
    t_max: int
        number of time steps, one time step being L updating steps
        (default 4 L)
    t_measure_from: int
        steady-state cut, time steps with index >= t_measure_from are
        averaged (default 2 L)
    initial_state: str
        "plus" for |+>^L or "zero" for |0>^L
    seed: int
        master seed
    observables: sequence of str
        observable identifiers, see ``measure_only.observables``
    average: str
        "time" averages the post-cut time steps of each trajectory,
        "final" only keeps the last one
    """

    def __init__(self, L, p_x, p_zz, p_zxz, t_max=None, t_measure_from=None,
                 initial_state="plus", seed=0, observables=("half_chain",),
                 average="time"):
        self.L = int(L)
        self.p_x = float(p_x)
        self.p_zz = float(p_zz)
        self.p_zxz = float(p_zxz)
        self.t_max = 4 * self.L if t_max is None else int(t_max)
        self.t_measure_from = (
            min(2 * self.L, self.t_max - 1) if t_measure_from is None
            else int(t_measure_from))
        self.initial_state = initial_state
        self.seed = int(seed)
        self.observables = tuple(observables)
        self.average = average
        self.validate()

    def validate(self):
        if self.L < 4:
            raise ValueError("L must be at least 4, got %i" % self.L)
        probs = self.probs
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError(
                "probabilities must lie in [0, 1], got %s" % probs.tolist())
        if abs(probs.sum() - 1) > 1e-9:
            raise ValueError(
                "p_x + p_zz + p_zxz must equal 1, got %.12g" % probs.sum())
        if not 0 <= self.t_measure_from < self.t_max:
            raise ValueError(
                "need 0 <= t_measure_from < t_max, got %i and %i"
                % (self.t_measure_from, self.t_max))
        if self.initial_state not in INITIAL_STATES:
            raise ValueError(
                "initial_state must be one of %s, got %r"
                % (INITIAL_STATES, self.initial_state))
        if self.average not in ("time", "final"):
            raise ValueError(
                "average must be 'time' or 'final', got %r" % self.average)
        if not 0 <= self.seed < 2 ** 63:
            raise ValueError("seed must be a 64-bit non-negative integer")
        for obs in self.get_observables():
            obs.check(self.L)

    @property
    def probs(self):
        return np.array([self.p_x, self.p_zz, self.p_zxz])

    def get_observables(self):
        return [get_observable(name) for name in self.observables]

    def replace(self, **kwargs):
        params = self.to_dict()
        params.update(kwargs)
        return CircuitConfig(**params)

    def to_dict(self):
        return dict(
            L=self.L, p_x=self.p_x, p_zz=self.p_zz, p_zxz=self.p_zxz,
            t_max=self.t_max, t_measure_from=self.t_measure_from,
            initial_state=self.initial_state, seed=self.seed,
            observables=self.observables, average=self.average)

    def __repr__(self):
        return "CircuitConfig(%s)" % ", ".join(
            "%s=%r" % item for item in self.to_dict().items())


class TrajectoryResult():
    """Time series of one trajectory.

    Attributes
    ----------
    config: CircuitConfig
    series: dict
        observable id -> np.array of shape (t_max,); entries of time steps
        that were not recorded are NaN
    final: dict
        observable id -> value at t_max
    gates: tuple of np.array or None
        (kinds, sites, steps) gate log, kept when requested
    times: list of float
        wall-clock seconds since the start, one entry per recorded step
    """

    def __init__(self, config, series, final, gates=None, times=None):
        self.config = config
        self.series = series
        self.final = final
        self.gates = gates
        self.times = [] if times is None else list(times)

    @property
    def wall_time(self):
        return self.times[-1] if self.times else 0.

    def steady_values(self):
        """Per-observable steady-state value of this trajectory."""
        cut = self.config.t_measure_from
        if self.config.average == "final":
            return {k: float(v) for k, v in self.final.items()}
        return {k: float(np.mean(v[cut:])) for k, v in self.series.items()}


class EnsembleRecord():
    """Ensemble average of one observable with its provenance."""

    def __init__(self, config, observable, mean, stderr, n_samples, t=None,
                 samples=None):
        self.L = config.L
        self.p_x = config.p_x
        self.p_zz = config.p_zz
        self.p_zxz = config.p_zxz
        self.initial_state = config.initial_state
        self.seed = config.seed
        self.observable = observable
        self.mean = float(mean)
        self.stderr = float(stderr)
        self.n_samples = int(n_samples)
        self.t = t
        self.version = __version__
        self.samples = samples

    def to_dict(self):
        return dict(
            observable=self.observable, L=self.L, p_x=self.p_x,
            p_zz=self.p_zz, p_zxz=self.p_zxz,
            t=-1 if self.t is None else int(self.t),
            initial_state=self.initial_state, mean=self.mean,
            stderr=self.stderr, n_samples=self.n_samples, seed=self.seed,
            version=self.version)

    def __repr__(self):
        return ("EnsembleRecord(%s, L=%i, mean=%.4f, stderr=%.4f, N=%i)"
                % (self.observable, self.L, self.mean, self.stderr,
                   self.n_samples))


def _type_edges(probs):
    p_x, p_zz, p_zxz = probs
    edges = np.array([p_x, p_x + p_zz])
    # never draw a gate type of probability zero through rounding
    if p_zxz == 0:
        edges[1] = 2.
        if p_zz == 0:
            edges[0] = 2.
    return edges


def sample_gates(rng, n_sites, probs, n_updates):
    """Draw ``n_updates`` gates, two uniforms per update (type, location).

    Returns
    -------
    kinds: np.array of int8, X_GATE, ZZ_GATE or ZXZ_GATE
    sites: np.array of int64, 1-based site (X), left site (ZZ) or
        centre (ZXZ)
    """
    u = rng.random_sample((n_updates, 2))
    kinds = np.searchsorted(_type_edges(probs), u[:, 0], side='right')
    n_choices = np.array([n_sites, n_sites - 1, n_sites - 2])[kinds]
    offset = np.array([1, 1, 2])[kinds]
    sites = offset + np.minimum(
        np.floor(u[:, 1] * n_choices).astype(np.int64), n_choices - 1)
    return kinds.astype(np.int8), sites.astype(np.int64)


@njit
def _apply_gates(x, z, kinds, sites):
    n_w = x.shape[1]
    ox = np.zeros(n_w, dtype=np.uint64)
    oz = np.zeros(n_w, dtype=np.uint64)
    for g in range(kinds.shape[0]):
        i = sites[g] - 1
        if kinds[g] == X_GATE:
            set_bit(ox, i)
        elif kinds[g] == ZZ_GATE:
            set_bit(oz, i)
            set_bit(oz, i + 1)
        else:
            set_bit(oz, i - 1)
            set_bit(ox, i)
            set_bit(oz, i + 1)
        measure_rows(x, z, ox, oz)
        for w in range(n_w):
            ox[w] = 0
            oz[w] = 0


def gate_operator(n_sites, kind, site):
    """PauliString of a sampled gate."""
    return (x_gate, zz_gate, zxz_gate)[kind](n_sites, int(site))


def initial_state(config):
    if config.initial_state == "plus":
        return StabilizerState.all_plus(config.L)
    return StabilizerState.all_zero(config.L)


def update_step(state, config, rng):
    """Apply exactly one randomly drawn measurement to ``state``."""
    rng = check_random_state(rng)
    kinds, sites = sample_gates(rng, config.L, config.probs, 1)
    _apply_gates(state.x, state.z, kinds, sites)
    if state.debug:
        state.audit()
    return state


def run_trajectory(config, seed=None, record_from=0, record_gates=False):
    """Evolve one trajectory for ``config.t_max`` time steps.

    Parameters
    ----------
    config: CircuitConfig
    seed: int or None
        seed of this trajectory, ``config.seed`` when None
    record_from: int
        observables are evaluated only from this time-step index on
    record_gates: bool
        keep the full gate log (kinds, sites, update index)

    Returns
    -------
    result: TrajectoryResult
    """
    rng = check_random_state(config.seed if seed is None else seed)
    L = config.L
    state = initial_state(config)
    observables = config.get_observables()
    monitor = Monitor([obs.name for obs in observables], config.t_max)
    log = [] if record_gates else None
    record_from = min(record_from, config.t_max - 1)

    for step in range(config.t_max):
        kinds, sites = sample_gates(rng, L, config.probs, L)
        _apply_gates(state.x, state.z, kinds, sites)
        if record_gates:
            log.append((kinds, sites))
        if step >= record_from:
            monitor(step, [obs.value(state) for obs in observables])

    series = monitor.series()
    final = {name: values[-1] for name, values in series.items()}
    gates = None
    if record_gates:
        kinds = np.concatenate([k for k, _ in log])
        sites = np.concatenate([s for _, s in log])
        gates = (kinds, sites, np.arange(1, kinds.shape[0] + 1))
    return TrajectoryResult(config, series, final, gates=gates,
                            times=monitor.times)


def gate_frequencies(kinds):
    """Empirical frequencies of X, ZZ and ZXZ in a gate log."""
    counts = np.bincount(np.asarray(kinds, dtype=np.int64), minlength=3)
    return counts / max(counts.sum(), 1)


def _run_block(config, indices, time_resolved):
    names = list(config.observables)
    record_from = 0 if time_resolved else config.t_measure_from
    if config.average == "final" and not time_resolved:
        record_from = config.t_max - 1
    steady = np.empty((len(indices), len(names)))
    series = (np.empty((len(indices), len(names), config.t_max))
              if time_resolved else None)
    for row, index in enumerate(indices):
        result = run_trajectory(
            config, seed=derive_seed(config.seed, index),
            record_from=record_from)
        values = result.steady_values()
        steady[row] = [values[name] for name in names]
        if time_resolved:
            series[row] = [result.series[name] for name in names]
    return steady, series


def run_ensemble(config, n_samples, n_jobs=1, block_size=None,
                 time_resolved=False, keep_samples=False):
    """Average the observables of ``config`` over ``n_samples`` trajectories.

    Trajectory ``k`` is seeded by ``derive_seed(config.seed, k)`` and blocks
    are reduced in index order, so the records do not depend on ``n_jobs``.

    Returns
    -------
    records: list of EnsembleRecord
        one steady-state record per observable; with ``time_resolved`` it is
        followed by one record per observable and time step (``t`` set)
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1, got %s" % n_samples)
    if block_size is None:
        block_size = max(1, int(np.ceil(n_samples / (4 * max(n_jobs, 1)))))
    blocks = [range(start, min(start + block_size, n_samples))
              for start in range(0, n_samples, block_size)]
    logger.debug("run_ensemble L=%i probs=%s: %i trajectories in %i blocks",
                 config.L, config.probs.tolist(), n_samples, len(blocks))
    results = Parallel(n_jobs=n_jobs)(
        delayed(_run_block)(config, block, time_resolved)
        for block in blocks)
    steady = np.concatenate([r[0] for r in results], axis=0)

    records = []
    for k, name in enumerate(config.observables):
        values = steady[:, k]
        records.append(EnsembleRecord(
            config, name, values.mean(), _stderr(values), n_samples,
            samples=values.copy() if keep_samples else None))

    if time_resolved:
        series = np.concatenate([r[1] for r in results], axis=0)
        for k, name in enumerate(config.observables):
            for step in range(config.t_max):
                values = series[:, k, step]
                records.append(EnsembleRecord(
                    config, name, values.mean(), _stderr(values), n_samples,
                    t=step + 1))
    return records


def _stderr(values):
    if values.shape[0] < 2:
        return 0.
    return values.std(ddof=1) / np.sqrt(values.shape[0])
