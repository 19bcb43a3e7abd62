# This files contains the experiment layer: experiment specs and their text
# format, constraint lines, presets, the runner and the result writers.
import configparser
import logging
import os
import re
import tempfile
from fractions import Fraction

import numpy as np
import pandas as pd

from measure_only import __version__
from measure_only.circuit import CircuitConfig, run_ensemble, run_trajectory
from measure_only.observables import get_observable
from measure_only.oracle import audit_equivalence, MAX_SITES
from measure_only.percolation import (
    estimate_percolation_exponents, spanning_dataset, transcribe_circuit,
    bond_rates)
from measure_only.scaling import (
    ScalingDataset, find_collapse, bootstrap_collapse, crossing_point,
    fit_log_growth, fit_power_law, fit_area_law)
from measure_only.utils import derive_seed

logger = logging.getLogger(__name__)

NAMES = ("p_x", "p_zz", "p_zxz")
KINDS = ("Sweep", "Collapse", "Growth", "DistanceMI", "Percolation",
         "OracleAudit", "AreaLaw", "InitialState")
COLUMNS = ['kind', 'observable', 'L', 'p_x', 'p_zz', 'p_zxz', 'sweep_value',
           't', 'initial_state', 'mean', 'stderr', 'n_samples', 'seed',
           'version']
KEYS = ('kind', 'observable', 'sweep', 'grid', 'constraint', 'p_x', 'p_zz',
        'p_zxz', 'sizes', 'n_samples', 'seed', 't_max_factor',
        't_measure_factor', 'initial_state', 'output', 'distances',
        'subsystem_sizes', 'window', 'n_bootstrap', 'collapse')

_NUMBER = r'[0-9]*\.?[0-9]+(?:/[0-9]*\.?[0-9]+)?'
_NAME = r'p_x|p_zz|p_zxz'
_RATIO = re.compile(r'^(?:(?P<coef>%s)\s*[*\u00b7]?\s*)?(?P<name>%s)$'
                    % (_NUMBER, _NAME))
_FIXED = re.compile(r'^(?P<value>%s)$' % _NUMBER)


class Constraint():
    """Linear constraint between two probabilities.

    Either ``lhs = ratio * rhs`` or ``lhs = value``, written e.g.
    "p_x = 3 p_zz", "p_x = 3*p_zz", "p_x = 3·p_zz", "p_zz = 1/3 p_x" or
    "p_zxz = 0". Ratios and values are decimals or fractions.
    """

    def __init__(self, lhs, rhs=None, ratio=None, value=None):
        if lhs not in NAMES or (rhs is not None and rhs not in NAMES):
            raise ValueError("constraint names must be in %s" % (NAMES,))
        if rhs == lhs:
            raise ValueError("constraint relates %s to itself" % lhs)
        if (rhs is None) == (value is None):
            raise ValueError("constraint needs either a ratio or a value")
        if ratio is not None and ratio < 0:
            raise ValueError("constraint ratio must be >= 0, got %s" % ratio)
        self.lhs = lhs
        self.rhs = rhs
        self.ratio = None if ratio is None else float(ratio)
        self.value = None if value is None else float(value)

    @classmethod
    def parse(cls, text):
        lhs, sep, rhs = text.partition('=')
        lhs, rhs = lhs.strip(), rhs.strip()
        if not sep or lhs not in NAMES:
            raise ValueError("cannot parse constraint %r, expected e.g. "
                             "'p_x = 3 p_zz' or 'p_zxz = 0'" % text)
        match = _FIXED.match(rhs)
        if match:
            return cls(lhs, value=Fraction(match.group('value')))
        match = _RATIO.match(rhs)
        if match:
            coef = match.group('coef')
            ratio = Fraction(coef) if coef else Fraction(1)
            return cls(lhs, rhs=match.group('name'), ratio=ratio)
        raise ValueError("cannot parse constraint %r" % text)

    @property
    def is_fixed(self):
        return self.value is not None

    def __str__(self):
        if self.is_fixed:
            return "%s = %g" % (self.lhs, self.value)
        return "%s = %g %s" % (self.lhs, self.ratio, self.rhs)

    def __repr__(self):
        return "Constraint(%r)" % str(self)


def resolve_constraint(constraint, sweep, value):
    """Probability triple on a constraint line at a swept value.

    Parameters
    ----------
    constraint: Constraint or str
        relation between the two probabilities that are not swept
    sweep: str
        "p_x", "p_zz" or "p_zxz"
    value: float
        swept probability

    Returns
    -------
    (p_x, p_zz, p_zxz): tuple of float, summing to one
    """
    if isinstance(constraint, str):
        constraint = Constraint.parse(constraint)
    if sweep not in NAMES:
        raise ValueError("sweep must be one of %s, got %r" % (NAMES, sweep))
    if not 0 <= value <= 1:
        raise ValueError("swept %s = %s outside [0, 1]" % (sweep, value))
    if sweep in (constraint.lhs, constraint.rhs):
        raise ValueError("constraint %s involves the swept parameter %s"
                         % (constraint, sweep))
    probs = {sweep: float(value)}
    rest = 1. - value
    if constraint.is_fixed:
        other, = set(NAMES) - {sweep, constraint.lhs}
        probs[constraint.lhs] = constraint.value
        probs[other] = rest - constraint.value
    else:
        probs[constraint.rhs] = rest / (1 + constraint.ratio)
        probs[constraint.lhs] = constraint.ratio * probs[constraint.rhs]
    for name in NAMES:
        if not -1e-12 <= probs[name] <= 1 + 1e-12:
            raise ValueError(
                "%s = %.6g leaves [0, 1] at %s = %s on the line %s"
                % (name, probs[name], sweep, value, constraint))
    return tuple(float(np.clip(probs[name], 0, 1)) for name in NAMES)


def parse_grid(text):
    """'start:stop:step' (stop included) or a comma separated list."""
    text = text.strip()
    if ':' in text:
        parts = [float(Fraction(s)) for s in text.split(':')]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError("grid %r must read start:stop:step with "
                             "step > 0" % text)
        start, stop, step = parts
        n = int(round((stop - start) / step))
        return np.round(start + step * np.arange(n + 1), 10)
    return np.array([float(Fraction(s)) for s in text.split(',')
                     if s.strip()])


def _parse_ints(text):
    return tuple(int(round(v)) for v in parse_grid(text))


class ExperimentSpec():
    """Description of one experiment.

    The probability points come either from ``sweep``, ``grid`` and
    ``constraint``, or from a fixed triple ``p_x``, ``p_zz``, ``p_zxz``.
    Sizes enter through ``sizes``; time scales are multiples of L.
    """

    def __init__(self, kind, observable="half_chain", sweep=None, grid=None,
                 constraint=None, p_x=None, p_zz=None, p_zxz=None,
                 sizes=(16, 32, 64), n_samples=2000, seed=0,
                 t_max_factor=4., t_measure_factor=2., initial_state="plus",
                 output=None, distances=None, subsystem_sizes=None,
                 window=None, n_bootstrap=0, collapse=None):
        self.kind = kind
        self.observable = observable
        self.sweep = sweep
        self.grid = None if grid is None else np.asarray(grid, dtype=float)
        if isinstance(constraint, str):
            constraint = Constraint.parse(constraint)
        self.constraint = constraint
        self.p_x, self.p_zz, self.p_zxz = p_x, p_zz, p_zxz
        self.sizes = tuple(int(s) for s in sizes)
        self.n_samples = int(n_samples)
        self.seed = int(seed)
        self.t_max_factor = float(t_max_factor)
        self.t_measure_factor = float(t_measure_factor)
        self.initial_state = initial_state
        self.output = output
        self.distances = None if distances is None else tuple(distances)
        self.subsystem_sizes = (None if subsystem_sizes is None
                                else tuple(subsystem_sizes))
        self.window = None if window is None else tuple(window)
        self.n_bootstrap = int(n_bootstrap)
        self.collapse = kind == "Collapse" if collapse is None else collapse
        self.validate()

    @property
    def fixed_triple(self):
        values = (self.p_x, self.p_zz, self.p_zxz)
        if all(v is not None for v in values):
            return tuple(float(v) for v in values)
        return None

    def points(self):
        """List of (sweep_value, (p_x, p_zz, p_zxz))."""
        triple = self.fixed_triple
        if triple is not None:
            value = (triple[NAMES.index(self.sweep)] if self.sweep
                     else np.nan)
            return [(value, triple)]
        return [(value, resolve_constraint(self.constraint, self.sweep,
                                           value))
                for value in self.grid]

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError("unknown experiment kind %r, expected one of %s"
                             % (self.kind, KINDS))
        if not self.sizes:
            raise ValueError("sizes must not be empty")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1, got %i"
                             % self.n_samples)
        if self.grid is not None and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing, got %s"
                             % self.grid.tolist())
        if self.kind == "Percolation":
            if self.grid is None:
                raise ValueError("Percolation needs a grid of bond "
                                 "probabilities")
            if self.grid.min() < 0 or self.grid.max() > 1:
                raise ValueError("bond probabilities must lie in [0, 1]")
            return
        if self.kind == "OracleAudit":
            if self.sizes[0] > MAX_SITES:
                raise ValueError("OracleAudit needs L <= %i, got %i"
                                 % (MAX_SITES, self.sizes[0]))
            return
        if self.fixed_triple is None:
            if self.sweep is None or self.grid is None or \
                    self.constraint is None:
                raise ValueError(
                    "%s needs either sweep, grid and constraint or all of "
                    "p_x, p_zz, p_zxz" % self.kind)
        elif abs(sum(self.fixed_triple) - 1) > 1e-9:
            raise ValueError("p_x + p_zz + p_zxz must equal 1, got %.12g"
                             % sum(self.fixed_triple))
        self.points()
        if self.kind == "DistanceMI" and not self.distances:
            raise ValueError("DistanceMI needs distances")
        if self.kind == "AreaLaw" and not self.subsystem_sizes:
            raise ValueError("AreaLaw needs subsystem_sizes")
        for L in self.sizes:
            for name in self.observables():
                get_observable(name).check(L)

    def observables(self):
        if self.kind == "DistanceMI":
            return tuple("mi_dist:%i" % d for d in self.distances)
        if self.kind == "AreaLaw":
            return tuple("sub:%i" % s for s in self.subsystem_sizes)
        if self.kind in ("Growth", "InitialState"):
            return ("half_chain",)
        return (self.observable,)

    def circuit_config(self, L, triple, seed, initial_state=None):
        t_max = int(round(self.t_max_factor * L))
        return CircuitConfig(
            L, *triple, t_max=t_max,
            t_measure_from=min(int(round(self.t_measure_factor * L)),
                               t_max - 1),
            initial_state=initial_state or self.initial_state, seed=seed,
            observables=self.observables())

    def to_dict(self):
        return dict(
            kind=self.kind, observable=self.observable, sweep=self.sweep,
            grid=None if self.grid is None else self.grid.tolist(),
            constraint=None if self.constraint is None
            else str(self.constraint),
            p_x=self.p_x, p_zz=self.p_zz, p_zxz=self.p_zxz,
            sizes=list(self.sizes), n_samples=self.n_samples, seed=self.seed,
            t_max_factor=self.t_max_factor,
            t_measure_factor=self.t_measure_factor,
            initial_state=self.initial_state, output=self.output,
            distances=self.distances, subsystem_sizes=self.subsystem_sizes,
            window=self.window, n_bootstrap=self.n_bootstrap,
            collapse=self.collapse)

    def __repr__(self):
        return "ExperimentSpec(%s, sizes=%s, N=%i)" % (
            self.kind, list(self.sizes), self.n_samples)


def parse_spec(text):
    """ExperimentSpec from ``key = value`` lines with ``#`` comments."""
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=('#',))
    try:
        parser.read_string('[experiment]\n' + text)
    except configparser.Error as e:
        raise ValueError("malformed spec: %s" % e)
    raw = dict(parser['experiment'])
    unknown = sorted(set(raw) - set(KEYS))
    if unknown:
        raise ValueError("unknown spec keys %s, expected a subset of %s"
                         % (unknown, KEYS))
    if 'kind' not in raw:
        raise ValueError("spec must define 'kind'")
    params = {}
    for key, value in raw.items():
        if key in ('p_x', 'p_zz', 'p_zxz'):
            params[key] = float(Fraction(value))
        elif key == 'grid':
            params[key] = parse_grid(value)
        elif key in ('sizes', 'distances', 'subsystem_sizes'):
            params[key] = _parse_ints(value)
        elif key in ('n_samples', 'seed', 'n_bootstrap'):
            params[key] = int(value)
        elif key in ('t_max_factor', 't_measure_factor'):
            params[key] = float(value)
        elif key == 'window':
            params[key] = tuple(float(v) for v in value.split(':'))
            if len(params[key]) != 2:
                raise ValueError("window must read lo:hi, got %r" % value)
        elif key == 'collapse':
            if value.lower() not in parser.BOOLEAN_STATES:
                raise ValueError("collapse must be a boolean, got %r"
                                 % value)
            params[key] = parser.BOOLEAN_STATES[value.lower()]
        else:
            params[key] = value
    return ExperimentSpec(**params)


def read_spec(path):
    with open(path, 'r', encoding='utf-8') as f:
        return parse_spec(f.read())


class ExperimentResult():
    """Records of a run (``frame``) and its analysis (``summary``)."""

    def __init__(self, spec, frame, summary):
        self.spec = spec
        self.frame = frame
        self.summary = summary

    def write(self, path=None):
        path = path or self.spec.output
        if path is None:
            raise ValueError("no output path given")
        write_results(self.frame, path)
        write_summary(self.summary, path + '.result.txt')
        return path


def _atomic_write(path, write):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            write(f)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_results(frame, path):
    """CSV with a header row, written to a temporary file then renamed."""
    _atomic_write(path, lambda f: frame.to_csv(f, index=False))


def read_results(path):
    return pd.read_csv(path)


def flatten_summary(summary, prefix=''):
    for key, value in summary.items():
        if isinstance(value, dict):
            yield from flatten_summary(value, prefix + str(key) + '.')
        else:
            yield prefix + str(key), value


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return '[%s]' % ', '.join(format_value(v) for v in value)
    return str(value)


def write_summary(summary, path):
    """``key = value`` lines, nested keys joined with dots."""
    lines = ['%s = %s\n' % (key, format_value(value))
             for key, value in flatten_summary(summary)]
    _atomic_write(path, lambda f: f.writelines(lines))


def _rows(spec, records, sweep_value, initial_state=None):
    rows = []
    for record in records:
        row = record.to_dict()
        row.update(kind=spec.kind, sweep_value=sweep_value)
        if initial_state is not None:
            row['initial_state'] = initial_state
        rows.append(row)
    return rows


def _frame(rows):
    return pd.DataFrame(rows, columns=COLUMNS)


def _ensembles(spec, n_jobs, time_resolved=False, keep_samples=False,
               initial_states=None, verbose=False):
    """Run every (size, point) cell; cell (L, k) is seeded by
    ``derive_seed(spec.seed, L, k)``."""
    rows, samples = [], []
    points = spec.points()
    initial_states = initial_states or (spec.initial_state,)
    n_cells = len(spec.sizes) * len(points) * len(initial_states)
    cell = 0
    for L in spec.sizes:
        for k, (value, triple) in enumerate(points):
            for state in initial_states:
                cell += 1
                config = spec.circuit_config(
                    L, triple, derive_seed(spec.seed, L, k),
                    initial_state=state)
                records = run_ensemble(
                    config, spec.n_samples, n_jobs=n_jobs,
                    time_resolved=time_resolved, keep_samples=keep_samples)
                rows += _rows(spec, records, value)
                samples += [r.samples for r in records if r.t is None]
                if verbose:
                    logger.info("cell %i / %i: L=%i %s=%s %s", cell,
                                n_cells, L, spec.sweep, value, state)
    return _frame(rows), samples


def _steady(frame):
    return frame[frame['t'] < 0]


def _run_sweep(spec, n_jobs, verbose):
    keep = spec.collapse and spec.n_bootstrap > 0
    frame, samples = _ensembles(spec, n_jobs, keep_samples=keep,
                                verbose=verbose)
    steady = _steady(frame)
    path = "sweep %s, %s" % (spec.sweep, spec.constraint)
    summary = {}
    if len(steady) >= 3 and len(spec.sizes) >= 2:
        data = ScalingDataset(
            steady['sweep_value'], steady['L'], steady['mean'],
            steady['stderr'], observable=spec.observable, path=path)
        summary['crossings'] = {
            "%i-%i" % (a, b): p for a, b, p in crossing_point(data)}
        if spec.collapse:
            mutual_info = spec.observable.startswith('mi_')
            result = find_collapse(data, mutual_info=mutual_info,
                                   n_jobs=n_jobs, verbose=verbose)
            if spec.n_bootstrap:
                bootstrap_collapse(
                    data, samples, n_bootstrap=spec.n_bootstrap,
                    seed=spec.seed, result=result, mutual_info=mutual_info,
                    n_jobs=n_jobs)
            summary['collapse'] = result.to_dict()
    elif spec.collapse:
        raise ValueError("a collapse needs >= 2 sizes and >= 3 points")
    return frame, summary


def _run_growth(spec, n_jobs, verbose):
    frame, _ = _ensembles(spec, n_jobs, time_resolved=True,
                          verbose=verbose)
    lo, hi = spec.window or (0., 0.5)
    summary = {}
    for value in frame['sweep_value'].unique():
        early = frame[(frame['sweep_value'] == value) & (frame['t'] > 0)]
        u = early['t'] / early['L']
        early = early[(u > lo) & (u <= hi)]
        key = "%s=%g" % (spec.sweep, value)
        # pooled over sizes in updating steps N = t L
        fit = fit_log_growth(early['t'] * early['L'], early['mean'],
                             L=early['L'], z=1.)
        summary[key] = dict(pooled=fit.to_dict())
        for L, group in early.groupby('L', dropna=False):
            try:
                summary[key]["L=%i" % L] = fit_log_growth(
                    group['t'], group['mean']).to_dict()
            except ValueError as e:
                logger.warning("no log-growth fit at L=%i: %s", L, e)
    return frame, summary


def _run_distance_mi(spec, n_jobs, verbose):
    frame, _ = _ensembles(spec, n_jobs, verbose=verbose)
    steady = _steady(frame)
    summary = {}
    for (value, L), group in steady.groupby(['sweep_value', 'L'],
                                            dropna=False):
        d = group['observable'].str.split(':').str[1].astype(int)
        fit = fit_power_law(d.values, group['mean'].values,
                            window=spec.window)
        summary["%s=%g.L=%i" % (spec.sweep, value, L)] = fit.to_dict()
    return frame, summary


def _run_area_law(spec, n_jobs, verbose):
    frame, _ = _ensembles(spec, n_jobs, verbose=verbose)
    steady = _steady(frame)
    summary = {}
    for (value, L), group in steady.groupby(['sweep_value', 'L'],
                                            dropna=False):
        sizes = group['observable'].str.split(':').str[1].astype(int)
        fit = fit_area_law(sizes.values, group['mean'].values,
                           group['stderr'].values)
        summary["%s=%g.L=%i" % (spec.sweep, value, L)] = fit.to_dict()
    return frame, summary


def _run_initial_state(spec, n_jobs, verbose):
    frame, _ = _ensembles(spec, n_jobs, time_resolved=True,
                          initial_states=("plus", "zero"), verbose=verbose)
    steady = _steady(frame)
    summary = {}
    for (value, L), group in steady.groupby(['sweep_value', 'L'],
                                            dropna=False):
        means = dict(zip(group['initial_state'], group['mean']))
        errs = dict(zip(group['initial_state'], group['stderr']))
        summary["%s=%g.L=%i" % (spec.sweep, value, L)] = dict(
            plus=means['plus'], zero=means['zero'],
            difference=means['plus'] - means['zero'],
            difference_stderr=float(np.hypot(errs['plus'], errs['zero'])))
    return frame, summary


def bond_rate_audit(triple, n_sites=16, n_updates=100000, seed=0):
    """Bond rates of a transcribed P_X = 0 circuit against their targets."""
    p_x, p_zz, p_zxz = triple
    if p_x != 0:
        raise ValueError("the bond map needs p_x = 0, got %s" % p_x)
    t_max = int(np.ceil(n_updates / n_sites))
    config = CircuitConfig(n_sites, p_x, p_zz, p_zxz, t_max=t_max,
                           seed=seed)
    gates = run_trajectory(config, record_from=t_max - 1,
                           record_gates=True).gates
    rates = bond_rates(transcribe_circuit(gates, n_sites))
    rates['horizontal_target'] = p_zxz / 2
    rates['vertical_target'] = (1 - p_zz) / 2
    for name in ('horizontal', 'vertical'):
        err = max(rates[name + '_stderr'], 1e-12)
        rates[name + '_z'] = (rates[name] - rates[name + '_target']) / err
    return rates


def _run_percolation(spec, n_jobs, verbose):
    summary = {}
    if len(set(spec.sizes)) >= 3:
        result, data = estimate_percolation_exponents(
            spec.sizes, spec.grid, spec.n_samples, seed=spec.seed,
            n_jobs=n_jobs, return_data=True, verbose=verbose)
        summary['collapse'] = result.to_dict()
    else:
        data = spanning_dataset(spec.sizes, spec.grid, spec.n_samples,
                                seed=spec.seed, n_jobs=n_jobs)
    summary['crossings'] = {
        "%i-%i" % (a, b): p for a, b, p in crossing_point(data)}
    if spec.fixed_triple is not None:
        summary['bond_rates'] = bond_rate_audit(spec.fixed_triple,
                                                seed=spec.seed)
    frame = _frame([dict(
        kind=spec.kind, observable="spanning", L=int(L), p_x=np.nan,
        p_zz=np.nan, p_zxz=np.nan, sweep_value=P, t=-1, initial_state="",
        mean=y, stderr=err, n_samples=spec.n_samples, seed=spec.seed,
        version=__version__)
        for P, L, y, err in zip(data.P, data.L, data.y, data.y_err)])
    return frame, summary


def _run_audit(spec, n_jobs, verbose):
    L = spec.sizes[0]
    probs = spec.fixed_triple or (1 / 3, 1 / 3, 1 / 3)
    report = audit_equivalence(
        n_circuits=spec.n_samples, n_sites=L,
        n_updates=int(round(spec.t_max_factor * L)), seed=spec.seed,
        probs=probs, verbose=verbose)
    if not report.passed:
        raise ValueError("oracle audit failed: %r" % report)
    return _frame([]), dict(audit=report.to_dict())


_RUNNERS = dict(
    Sweep=_run_sweep, Collapse=_run_sweep, Growth=_run_growth,
    DistanceMI=_run_distance_mi, AreaLaw=_run_area_law,
    InitialState=_run_initial_state, Percolation=_run_percolation,
    OracleAudit=_run_audit)


def run_experiment(spec, n_jobs=1, verbose=False, write=True):
    """Run ``spec`` and, when it names an output, persist the records.

    The CSV and its ``.result.txt`` sidecar only depend on the spec and its
    seed, not on ``n_jobs``.

    Returns
    -------
    result: ExperimentResult
    """
    logger.info("running %r", spec)
    frame, summary = _RUNNERS[spec.kind](spec, n_jobs, verbose)
    summary = dict(spec=spec.to_dict(), version=__version__, **summary)
    result = ExperimentResult(spec, frame, summary)
    if write and spec.output:
        result.write()
        logger.info("wrote %s", spec.output)
    return result


SCALES = dict(
    desk=dict(sizes=(16, 32, 64), n_samples=2000),
    paper=dict(sizes=(32, 64, 128, 256), n_samples=10000))

_UPPER = "0.35:0.65:0.01"
_LOWER = "0.35:0.65:0.01"
_BOUNDARY = "0.3:0.7:0.02"

# name -> list of spec parameters, with optional per-scale overrides
PRESETS = {
    'fig4': [dict(kind="AreaLaw", sweep=sweep, grid=[0.7],
                  constraint=constraint, sizes=(128,),
                  subsystem_sizes=tuple(range(8, 49, 8)),
                  desk=dict(n_samples=200))
             for sweep, constraint in (("p_zxz", "p_x = p_zz"),
                                       ("p_zz", "p_x = p_zxz"),
                                       ("p_x", "p_zz = p_zxz"))],
    # centre of the phase diagram
    'initial_state': [dict(kind="InitialState", sweep="p_zxz", p_x=1 / 3,
                           p_zz=1 / 3, p_zxz=1 / 3, sizes=(128,),
                           desk=dict(n_samples=500))],
    'fig5a': [dict(kind="Collapse", observable="mi_probe", sweep="p_x",
                   grid=_BOUNDARY, constraint="p_zxz = 0")],
    'fig5b': [dict(kind="Collapse", observable="s_topo", sweep="p_x",
                   grid=_BOUNDARY, constraint="p_zz = 0")],
    'fig5c': [dict(kind="Collapse", observable="s_topo", sweep="p_zz",
                   grid=_BOUNDARY, constraint="p_x = 0")],
    'fig6a': [dict(kind="Collapse", observable="s_topo", sweep="p_zxz",
                   grid=_UPPER, constraint="p_x = 3 p_zz")],
    'fig6b': [dict(kind="Collapse", observable="s_topo", sweep="p_zxz",
                   grid=_UPPER, constraint="p_x = p_zz")],
    'fig6c': [dict(kind="Collapse", observable="s_topo", sweep="p_zxz",
                   grid=_UPPER, constraint="p_x = 1/3 p_zz")],
    'fig7a': [dict(kind="Collapse", observable="mi_probe", sweep="p_x",
                   grid=_LOWER, constraint="p_zxz = 3 p_zz")],
    'fig7b': [dict(kind="Collapse", observable="mi_probe", sweep="p_x",
                   grid=_LOWER, constraint="p_zxz = p_zz")],
    'fig7c': [dict(kind="Collapse", observable="mi_probe", sweep="p_x",
                   grid=_LOWER, constraint="p_zxz = 1/3 p_zz")],
    'fig8a': [dict(kind="Growth", sweep="p_zxz", grid=[0.508],
                   constraint="p_x = p_zz", sizes=(32, 64, 128),
                   desk=dict(n_samples=200))],
    'fig8b': [dict(kind="Growth", sweep="p_x", grid=[0.517],
                   constraint="p_zz = p_zxz", sizes=(32, 64, 128),
                   desk=dict(n_samples=200))],
    'fig9a': [dict(kind="DistanceMI", sweep="p_x", grid=[0.5],
                   constraint="p_zxz = 0", sizes=(128,),
                   distances=tuple(range(8, 49, 2)), window=(8, 48),
                   desk=dict(n_samples=500))],
    'fig9b': [dict(kind="DistanceMI", sweep="p_x", grid=[0.517],
                   constraint="p_zz = p_zxz", sizes=(128,),
                   distances=tuple(range(8, 49, 2)), window=(8, 48),
                   desk=dict(n_samples=500))],
    'percolation': [dict(kind="Percolation", grid="0.4:0.6:0.01",
                         p_x=0., p_zz=0.5, p_zxz=0.5,
                         desk=dict(sizes=(16, 32, 64), n_samples=500),
                         paper=dict(sizes=(32, 64, 128), n_samples=2000))],
    'audit': [dict(kind="OracleAudit", sizes=(8,), n_samples=100,
                   t_max_factor=8.)],
}


def get_preset(name, scale="desk", seed=0, output=None):
    """Experiment specs of a preset.

    Parameters
    ----------
    name: str
        one of ``PRESETS``
    scale: str
        "desk" (sizes 16, 32, 64 and N = 2000) or "paper" (sizes 32 to 256
        and N = 10^4); sizes and N fixed by the preset win over the scale
    output: str or None
        output stem; a preset with several specs numbers its files

    Returns
    -------
    specs: list of ExperimentSpec
    """
    if name not in PRESETS:
        raise ValueError("unknown preset %r, expected one of %s"
                         % (name, sorted(PRESETS)))
    if scale not in SCALES:
        raise ValueError("scale must be one of %s, got %r"
                         % (sorted(SCALES), scale))
    entries = PRESETS[name]
    specs = []
    for k, entry in enumerate(entries):
        params = dict(SCALES[scale])
        params.update({key: value for key, value in entry.items()
                       if key not in SCALES})
        params.update(entry.get(scale, {}))
        if isinstance(params.get('grid'), str):
            params['grid'] = parse_grid(params['grid'])
        params['seed'] = seed
        if output is not None:
            stem, ext = os.path.splitext(output)
            params['output'] = (output if len(entries) == 1 else
                                "%s-%i%s" % (stem, k + 1, ext or '.csv'))
        specs.append(ExperimentSpec(**params))
    return specs
