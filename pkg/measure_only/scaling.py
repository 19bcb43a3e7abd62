# This files contains the finite-size scaling tools: the collapse error,
# the grid search for (P_c, nu), bootstrap error bars and the growth and
# power-law fits.
import logging

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.stats import linregress
from sklearn.utils import check_random_state

logger = logging.getLogger(__name__)


class ScalingDataset():
    """Observable means on a (P, L) grid.

    Parameters
    ----------
    P: np.array, shape (n_points,)
        swept probability
    L: np.array, shape (n_points,)
        system sizes
    y: np.array, shape (n_points,)
        observable means
    y_err: np.array, shape (n_points,)
        standard errors, zeros when None
    observable: str
        observable identifier
    path: str
        description of the swept path, e.g. "sweep p_x, p_zxz = 0"
    """

    def __init__(self, P, L, y, y_err=None, observable=None, path=None):
        self.P = np.asarray(P, dtype=float)
        self.L = np.asarray(L, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.y_err = (np.zeros_like(self.y) if y_err is None
                      else np.asarray(y_err, dtype=float))
        self.observable = observable
        self.path = path
        n = self.P.shape[0]
        if not (self.L.shape[0] == self.y.shape[0] ==
                self.y_err.shape[0] == n):
            raise ValueError("P, L, y and y_err must have the same length")
        if n < 3:
            raise ValueError("a scaling dataset needs >= 3 points, got %i"
                             % n)
        if np.any(self.y_err < 0):
            raise ValueError("standard errors must be non-negative")

    @classmethod
    def from_frame(cls, df, sweep, observable=None, path=None):
        """Dataset from a result table with columns L, <sweep>, mean,
        stderr (and observable, t when present)."""
        if observable is not None and 'observable' in df:
            df = df[df['observable'] == observable]
        if 't' in df:
            df = df[df['t'] < 0]
        return cls(df[sweep].values, df['L'].values, df['mean'].values,
                   df['stderr'].values, observable=observable, path=path)

    @property
    def sizes(self):
        return np.unique(self.L)

    def subset(self, sizes):
        sel = np.isin(self.L, sizes)
        return ScalingDataset(self.P[sel], self.L[sel], self.y[sel],
                              self.y_err[sel], self.observable, self.path)

    def __len__(self):
        return self.P.shape[0]

    def __repr__(self):
        return "ScalingDataset(%s, n=%i, sizes=%s)" % (
            self.observable, len(self), self.sizes.astype(int).tolist())


class CollapseResult():
    """Outcome of ``find_collapse``.

    Attributes
    ----------
    p_c, nu, epsilon_min: float
    p_c_range, nu_range: tuple
        search window
    n_grid: int
        points per axis of the coarse scan
    trace: list of tuple
        (p_c, nu, epsilon, p_c step, nu step) after the coarse scan and
        after each refinement
    on_boundary: dict
        whether the coarse minimum sits on the edge of the window, per axis
    landscape: tuple
        (p_c grid, nu grid, epsilon matrix) of the coarse scan
    n_skipped: int
        coincident-x terms skipped at the optimum
    p_c_ci, nu_ci: tuple or None
        bootstrap 16-84 percentile intervals
    """

    def __init__(self, p_c, nu, epsilon_min, p_c_range, nu_range, n_grid,
                 trace, on_boundary, landscape, n_skipped=0,
                 observable=None, path=None):
        self.p_c = float(p_c)
        self.nu = float(nu)
        self.epsilon_min = float(epsilon_min)
        self.p_c_range = tuple(p_c_range)
        self.nu_range = tuple(nu_range)
        self.n_grid = n_grid
        self.trace = trace
        self.on_boundary = on_boundary
        self.landscape = landscape
        self.n_skipped = n_skipped
        self.observable = observable
        self.path = path
        self.p_c_ci = None
        self.nu_ci = None

    @property
    def at_boundary(self):
        return any(self.on_boundary.values())

    def to_frame(self):
        """Coarse epsilon landscape as a long table (p_c, nu, epsilon)."""
        p_grid, nu_grid, eps = self.landscape
        pp, nn = np.meshgrid(p_grid, nu_grid, indexing='ij')
        return pd.DataFrame(dict(p_c=pp.ravel(), nu=nn.ravel(),
                                 epsilon=eps.ravel()))

    def to_dict(self):
        out = dict(
            observable=self.observable, path=self.path, p_c=self.p_c,
            nu=self.nu, epsilon_min=self.epsilon_min,
            p_c_range=list(self.p_c_range), nu_range=list(self.nu_range),
            n_grid=self.n_grid, n_refinements=len(self.trace) - 1,
            final_p_c_step=self.trace[-1][3], final_nu_step=self.trace[-1][4],
            p_c_on_boundary=self.on_boundary['p_c'],
            nu_on_boundary=self.on_boundary['nu'],
            n_skipped=self.n_skipped)
        if self.p_c_ci is not None:
            out['p_c_ci'] = list(self.p_c_ci)
            out['nu_ci'] = list(self.nu_ci)
        return out

    def __repr__(self):
        return "CollapseResult(p_c=%.4f, nu=%.3f, epsilon=%.3e%s)" % (
            self.p_c, self.nu, self.epsilon_min,
            ", at boundary" if self.at_boundary else "")


class FitResult():
    """Least-squares fit of one of the models "LogGrowth", "PowerLaw" or
    "AreaLaw"."""

    def __init__(self, model, params, stderr, residual_norm, window,
                 n_points, diagnostics=None):
        self.model = model
        self.params = params
        self.stderr = stderr
        self.residual_norm = float(residual_norm)
        self.window = window
        self.n_points = n_points
        self.diagnostics = diagnostics or {}

    def __getitem__(self, key):
        return self.params[key]

    def to_dict(self):
        out = dict(model=self.model, residual_norm=self.residual_norm,
                   window=self.window, n_points=self.n_points)
        out.update(self.params)
        out.update({"%s_stderr" % k: v for k, v in self.stderr.items()})
        out.update(self.diagnostics)
        return out

    def __repr__(self):
        return "FitResult(%s, %s)" % (self.model, ", ".join(
            "%s=%.4g" % item for item in self.params.items()))


def _reference_at(data, p_c):
    """Each fixed-L sweep linearly interpolated at ``p_c``."""
    ref = np.empty_like(data.y)
    for size in data.sizes:
        sel = data.L == size
        order = np.argsort(data.P[sel])
        ref[sel] = np.interp(p_c, data.P[sel][order], data.y[sel][order])
    return ref


def _rescale(data, p_c, nu, mutual_info=False):
    x = (data.P - p_c) * data.L ** (1. / nu)
    y = data.y
    if mutual_info:
        y = np.abs(y - _reference_at(data, p_c))
    order = np.lexsort((data.P, data.L, x))
    return x[order], y[order], data.y_err[order]


def collapse_error(data, p_c, nu, mutual_info=False, weighted=False,
                   return_diagnostics=False):
    """Collapse error epsilon(p_c, nu).

    Points are sorted by x = (P - p_c) L^(1/nu) (ties broken by L then P);
    each interior point is compared with the straight line through its two
    neighbours, and epsilon is the mean squared deviation over the n - 2
    interior points.

    Parameters
    ----------
    data: ScalingDataset
    p_c: float
        candidate critical probability
    nu: float
        candidate correlation-length exponent, > 0
    mutual_info: bool
        replace y by |y(P, L) - y(p_c, L)| first, y(p_c, L) being
        interpolated linearly along each sweep
    weighted: bool
        weight each term by the inverse of its propagated variance
    return_diagnostics: bool
        also return a dict with the number of skipped coincident terms

    Returns
    -------
    epsilon: float
    """
    if nu <= 0:
        raise ValueError("nu must be positive, got %s" % nu)
    n = len(data)
    x, y, s = _rescale(data, p_c, nu, mutual_info=mutual_info)
    xm, x0, xp = x[:-2], x[1:-1], x[2:]
    ym, y0, yp = y[:-2], y[1:-1], y[2:]
    denom = xp - xm
    valid = denom != 0
    n_skipped = int((~valid).sum())
    denom = denom[valid]
    w_left = (xp - x0)[valid] / denom
    w_right = (x0 - xm)[valid] / denom
    y_tilde = w_left * ym[valid] + w_right * yp[valid]
    res = (y_tilde - y0[valid]) ** 2
    if weighted:
        var = (s[1:-1][valid] ** 2 + (w_left * s[:-2][valid]) ** 2 +
               (w_right * s[2:][valid]) ** 2)
        w = 1. / np.maximum(var, 1e-12)
        eps = np.sum(w * res) / np.sum(w) if w.size else 0.
    else:
        eps = res.sum() / (n - 2)
    if return_diagnostics:
        return eps, dict(n_skipped=n_skipped, n_terms=int(valid.sum()),
                         interpolated_reference=bool(mutual_info))
    return eps


def _scan_row(data, p_c, nu_grid, mutual_info, weighted):
    return np.array([collapse_error(data, p_c, nu, mutual_info=mutual_info,
                                    weighted=weighted) for nu in nu_grid])


def _scan(data, p_grid, nu_grid, mutual_info, weighted, n_jobs):
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_scan_row)(data, p_c, nu_grid, mutual_info, weighted)
        for p_c in p_grid)
    return np.array(rows)


def _local_grid(center, step, factor, lo, hi):
    grid = center + np.arange(-factor, factor + 1) * step
    return np.unique(np.clip(grid, lo, hi))


def find_collapse(data, p_c_range=None, nu_range=(0.8, 2.5), n_grid=101,
                  n_refine=2, refine_factor=10, mutual_info=False,
                  weighted=False, n_jobs=1, verbose=False):
    """Minimise the collapse error over (p_c, nu) by grid descent.

    A coarse ``n_grid`` x ``n_grid`` scan is followed by ``n_refine`` local
    scans, each ``refine_factor`` times finer and spanning one coarse cell
    on both sides of the current minimum. No smoothness is assumed.

    Parameters
    ----------
    data: ScalingDataset
    p_c_range: tuple or None
        search window for p_c, the swept interval when None
    nu_range: tuple
        search window for nu
    n_jobs: int
        number of joblib workers evaluating grid rows

    Returns
    -------
    result: CollapseResult
    """
    if len(data.sizes) < 2:
        raise ValueError("a collapse needs >= 2 distinct sizes, got %s"
                         % data.sizes.tolist())
    if p_c_range is None:
        p_c_range = (data.P.min(), data.P.max())
    p_lo, p_hi = p_c_range
    nu_lo, nu_hi = nu_range
    if not p_lo < p_hi:
        raise ValueError("empty p_c range %s" % (p_c_range,))
    if not 0 < nu_lo < nu_hi:
        raise ValueError("nu range must satisfy 0 < lo < hi, got %s"
                         % (nu_range,))

    p_grid = np.linspace(p_lo, p_hi, n_grid)
    nu_grid = np.linspace(nu_lo, nu_hi, n_grid)
    eps = _scan(data, p_grid, nu_grid, mutual_info, weighted, n_jobs)
    i, j = np.unravel_index(np.nanargmin(eps), eps.shape)
    on_boundary = dict(p_c=bool(i in (0, n_grid - 1)),
                       nu=bool(j in (0, n_grid - 1)))
    best = (p_grid[i], nu_grid[j], eps[i, j])
    dp, dnu = p_grid[1] - p_grid[0], nu_grid[1] - nu_grid[0]
    trace = [best + (dp, dnu)]
    if verbose:
        logger.info("coarse collapse minimum p_c=%.4f nu=%.3f eps=%.3e",
                    *best)
    if any(on_boundary.values()):
        logger.warning("collapse minimum on the search boundary %s, "
                       "the window is too small", on_boundary)

    for _ in range(n_refine):
        p_fine = _local_grid(best[0], dp / refine_factor, refine_factor,
                             p_lo, p_hi)
        nu_fine = _local_grid(best[1], dnu / refine_factor, refine_factor,
                              nu_lo, nu_hi)
        dp, dnu = dp / refine_factor, dnu / refine_factor
        eps_fine = _scan(data, p_fine, nu_fine, mutual_info, weighted,
                         n_jobs)
        i, j = np.unravel_index(np.nanargmin(eps_fine), eps_fine.shape)
        if eps_fine[i, j] <= best[2]:
            best = (p_fine[i], nu_fine[j], eps_fine[i, j])
        trace.append(best + (dp, dnu))
        if verbose:
            logger.info("refined collapse minimum p_c=%.5f nu=%.4f "
                        "eps=%.3e", *best)

    _, diag = collapse_error(data, best[0], best[1], mutual_info=mutual_info,
                             weighted=weighted, return_diagnostics=True)
    return CollapseResult(
        best[0], best[1], best[2], (p_lo, p_hi), (nu_lo, nu_hi), n_grid,
        trace, on_boundary, (p_grid, nu_grid, eps),
        n_skipped=diag['n_skipped'], observable=data.observable,
        path=data.path)


def bootstrap_collapse(data, samples, n_bootstrap=200, seed=0,
                       result=None, n_grid=41, n_refine=1, **kwargs):
    """Bootstrap intervals for (p_c, nu).

    Parameters
    ----------
    data: ScalingDataset
    samples: list of np.array
        per-trajectory values behind each point of ``data``
    n_bootstrap: int
        number of resamples
    result: CollapseResult or None
        when given, its ``p_c_ci`` and ``nu_ci`` are filled in

    Returns
    -------
    p_c_ci, nu_ci: tuple
        16-84 percentile intervals
    estimates: np.array, shape (n_bootstrap, 2)
    """
    if len(samples) != len(data):
        raise ValueError("need one sample array per data point")
    rng = check_random_state(seed)
    estimates = np.empty((n_bootstrap, 2))
    for b in range(n_bootstrap):
        y = np.empty(len(data))
        y_err = np.empty(len(data))
        for k, values in enumerate(samples):
            values = np.asarray(values, dtype=float)
            draw = values[rng.randint(0, values.shape[0], values.shape[0])]
            y[k] = draw.mean()
            y_err[k] = (draw.std(ddof=1) / np.sqrt(draw.shape[0])
                        if draw.shape[0] > 1 else 0.)
        resampled = ScalingDataset(data.P, data.L, y, y_err,
                                   data.observable, data.path)
        fit = find_collapse(resampled, n_grid=n_grid, n_refine=n_refine,
                            **kwargs)
        estimates[b] = fit.p_c, fit.nu
    p_c_ci = tuple(np.percentile(estimates[:, 0], [16, 84]))
    nu_ci = tuple(np.percentile(estimates[:, 1], [16, 84]))
    if result is not None:
        result.p_c_ci, result.nu_ci = p_c_ci, nu_ci
    return p_c_ci, nu_ci, estimates


def crossing_point(data):
    """Crossings of the curves of successive sizes.

    Returns a list of (L_small, L_large, P_cross); P_cross is NaN when the
    curves do not cross on their common P values.
    """
    sizes = data.sizes
    out = []
    for small, large in zip(sizes[:-1], sizes[1:]):
        a = data.L == small
        b = data.L == large
        P = np.intersect1d(data.P[a], data.P[b])
        ya = np.interp(P, *_sorted_curve(data.P[a], data.y[a]))
        yb = np.interp(P, *_sorted_curve(data.P[b], data.y[b]))
        diff = ya - yb
        cross = np.nan
        idx = np.flatnonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)
        if idx.size:
            k = idx[0]
            cross = P[k] - diff[k] * (P[k + 1] - P[k]) / (diff[k + 1] -
                                                          diff[k])
        elif np.any(diff == 0):
            cross = P[np.flatnonzero(diff == 0)[0]]
        out.append((int(small), int(large), float(cross)))
    return out


def _sorted_curve(P, y):
    order = np.argsort(P)
    return P[order], y[order]


def fit_log_growth(t, S, window=None, L=1., z=1.):
    """Fit S = a_t ln(t / L^z) + b.

    With the default L = 1, ``t`` is read in time steps. To pool several
    sizes pass the number of updating steps N as ``t`` together with the
    size of every point, so that N / L^z is the time in time steps.

    Parameters
    ----------
    t: np.array
        time steps, or updating steps when ``L`` is given (> 0)
    S: np.array
        half-chain entropy at those times
    window: tuple or None
        (t_min, t_max) inclusive selection on t
    L: float or np.array
        system size of each point, to pool several sizes
    z: float
        dynamical exponent

    Returns
    -------
    result: FitResult with params a_t and b
    """
    t = np.asarray(t, dtype=float)
    S = np.asarray(S, dtype=float)
    L = np.broadcast_to(np.asarray(L, dtype=float), t.shape)
    sel = np.ones(t.shape, dtype=bool)
    if window is not None:
        sel = (t >= window[0]) & (t <= window[1])
    sel &= t > 0
    if sel.sum() < 5:
        raise ValueError("log-growth fit needs >= 5 points in the window, "
                         "got %i" % sel.sum())
    u = np.log(t[sel] / L[sel] ** z)
    if np.ptp(u) == 0:
        raise ValueError("degenerate window: all points at the same time")
    reg = linregress(u, S[sel])
    resid = S[sel] - (reg.slope * u + reg.intercept)
    return FitResult(
        "LogGrowth", dict(a_t=reg.slope, b=reg.intercept),
        dict(a_t=reg.stderr, b=reg.intercept_stderr),
        np.linalg.norm(resid), window, int(sel.sum()), dict(z=z))


def fit_power_law(d, I, window=None):
    """Fit I = amplitude / d^K on log-log axes.

    Points with I <= 0 cannot enter the fit; they are dropped and counted in
    the diagnostics.
    """
    d = np.asarray(d, dtype=float)
    I = np.asarray(I, dtype=float)
    sel = np.ones(d.shape, dtype=bool)
    if window is not None:
        sel = (d >= window[0]) & (d <= window[1])
    if np.any(d[sel] < 1):
        raise ValueError("distances must be >= 1")
    positive = I > 0
    n_excluded = int((sel & ~positive).sum())
    if n_excluded:
        logger.info("power-law fit: %i non-positive points excluded",
                    n_excluded)
    sel &= positive
    if sel.sum() < 4:
        raise ValueError("power-law fit needs >= 4 positive points, got %i"
                         % sel.sum())
    reg = linregress(np.log(d[sel]), np.log(I[sel]))
    resid = np.log(I[sel]) - (reg.slope * np.log(d[sel]) + reg.intercept)
    return FitResult(
        "PowerLaw", dict(K=-reg.slope, amplitude=np.exp(reg.intercept)),
        dict(K=reg.stderr, amplitude=np.exp(reg.intercept) *
             reg.intercept_stderr),
        np.linalg.norm(resid), window, int(sel.sum()),
        dict(n_excluded=n_excluded))


def fit_area_law(sizes, S, S_err=None):
    """Inverse-variance weighted straight line S = slope * size + intercept.

    Zero standard errors are replaced by the smallest positive one (or 1 if
    there is none), so that exact points do not get infinite weight.
    """
    sizes = np.asarray(sizes, dtype=float)
    S = np.asarray(S, dtype=float)
    if sizes.shape[0] < 3:
        raise ValueError("area-law fit needs >= 3 subsystem sizes")
    if S_err is None:
        S_err = np.ones_like(S)
    S_err = np.asarray(S_err, dtype=float)
    floor = S_err[S_err > 0].min() if np.any(S_err > 0) else 1.
    sigma = np.where(S_err > 0, S_err, floor)
    coef, cov = np.polyfit(sizes, S, 1, w=1. / sigma, cov='unscaled')
    resid = S - np.polyval(coef, sizes)
    return FitResult(
        "AreaLaw", dict(slope=coef[0], intercept=coef[1]),
        dict(slope=np.sqrt(cov[0, 0]), intercept=np.sqrt(cov[1, 1])),
        np.linalg.norm(resid), (sizes.min(), sizes.max()),
        int(sizes.shape[0]))
