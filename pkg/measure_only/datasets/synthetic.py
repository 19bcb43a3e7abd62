"""File to generate synthetic scaling data
"""


import numpy as np

from sklearn.utils import check_random_state

from measure_only.scaling import ScalingDataset


def get_synt_collapse(
        p_c=0.5, nu=4 / 3, sizes=(32, 64, 128), p_grid=None, F=np.tanh,
        noise=0., seed=0):
    """Simulate data obeying y = F((P - p_c) L^(1/nu)).

    Parameters:
    -----------
    p_c: float
        critical probability
    nu: float
        correlation-length exponent
    sizes: tuple of int
        system sizes
    p_grid: np.array
        swept probabilities, 21 points on [p_c - 0.1, p_c + 0.1] when None
    F: callable
        scaling function, strictly monotone for a unique collapse
    noise: float
        standard deviation of the additive Gaussian noise
    seed: int

    Returns
    -------
    data: ScalingDataset
    """
    rng = check_random_state(seed)
    if p_grid is None:
        p_grid = np.linspace(p_c - 0.1, p_c + 0.1, 21)
    P, L = np.meshgrid(np.asarray(p_grid, dtype=float),
                       np.asarray(sizes, dtype=float))
    P, L = P.ravel(), L.ravel()
    y = F((P - p_c) * L ** (1. / nu))
    y_err = np.full_like(y, noise)
    if noise:
        y = y + noise * rng.randn(y.shape[0])
    return ScalingDataset(P, L, y, y_err, observable="synthetic",
                          path="p_c=%g, nu=%g" % (p_c, nu))


def get_synt_growth(a_t=0.27, b=0.78, t=None, L=1., z=1., noise=0.,
                    seed=0):
    """S = a_t ln(t / L^z) + b at the times ``t`` (1..32 when None).

    With L > 1, ``t`` counts updating steps.
    """
    rng = check_random_state(seed)
    t = np.arange(1, 33, dtype=float) if t is None else np.asarray(
        t, dtype=float)
    S = a_t * np.log(t / np.asarray(L, dtype=float) ** z) + b
    if noise:
        S += noise * rng.randn(*S.shape)
    return t, S


def get_synt_power_law(K=0.7, amplitude=1., d=None, noise=0., seed=0):
    """I = amplitude d^(-K), with multiplicative log-normal noise."""
    rng = check_random_state(seed)
    d = np.arange(8, 50, 2, dtype=float) if d is None else np.asarray(
        d, dtype=float)
    I = amplitude * d ** (-K)
    if noise:
        I *= np.exp(noise * rng.randn(*I.shape))
    return d, I
