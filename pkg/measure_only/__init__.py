import logging

__version__ = '0.1.dev'

logging.getLogger(__name__).addHandler(logging.NullHandler())

from .pauli import PauliString  # noqa: E402
from .stabilizer import StabilizerState  # noqa: E402
from .circuit import CircuitConfig, run_trajectory, run_ensemble  # noqa
from .observables import get_observable  # noqa: E402
from .scaling import (  # noqa: E402
    ScalingDataset, find_collapse, fit_log_growth, fit_power_law)
