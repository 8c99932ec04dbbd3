"""Asymptotic Bode plots built directly from generalized approximating functions."""

from .compare import Comparison, compare_methods
from .direct import (
    AsymptoticPhasePlot,
    CriticalSet,
    InconsistentGain,
    MagnitudePlot,
    StepwisePhasePlot,
    approx_function,
    approx_functions,
    asymptotic_phase,
    critical_gains_direct,
    critical_gains_recursive,
    critical_set,
    magnitude_plot,
    relative_degrees,
    stepwise_phase,
)
from .model import (
    ApproxFunction,
    InvalidTerm,
    PolyTerm,
    Side,
    TermAttributes,
    TransferFunction,
    compute_attributes,
    high_freq_approx,
    low_freq_approx,
    validate,
)
from .parser import ParseError, format, parse
from .response import FrequencyGrid, PoleOnAxis, ResponseSample, evaluate, log_grid, sweep

__version__ = "0.1.0"
