"""Signal-to-noise bounds for currents in two-terminal Landauer-Buttiker
thermoelectrics: generalised current statistics, the hyperaccurate and
linear-hyperaccurate SNR, and numerical oracles that check them."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import (BathPair, Boxcar, Constant, DoubleDot, General, Linear,
                   Tabulated, TabulatedWeight, Transmission, WeightFunction,
                   delta_f, energy, eval_transmission, fermi, g_noise,
                   heat_left, heat_right, noise_bracket, particle)
from .currents import (CurrentStats, TransportMoments, covariance_EN,
                       entropy_production, mean_current, snr,
                       transport_moments, tur_bound, variance)
from .errors import (AnalyticityError, ConfigError, ConvergenceError,
                     DegenerateCorrelationError, DegenerateCurrentError,
                     DomainError, EquilibriumError, HypercurrentError)
from .hyper import (HyperResult, LinearHyperResult, epsilon_star, hyper_snr,
                    hyper_weight, linear_hyper, linres_hyper_weight,
                    linres_saturation_check)
from .quadrature import QuadratureSpec, integrate, truncate_domain

__all__ = [
    "AnalyticityError",
    "BACKEND",
    "BathPair",
    "Boxcar",
    "ConfigError",
    "Constant",
    "ConvergenceError",
    "CurrentStats",
    "DegenerateCorrelationError",
    "DegenerateCurrentError",
    "DomainError",
    "DoubleDot",
    "EquilibriumError",
    "General",
    "HyperResult",
    "HypercurrentError",
    "Linear",
    "LinearHyperResult",
    "QuadratureSpec",
    "Tabulated",
    "TabulatedWeight",
    "Transmission",
    "TransportMoments",
    "WeightFunction",
    "covariance_EN",
    "delta_f",
    "energy",
    "entropy_production",
    "epsilon_star",
    "eval_transmission",
    "fermi",
    "g_noise",
    "heat_left",
    "heat_right",
    "hyper_snr",
    "hyper_weight",
    "integrate",
    "linear_hyper",
    "linres_hyper_weight",
    "linres_saturation_check",
    "mean_current",
    "noise_bracket",
    "particle",
    "snr",
    "transport_moments",
    "truncate_domain",
    "tur_bound",
    "variance",
]
