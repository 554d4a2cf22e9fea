"""Hyperaccurate currents: the SNR-optimal weight function, its
restriction to linear weights, and the linear-response limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import BathPair, General, Linear, Transmission, WeightFunction
from .currents import TransportMoments, transport_moments
from .errors import DegenerateCorrelationError, EquilibriumError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_energy

RHO_LIMIT = 1.0 - 1e-12


@dataclass(frozen=True)
class HyperResult:
    h_hyp: WeightFunction
    S_hyp: float


@dataclass(frozen=True)
class LinearHyperResult:
    a: float
    b: float
    S_lhyp: float
    fisher_corr: float
    S_E: float
    S_N: float

    @property
    def weight(self) -> Linear:
        return Linear(self.a, self.b)


def _hyper_weight_array(T, baths, eps):
    df, g = kernels.lead_terms(eps, baths.beta_L, baths.mu_L,
                               baths.beta_R, baths.mu_R)
    denom = g + df * df * (1.0 - T._eval(eps))
    return np.where(denom > 0, df / np.where(denom > 0, denom, 1.0), 0.0)


def hyper_weight(T: Transmission, baths: BathPair, eps):
    """h_hyp(eps) = df / (g + df**2 (1 - T)), unnormalised."""
    arr = np.asarray(eps, dtype=float)
    out = _hyper_weight_array(T, baths, arr.reshape(-1)).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def hyper_weight_function(T: Transmission, baths: BathPair) -> General:
    return General(lambda e: _hyper_weight_array(T, baths, e), name="h_hyp")


def hyper_snr(T: Transmission, baths: BathPair,
              spec: QuadratureSpec = DEFAULT_SPEC) -> HyperResult:
    """Largest SNR over all weight functions,

    S_hyp = int T df**2 / (g + df**2 (1 - T)),

    together with the weight attaining it.
    """
    h = hyper_weight_function(T, baths)
    if baths.is_equilibrium:
        return HyperResult(h, 0.0)
    bl, ml, br, mr = baths.beta_L, baths.mu_L, baths.beta_R, baths.mu_R

    def density(e):
        return kernels.moment_integrands(e, T._eval(e), bl, ml, br, mr)[5]
    value, _ = integrate_energy(density, baths, T, spec)
    return HyperResult(h, value)


def linear_snr_formula(S_E: float, S_N: float, rho_F: float,
                       same_sign: bool = True) -> float:
    """(S_E + S_N - 2 rho s sqrt(S_E S_N)) / (1 - rho**2), where s = +1
    when the energy and particle currents share a sign and -1 otherwise."""
    s = 1.0 if same_sign else -1.0
    return (S_E + S_N - 2.0 * rho_F * s * math.sqrt(S_E * S_N)) / (1.0 - rho_F ** 2)


def linear_hyper_from_moments(m: TransportMoments) -> LinearHyperResult:
    rho = m.rho_F
    if not abs(rho) < RHO_LIMIT:
        raise DegenerateCorrelationError(
            f"|rho_F| = {abs(rho):.15f}: energy and particle fluctuations are "
            "proportional, the linear optimum is not unique")
    a = m.J_E * m.Delta_N - m.J_N * m.C
    b = m.J_N * m.Delta_E - m.J_E * m.C
    # J^T Sigma^-1 J for Sigma = [[Delta_E, C], [C, Delta_N]]
    det = m.Delta_E * m.Delta_N - m.C * m.C
    S = (m.J_E ** 2 * m.Delta_N - 2 * m.J_E * m.J_N * m.C
         + m.J_N ** 2 * m.Delta_E) / det
    return LinearHyperResult(a=a, b=b, S_lhyp=S, fisher_corr=rho,
                             S_E=m.J_E ** 2 / m.Delta_E,
                             S_N=m.J_N ** 2 / m.Delta_N)


def linear_hyper(T: Transmission, baths: BathPair,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> LinearHyperResult:
    """Best SNR among linear weights h = a eps + b.

    The optimal coefficients are a = J_E Delta_N - J_N C and
    b = J_N Delta_E - J_E C (up to scale).
    """
    return linear_hyper_from_moments(transport_moments(T, baths, spec))


def linres_hyper_weight(baths: BathPair) -> Linear:
    """Linear-response optimum h = d_beta eps - d_betamu."""
    if baths.delta_beta == 0 and baths.delta_betamu == 0:
        raise EquilibriumError("no gradients: the weight vanishes identically")
    return Linear(baths.delta_beta, -baths.delta_betamu)


def epsilon_star(baths: BathPair) -> float:
    """d_betamu / d_beta; the linear-response optimum is J_E - eps* J_N."""
    if baths.delta_beta == 0:
        raise ZeroDivisionError(
            "delta_beta = 0: isothermal leads, the particle current itself "
            "is optimal in linear response")
    return baths.delta_betamu / baths.delta_beta


def linres_saturation_check(T: Transmission, baths: BathPair,
                            spec: QuadratureSpec = DEFAULT_SPEC):
    """Return ``(S_hyp, sigma / 2, S_hyp / (sigma / 2))``."""
    if baths.is_equilibrium:
        raise EquilibriumError("S_hyp and sigma both vanish at equilibrium")
    m = transport_moments(T, baths, spec)
    half_sigma = 0.5 * m.sigma
    return m.S_hyp, half_sigma, m.S_hyp / half_sigma
