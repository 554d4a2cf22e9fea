"""Mean, variance and SNR of generalised Landauer-Buttiker currents.

For a weight function h(eps):

    J_h     = int h T df
    Delta_h = int h**2 T [f_L + f_R - 2 f_L f_R - T df**2]
    S_h     = J_h**2 / Delta_h

``Delta`` always denotes the variance rate (not its square root).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import BathPair, Transmission, WeightFunction, energy, particle
from .errors import DegenerateCurrentError
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, breakpoints,
                         integrate_energy, truncate_domain)


@dataclass(frozen=True)
class CurrentStats:
    J: float
    Delta: float
    S: float


@dataclass(frozen=True)
class TransportMoments:
    """Everything the SNR bounds need, from one vector-valued integral.

    ``C`` is the energy-particle covariance and ``sigma`` the entropy
    production evaluated directly from its integrand.
    """

    J_N: float
    J_E: float
    Delta_N: float
    Delta_E: float
    C: float
    S_hyp: float
    sigma: float

    def linear_stats(self, a: float, b: float) -> CurrentStats:
        """Statistics of h = a eps + b from bilinearity, no new integral."""
        J = a * self.J_E + b * self.J_N
        D = a * a * self.Delta_E + 2 * a * b * self.C + b * b * self.Delta_N
        return CurrentStats(J, D, J * J / D if D > 0 else 0.0)

    @property
    def rho_F(self) -> float:
        return self.C / np.sqrt(self.Delta_E * self.Delta_N)


def _stack(T, baths):
    bl, ml, br, mr = baths.beta_L, baths.mu_L, baths.beta_R, baths.mu_R
    return lambda e: kernels.moment_integrands(e, T._eval(e), bl, ml, br, mr)


def transport_moments(T: Transmission, baths: BathPair,
                      spec: QuadratureSpec = DEFAULT_SPEC) -> TransportMoments:
    values, _ = integrate_energy(_stack(T, baths), baths, T, spec)
    return TransportMoments(*(float(v) for v in values))


def _weight_scale(h, T, baths, spec):
    """Typical size of ``h`` where the noise lives.

    The rms of h on a pilot grid, weighted by the variance density T B.
    Weights are divided by it before integration so that ``abs_tol``
    applies to a unit-size weight: a weight scaled by 1e-8 would otherwise
    see its variance swamped by the absolute tolerance, and a cubic weight
    would be judged by its size in the far tails.
    """
    lo, hi = truncate_domain(baths, T, spec)
    pilot = np.concatenate([np.linspace(lo, hi, 257),
                            breakpoints(baths, T, (lo, hi))])
    hv = np.abs(h._eval(pilot))
    dens = _stack(T, baths)(pilot)[2]
    total = float(dens.sum())
    if total > 0:
        rms = float(np.sqrt(np.dot(dens, hv * hv) / total))
        if rms > 0 and np.isfinite(rms):
            return rms
    peak = float(np.max(hv))
    return peak if peak > 0 and np.isfinite(peak) else 1.0


def _weighted(h, T, baths, scale):
    """Integrand stack [h T df, h**2 T B] for the weight h / scale."""
    base = _stack(T, baths)

    def func(e):
        rows = base(e)
        hv = h._eval(e) / scale
        return np.stack([hv * rows[0], hv * hv * rows[2]])
    return func


def mean_current(h: WeightFunction, T: Transmission, baths: BathPair,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    base = _stack(T, baths)
    scale = _weight_scale(h, T, baths, spec)
    value, _ = integrate_energy(lambda e: h._eval(e) / scale * base(e)[0],
                                baths, T, spec)
    return scale * value


def variance(h: WeightFunction, T: Transmission, baths: BathPair,
             spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    base = _stack(T, baths)
    scale = _weight_scale(h, T, baths, spec)

    def func(e):
        hv = h._eval(e) / scale
        return hv * hv * base(e)[2]
    value, _ = integrate_energy(func, baths, T, spec)
    return scale * scale * value


def covariance_EN(T: Transmission, baths: BathPair,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Cross term of the polarised variance, int eps T B.

    Equals (Delta_{a eps + b} - a**2 Delta_E - b**2 Delta_N) / (2 a b).
    """
    base = _stack(T, baths)
    value, _ = integrate_energy(lambda e: base(e)[4], baths, T, spec)
    return value


def current_stats(h: WeightFunction, T: Transmission, baths: BathPair,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """``(J, Delta)`` from a single two-component integral."""
    scale = _weight_scale(h, T, baths, spec)
    (J, D), _ = integrate_energy(_weighted(h, T, baths, scale), baths, T, spec)
    return scale * float(J), scale * scale * float(D)


def snr(h: WeightFunction, T: Transmission, baths: BathPair,
        spec: QuadratureSpec = DEFAULT_SPEC) -> CurrentStats:
    J, D = current_stats(h, T, baths, spec)
    if not D > 0:
        raise DegenerateCurrentError(
            f"variance of {h!r} vanishes; the weight is zero on the support "
            "of the transmission")
    return CurrentStats(J, D, J * J / D)


def entropy_production(T: Transmission, baths: BathPair,
                       spec: QuadratureSpec = DEFAULT_SPEC,
                       route: str = "currents") -> float:
    """sigma = -d_beta J_E + d_betamu J_N.

    ``route="currents"`` combines the two currents, ``route="direct"``
    integrates T df (d_betamu - d_beta eps), which is pointwise >= 0.
    """
    if baths.is_equilibrium:
        return 0.0
    if route == "direct":
        base = _stack(T, baths)
        value, _ = integrate_energy(lambda e: base(e)[6], baths, T, spec)
        return value
    if route != "currents":
        raise ValueError(f"unknown route {route!r}")
    J_E = mean_current(energy(), T, baths, spec)
    J_N = mean_current(particle(), T, baths, spec)
    return -baths.delta_beta * J_E + baths.delta_betamu * J_N


def tur_bound(T: Transmission, baths: BathPair,
              spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Classical TUR reference sigma / 2."""
    return 0.5 * entropy_production(T, baths, spec, route="direct")


__all__ = [
    "CurrentStats", "TransportMoments", "covariance_EN",
    "current_stats", "entropy_production", "mean_current", "snr",
    "transport_moments", "tur_bound", "variance",
]
