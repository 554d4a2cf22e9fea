"""Reservoirs, transmission functions, weight functions and the pointwise
quantities built from them.

Units: k_B = hbar = e = 1; energies, temperatures and chemical potentials
share one arbitrary energy unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import kernels
from .errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _require_finite(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _evaluate(func, eps):
    """Run an array kernel on scalar or array ``eps``, preserving shape."""
    arr = np.asarray(eps, dtype=float)
    out = func(arr.reshape(-1)).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# reservoirs

@dataclass(frozen=True)
class BathPair:
    """Left and right reservoirs, given by inverse temperatures and
    chemical potentials."""

    beta_L: float
    mu_L: float
    beta_R: float
    mu_R: float

    def __post_init__(self):
        for name in ("beta_L", "mu_L", "beta_R", "mu_R"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.beta_L <= 0 or self.beta_R <= 0:
            raise DomainError("temperatures must be strictly positive "
                              f"(beta_L={self.beta_L}, beta_R={self.beta_R})")

    @classmethod
    def from_temperatures(cls, T_L, mu_L, T_R, mu_R):
        if not (T_L > 0 and T_R > 0):
            raise DomainError(f"temperatures must be > 0, got {T_L}, {T_R}")
        return cls(1.0 / T_L, mu_L, 1.0 / T_R, mu_R)

    @classmethod
    def from_gradients(cls, beta_mean, betamu_mean, delta_beta, delta_betamu):
        """Inverse of the (mean, gradient) parametrisation

        beta_{L,R} = beta_mean +- delta_beta / 2,
        beta_{L,R} mu_{L,R} = betamu_mean +- delta_betamu / 2.
        """
        beta_l = beta_mean + 0.5 * delta_beta
        beta_r = beta_mean - 0.5 * delta_beta
        if beta_l <= 0 or beta_r <= 0:
            raise DomainError("gradient too large: a lead temperature would "
                              "be non-positive")
        return cls(beta_l, (betamu_mean + 0.5 * delta_betamu) / beta_l,
                   beta_r, (betamu_mean - 0.5 * delta_betamu) / beta_r)

    @property
    def T_L(self):
        return 1.0 / self.beta_L

    @property
    def T_R(self):
        return 1.0 / self.beta_R

    @property
    def delta_beta(self):
        return self.beta_L - self.beta_R

    @property
    def delta_betamu(self):
        return self.beta_L * self.mu_L - self.beta_R * self.mu_R

    @property
    def beta_mean(self):
        return 0.5 * (self.beta_L + self.beta_R)

    @property
    def betamu_mean(self):
        return 0.5 * (self.beta_L * self.mu_L + self.beta_R * self.mu_R)

    @property
    def mu_mean(self):
        """Chemical potential of the mean distribution, betamu_mean / beta_mean."""
        return self.betamu_mean / self.beta_mean

    @property
    def is_equilibrium(self):
        return self.beta_L == self.beta_R and self.mu_L == self.mu_R

    def scaled_gradients(self, factor):
        """Same means, gradients multiplied by ``factor``."""
        return BathPair.from_gradients(self.beta_mean, self.betamu_mean,
                                       factor * self.delta_beta,
                                       factor * self.delta_betamu)


# --------------------------------------------------------------------------
# transmission functions

class Transmission:
    """Energy-dependent transmission probability, 0 <= T(eps) <= 1."""

    def __call__(self, eps: ArrayLike) -> ArrayLike:
        return _evaluate(self._eval, eps)

    def _eval(self, eps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def features(self) -> tuple[float, ...]:
        """Energies where the integrand changes abruptly; used to seed
        quadrature breakpoints."""
        return ()

    def support(self) -> tuple[float, float] | None:
        """Energy window that must lie inside the integration domain."""
        return None


@dataclass(frozen=True)
class Constant(Transmission):
    tau: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise DomainError(f"transmission must lie in [0, 1], got {self.tau}")

    def _eval(self, eps):
        return np.full(eps.shape, float(self.tau))


@dataclass(frozen=True)
class Boxcar(Transmission):
    tau: float
    eps_lo: float
    eps_hi: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise DomainError(f"transmission must lie in [0, 1], got {self.tau}")
        if not self.eps_lo < self.eps_hi:
            raise DomainError("boxcar needs eps_lo < eps_hi")

    def _eval(self, eps):
        inside = (eps >= self.eps_lo) & (eps <= self.eps_hi)
        return np.where(inside, float(self.tau), 0.0)

    def features(self):
        return (self.eps_lo, self.eps_hi)

    def support(self):
        return (self.eps_lo, self.eps_hi)


@dataclass(frozen=True)
class DoubleDot(Transmission):
    """Resonant double quantum dot,

    T(eps) = gamma**2 omega**2 / |((eps - eps0) + i gamma/2)**2 - omega**2|**2.

    The maximum is exactly 1 (at eps0 +- sqrt(omega**2 - gamma**2/4) when
    omega > gamma/2), so no range check is needed beyond gamma, omega > 0.
    """

    gamma: float
    omega: float
    eps0: float = 0.0

    def __post_init__(self):
        if not (self.gamma > 0 and self.omega > 0):
            raise DomainError("double dot needs gamma > 0 and omega > 0")
        if not math.isfinite(self.eps0):
            raise DomainError("eps0 must be finite")

    def _eval(self, eps):
        return kernels.double_dot(eps, self.gamma, self.omega, self.eps0)

    def features(self):
        e0, om, ga = self.eps0, self.omega, self.gamma
        return (e0 - om - ga, e0 - om, e0, e0 + om, e0 + om + ga)

    def support(self):
        return (self.eps0 - self.omega, self.eps0 + self.omega)

    def padding(self):
        return self.gamma


@dataclass(frozen=True)
class Tabulated(Transmission):
    """Linear interpolation between ``(eps, T)`` nodes, 0 outside the grid
    unless ``outside='clamp'`` (hold the end values)."""

    eps: tuple
    values: tuple
    outside: str = "zero"

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if e.ndim != 1 or e.shape != v.shape or e.size < 2:
            raise DomainError("tabulated transmission needs matching 1-d "
                              "grids with at least two nodes")
        if not np.all(np.diff(e) > 0):
            raise DomainError("tabulated energies must be strictly increasing")
        if not (np.all(np.isfinite(v)) and np.all((v >= 0) & (v <= 1))):
            raise DomainError("tabulated transmission values must lie in [0, 1]")
        if self.outside not in ("zero", "clamp"):
            raise DomainError("outside must be 'zero' or 'clamp'")
        object.__setattr__(self, "eps", tuple(e.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    def _eval(self, eps):
        if self.outside == "zero":
            return np.interp(eps, self.eps, self.values, left=0.0, right=0.0)
        return np.interp(eps, self.eps, self.values)

    def features(self):
        return (self.eps[0], self.eps[-1])

    def support(self):
        return (self.eps[0], self.eps[-1])


def eval_transmission(T: Transmission, eps: ArrayLike) -> ArrayLike:
    return T(eps)


# --------------------------------------------------------------------------
# weight functions

class WeightFunction:
    """The energy kernel h(eps) defining a generalised current."""

    def __call__(self, eps: ArrayLike) -> ArrayLike:
        return _evaluate(self._eval, eps)

    def _eval(self, eps):
        raise NotImplementedError

    def scaled(self, alpha: float) -> "WeightFunction":
        return General(lambda e, _h=self._eval, _a=float(alpha): _a * _h(e),
                       name=f"{alpha}*{self!r}")

    def __mul__(self, alpha):
        return self.scaled(alpha)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Linear(WeightFunction):
    """h(eps) = a * eps + b."""

    a: float
    b: float

    def _eval(self, eps):
        return self.a * eps + self.b

    def scaled(self, alpha):
        return Linear(alpha * self.a, alpha * self.b)


@dataclass(frozen=True)
class General(WeightFunction):
    """Arbitrary vectorised callable ``h(eps_array) -> array``."""

    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    name: str = "h"

    def _eval(self, eps):
        out = np.broadcast_to(np.asarray(self.func(eps), dtype=float), eps.shape)
        return np.array(out)

    def __repr__(self):
        return f"General({self.name})"


@dataclass(frozen=True)
class TabulatedWeight(WeightFunction):
    """Piecewise-linear h through ``(eps, h)`` nodes, constant beyond the
    ends."""

    eps: tuple
    values: tuple

    def __post_init__(self):
        e = np.asarray(self.eps, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if e.ndim != 1 or e.shape != v.shape or e.size < 2:
            raise DomainError("tabulated weight needs matching 1-d grids")
        if not np.all(np.diff(e) > 0):
            raise DomainError("tabulated energies must be strictly increasing")
        _require_finite("tabulated weight", v)
        object.__setattr__(self, "eps", tuple(e.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    def _eval(self, eps):
        return np.interp(eps, self.eps, self.values)


def particle() -> Linear:
    return Linear(0.0, 1.0)


def energy() -> Linear:
    return Linear(1.0, 0.0)


def heat_left(mu_L: float) -> Linear:
    return Linear(1.0, -float(mu_L))


def heat_right(mu_R: float) -> Linear:
    return Linear(1.0, -float(mu_R))


# --------------------------------------------------------------------------
# pointwise physics

def fermi(beta: float, mu: float, eps: ArrayLike) -> ArrayLike:
    """Fermi-Dirac occupation 1 / (exp(beta (eps - mu)) + 1).

    Overflow-free for any finite argument: the exponential is always taken
    of a non-positive number.
    """
    _require_finite("beta", beta)
    _require_finite("mu", mu)
    _require_finite("eps", eps)
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    return _evaluate(lambda e: kernels.fermi(beta * (e - mu)), eps)


def delta_f(baths: BathPair, eps: ArrayLike) -> ArrayLike:
    """f_L - f_R."""
    _require_finite("eps", eps)
    return _evaluate(lambda e: kernels.lead_terms(
        e, baths.beta_L, baths.mu_L, baths.beta_R, baths.mu_R)[0], eps)


def g_noise(baths: BathPair, eps: ArrayLike) -> ArrayLike:
    """f_L (1 - f_L) + f_R (1 - f_R)."""
    _require_finite("eps", eps)
    return _evaluate(lambda e: kernels.lead_terms(
        e, baths.beta_L, baths.mu_L, baths.beta_R, baths.mu_R)[1], eps)


def noise_bracket(baths: BathPair, T: Transmission, eps: ArrayLike) -> ArrayLike:
    """f_L + f_R - 2 f_L f_R - T df**2, evaluated as g + df**2 (1 - T)."""
    def _bracket(e):
        df, g = kernels.lead_terms(e, baths.beta_L, baths.mu_L,
                                   baths.beta_R, baths.mu_R)
        return g + df * df * (1.0 - T._eval(e))
    _require_finite("eps", eps)
    return _evaluate(_bracket, eps)
