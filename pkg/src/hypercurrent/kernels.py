"""Pointwise numeric kernels over energy grids.

Every quadrature call in the package funnels through these functions, so
they are written twice: explicit loops compiled with numba, and vectorised
numpy. ``numba_impl`` and ``numpy_impl`` expose both sets; the module-level
names dispatch to the backend chosen in :mod:`hypercurrent._backend`.

Kernels take the Fermi arguments ``x = beta * (eps - mu)`` of each lead in
the stable forms used throughout: ``f(x) = exp(-x) / (1 + exp(-x))`` for
``x >= 0`` and ``1 / (1 + exp(x))`` otherwise, and ``1 - f(x) = f(-x)``.
"""

import math
from types import SimpleNamespace

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA, njit

# rows of the moment stack returned by ``moment_integrands``
MOMENT_ROWS = ("J_N", "J_E", "Delta_N", "Delta_E", "C", "S_hyp", "sigma")
N_MOMENTS = len(MOMENT_ROWS)


# --------------------------------------------------------------------------
# numba loops

@njit(cache=True)
def _fermi_scalar(x):
    if x >= 0.0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


@njit(cache=True)
def _delta_f_scalar(xl, xr):
    # subtract the small quantities: occupations when both sit above the
    # Fermi level, holes (1 - f) when both sit below it
    if xl + xr >= 0.0:
        return _fermi_scalar(xl) - _fermi_scalar(xr)
    return _fermi_scalar(-xr) - _fermi_scalar(-xl)


@njit(cache=True)
def _fermi_nb(x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _fermi_scalar(x[i])
    return out


@njit(cache=True)
def _lead_terms_nb(eps, beta_l, mu_l, beta_r, mu_r):
    n = eps.shape[0]
    df = np.empty(n)
    g = np.empty(n)
    for i in range(n):
        xl = beta_l * (eps[i] - mu_l)
        xr = beta_r * (eps[i] - mu_r)
        df[i] = _delta_f_scalar(xl, xr)
        g[i] = (_fermi_scalar(xl) * _fermi_scalar(-xl)
                + _fermi_scalar(xr) * _fermi_scalar(-xr))
    return df, g


@njit(cache=True)
def _double_dot_nb(eps, gamma, omega, eps0):
    n = eps.shape[0]
    out = np.empty(n)
    num = gamma * gamma * omega * omega
    shift = 0.25 * gamma * gamma + omega * omega
    for i in range(n):
        x = eps[i] - eps0
        re = x * x - shift
        t = num / (re * re + x * x * gamma * gamma)
        out[i] = t if t < 1.0 else 1.0
    return out


@njit(cache=True)
def _moment_integrands_nb(eps, tvals, beta_l, mu_l, beta_r, mu_r):
    n = eps.shape[0]
    out = np.empty((7, n))
    d_beta = beta_l - beta_r
    d_betamu = beta_l * mu_l - beta_r * mu_r
    for i in range(n):
        e = eps[i]
        t = tvals[i]
        xl = beta_l * (e - mu_l)
        xr = beta_r * (e - mu_r)
        df = _delta_f_scalar(xl, xr)
        g = (_fermi_scalar(xl) * _fermi_scalar(-xl)
             + _fermi_scalar(xr) * _fermi_scalar(-xr))
        denom = g + df * df * (1.0 - t)
        cur = t * df
        noise = t * denom
        out[0, i] = cur
        out[1, i] = e * cur
        out[2, i] = noise
        out[3, i] = e * e * noise
        out[4, i] = e * noise
        out[5, i] = cur * df / denom if denom > 0.0 else 0.0
        out[6, i] = cur * (d_betamu - d_beta * e)
    return out


@njit(cache=True)
def _cgf_density_nb(x, t, fl, fr):
    n = x.shape[0]
    out = np.empty(n)
    for i in range(n):
        z = t[i] * (math.expm1(x[i]) * fl[i] * (1.0 - fr[i])
                    + math.expm1(-x[i]) * fr[i] * (1.0 - fl[i]))
        out[i] = math.log1p(z) if z > -1.0 else np.nan
    return out


# --------------------------------------------------------------------------
# numpy equivalents

def _fermi_np(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0.0, e / (1.0 + e), 1.0 / (1.0 + e))


def _lead_terms_np(eps, beta_l, mu_l, beta_r, mu_r):
    xl = beta_l * (eps - mu_l)
    xr = beta_r * (eps - mu_r)
    fl, fr = _fermi_np(xl), _fermi_np(xr)
    hl, hr = _fermi_np(-xl), _fermi_np(-xr)
    df = np.where(xl + xr >= 0.0, fl - fr, hr - hl)
    g = fl * hl + fr * hr
    return df, g


def _double_dot_np(eps, gamma, omega, eps0):
    x = eps - eps0
    re = x * x - (0.25 * gamma * gamma + omega * omega)
    t = (gamma * gamma * omega * omega) / (re * re + x * x * gamma * gamma)
    return np.minimum(t, 1.0)


def _moment_integrands_np(eps, tvals, beta_l, mu_l, beta_r, mu_r):
    df, g = _lead_terms_np(eps, beta_l, mu_l, beta_r, mu_r)
    denom = g + df * df * (1.0 - tvals)
    cur = tvals * df
    noise = tvals * denom
    safe = np.where(denom > 0.0, denom, 1.0)
    hyp = np.where(denom > 0.0, cur * df / safe, 0.0)
    d_beta = beta_l - beta_r
    d_betamu = beta_l * mu_l - beta_r * mu_r
    return np.stack([cur, eps * cur, noise, eps * eps * noise, eps * noise,
                     hyp, cur * (d_betamu - d_beta * eps)])


def _cgf_density_np(x, t, fl, fr):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        z = t * (np.expm1(x) * fl * (1.0 - fr) + np.expm1(-x) * fr * (1.0 - fl))
        return np.where(z > -1.0, np.log1p(np.maximum(z, -1.0)), np.nan)


# --------------------------------------------------------------------------

numpy_impl = SimpleNamespace(
    fermi=_fermi_np,
    lead_terms=_lead_terms_np,
    double_dot=_double_dot_np,
    moment_integrands=_moment_integrands_np,
    cgf_density=_cgf_density_np,
)

numba_impl = SimpleNamespace(
    fermi=_fermi_nb,
    lead_terms=_lead_terms_nb,
    double_dot=_double_dot_nb,
    moment_integrands=_moment_integrands_nb,
    cgf_density=_cgf_density_nb,
)

_impl = numba_impl if HAVE_NUMBA else numpy_impl


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64).reshape(-1)


def fermi(x):
    """Fermi function ``1 / (exp(x) + 1)`` of a 1-d array of arguments."""
    return _impl.fermi(_f64(x))


def lead_terms(eps, beta_l, mu_l, beta_r, mu_r):
    """Return ``(delta_f, g)`` on the grid ``eps``."""
    return _impl.lead_terms(_f64(eps), float(beta_l), float(mu_l),
                            float(beta_r), float(mu_r))


def double_dot(eps, gamma, omega, eps0):
    return _impl.double_dot(_f64(eps), float(gamma), float(omega), float(eps0))


def moment_integrands(eps, tvals, beta_l, mu_l, beta_r, mu_r):
    """Integrand stack of shape ``(7, n)``, rows named in ``MOMENT_ROWS``.

    Row order: ``T df``, ``eps T df``, ``T B``, ``eps**2 T B``, ``eps T B``,
    ``T df**2 / (g + df**2 (1 - T))`` and ``T df (d_betamu - d_beta eps)``,
    where ``B = g + df**2 (1 - T)`` is the noise bracket.
    """
    return _impl.moment_integrands(_f64(eps), _f64(tvals), float(beta_l),
                                   float(mu_l), float(beta_r), float(mu_r))


def cgf_density(x, t, fl, fr):
    """Levitov-Lesovik CGF density at ``x = h * eta``, NaN where the
    logarithm's argument is not positive."""
    return _impl.cgf_density(_f64(x), _f64(t), _f64(fl), _f64(fr))


__all__ = [
    "BACKEND", "MOMENT_ROWS", "N_MOMENTS", "cgf_density", "double_dot",
    "fermi", "lead_terms", "moment_integrands", "numba_impl", "numpy_impl",
]
