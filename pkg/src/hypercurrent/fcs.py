"""Independent checks on the current statistics.

Two oracles live here. The first differentiates the Levitov-Lesovik
cumulant generating function numerically in the counting field and so
reproduces the mean and variance integrands without using their closed
forms. The second discretises the SNR optimisation on an energy grid,
where it becomes a finite-dimensional ratio of quadratic forms with a
Cauchy-Schwarz closed-form optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import BathPair, Transmission, WeightFunction, fermi
from .errors import AnalyticityError, DomainError, EquilibriumError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, truncate_domain

DEFAULT_STEP = 1e-4


@dataclass(frozen=True)
class CgfPoint:
    eta: float
    eps: float
    value: float


def cgf_density(h_val, T_val, fL, fR, eta):
    """Scaled-CGF density at counting field ``eta``:

    ln{1 + T [(e^{h eta} - 1) f_L (1 - f_R) + (e^{-h eta} - 1) f_R (1 - f_L)]}

    A positive ``h eta`` counts transfer from left to right.
    """
    x, t, fl, fr = np.broadcast_arrays(
        np.multiply(h_val, eta, dtype=float), np.asarray(T_val, dtype=float),
        np.asarray(fL, dtype=float), np.asarray(fR, dtype=float))
    out = kernels.cgf_density(x, t, fl, fr).reshape(x.shape)
    if not np.all(np.isfinite(out)):
        raise AnalyticityError(
            f"counting field {eta!r} leaves the domain where the CGF "
            "logarithm is real and finite")
    return float(out) if out.ndim == 0 else out


def cgf_point(h: WeightFunction, T: Transmission, baths: BathPair,
              eps: float, eta: float) -> CgfPoint:
    value = cgf_density(h(eps), T(eps), fermi(baths.beta_L, baths.mu_L, eps),
                        fermi(baths.beta_R, baths.mu_R, eps), eta)
    return CgfPoint(float(eta), float(eps), float(value))


def _central(chi, order, s):
    if order == 1:
        return (chi(s) - chi(-s)) / (2.0 * s)
    return (chi(s) - 2.0 * chi(0.0) + chi(-s)) / (s * s)


def cumulant_from_cgf(order: int, h: WeightFunction, T: Transmission,
                      baths: BathPair, eps, step: float | None = None):
    """First or second counting-field derivative of the CGF density at 0.

    Central differences with steps ``s`` and ``s / 2`` combined by one
    Richardson step (error O(s**4)). The default step is
    ``1e-4 / max(1, |h(eps)|)``, chosen per energy.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    eps = np.asarray(eps, dtype=float)
    hv = np.asarray(h(eps), dtype=float)
    tv = np.asarray(T(eps), dtype=float)
    fl = fermi(baths.beta_L, baths.mu_L, eps)
    fr = fermi(baths.beta_R, baths.mu_R, eps)
    if step is None:
        s = DEFAULT_STEP / np.maximum(1.0, np.abs(hv))
    else:
        s = np.broadcast_to(np.asarray(step, dtype=float), hv.shape)

    def chi(eta):
        return cgf_density(hv, tv, fl, fr, eta)

    coarse = _central(chi, order, s)
    fine = _central(chi, order, 0.5 * s)
    out = (4.0 * fine - coarse) / 3.0
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------------------------
# grid variational oracle

@dataclass(frozen=True)
class GridProblem:
    """Discretised mean (``w``) and variance (``D``) weights.

    With h_i = h(eps_i): J = sum w_i h_i and Delta = sum D_i h_i**2.
    """

    nodes: np.ndarray
    d_eps: np.ndarray
    w: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.nodes) > 0):
            raise DomainError("grid nodes must be strictly increasing")
        if np.any(self.D < 0):
            raise DomainError("variance weights must be non-negative")

    def snr(self, h_vec) -> float:
        h_vec = np.asarray(h_vec, dtype=float)
        J = self.w @ h_vec
        D = self.D @ (h_vec * h_vec)
        return float(J * J / D)


def build_grid_problem(T: Transmission, baths: BathPair,
                       n_nodes: int = 100_000,
                       spec: QuadratureSpec = DEFAULT_SPEC) -> GridProblem:
    """Uniform trapezoid grid over the truncated energy domain."""
    if n_nodes < 3:
        raise DomainError("need at least 3 grid nodes")
    lo, hi = truncate_domain(baths, T, spec)
    nodes = np.linspace(lo, hi, int(n_nodes))
    d_eps = np.full(nodes.size, (hi - lo) / (nodes.size - 1))
    d_eps[0] *= 0.5
    d_eps[-1] *= 0.5
    rows = kernels.moment_integrands(nodes, T(nodes), baths.beta_L,
                                     baths.mu_L, baths.beta_R, baths.mu_R)
    return GridProblem(nodes, d_eps, rows[0] * d_eps, rows[2] * d_eps)


def grid_oracle_optimum(problem: GridProblem):
    """Maximise (sum w h)**2 / sum D h**2 over all vectors h.

    By Cauchy-Schwarz the optimum is h_i = w_i / D_i with value
    sum w_i**2 / D_i. Nodes with D_i = 0 carry no current and get h_i = 0.
    """
    w, D = problem.w, problem.D
    if not np.any(w != 0):
        raise EquilibriumError("all current weights vanish")
    live = D > 0
    h = np.zeros_like(w)
    h[live] = w[live] / D[live]
    return h, float(np.sum(w[live] * h[live]))


def _linear_moments(problem, eps):
    w, D = problem.w, problem.D
    return (w @ eps, w.sum(), D @ (eps * eps), D @ eps, D.sum())


def grid_oracle_linear(problem: GridProblem, energy_nodes=None,
                       n_angles: int = 100_000):
    """Best grid SNR over h_i = a eps_i + b by brute force in the angle.

    The SNR is scale invariant, so only the direction
    (a, b) = (cos theta, sin theta), theta in [0, pi), matters. A dense
    scan picks the best angle; bisection on the analytic derivative then
    polishes it. Returns ``(a, b, S)``.
    """
    eps = problem.nodes if energy_nodes is None else np.asarray(energy_nodes, float)
    w1, w0, d11, d10, d00 = _linear_moments(problem, eps)
    if not (d00 > 0 and d11 > 0 and d11 * d00 - d10 * d10 > 0):
        raise DomainError("grid cannot separate the constant and linear weights")

    def value(theta):
        c, s = np.cos(theta), np.sin(theta)
        num = c * w1 + s * w0
        return num * num / (c * c * d11 + 2 * c * s * d10 + s * s * d00)

    def slope(theta):
        c, s = math.cos(theta), math.sin(theta)
        num = c * w1 + s * w0
        dnum = -s * w1 + c * w0
        q = c * c * d11 + 2 * c * s * d10 + s * s * d00
        dq = 2 * (-c * s * d11 + (c * c - s * s) * d10 + c * s * d00)
        return (2 * num * dnum * q - num * num * dq) / (q * q)

    thetas = np.arange(n_angles) * (math.pi / n_angles)
    scores = value(thetas)
    k = int(np.argmax(scores))
    best = float(thetas[k])
    delta = math.pi / n_angles
    lo, hi = best - delta, best + delta
    if slope(lo) > 0 > slope(hi):
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if slope(mid) > 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        polished = 0.5 * (lo + hi)
        if value(polished) >= scores[k]:
            best = polished
    best = best % math.pi
    return math.cos(best), math.sin(best), float(value(best))


def direction_angle(a1, b1, a2, b2) -> float:
    """Angle between the lines spanned by (a1, b1) and (a2, b2), in [0, pi/2]."""
    cross = a1 * b2 - a2 * b1
    dot = a1 * a2 + b1 * b2
    ang = abs(math.atan2(cross, dot))
    return min(ang, math.pi - ang)
