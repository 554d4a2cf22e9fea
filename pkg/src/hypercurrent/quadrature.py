"""Adaptive Gauss-Kronrod (10/21) integration over a truncated energy axis.

All energy integrals in the package go through :func:`integrate`. The
integrand may be scalar- or vector-valued: it receives a 1-d array of
energies and returns either an array of the same length or a stack of
shape ``(m, n)``. Every component must satisfy its own tolerance.

Refinement proceeds in rounds. In each round every interval whose error
share exceeds its proportional part of the budget is bisected, and all
new nodes are evaluated in a single integrand call, which keeps the
Python overhead per round constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BathPair, DoubleDot, Transmission
from .errors import ConvergenceError, DomainError

# Kronrod nodes on [-1, 1] (QUADPACK qk21), the Gauss-10 nodes are the
# odd-indexed ones
_XK = np.array([
    -0.995657163025808080735527280689003, -0.973906528517171720077964012084452,
    -0.930157491355708226001207180059508, -0.865063366688984510732096688423493,
    -0.780817726586416897063717578345042, -0.679409568299024406234327365114874,
    -0.562757134668604683339000099272694, -0.433395394129247190799265943165784,
    -0.294392862701460198131126603103866, -0.148874338981631210884826001129720,
    0.0,
    0.148874338981631210884826001129720, 0.294392862701460198131126603103866,
    0.433395394129247190799265943165784, 0.562757134668604683339000099272694,
    0.679409568299024406234327365114874, 0.780817726586416897063717578345042,
    0.865063366688984510732096688423493, 0.930157491355708226001207180059508,
    0.973906528517171720077964012084452, 0.995657163025808080735527280689003,
])
_WK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
    0.147739104901338491374841515972068, 0.142775938577060080797094273138717,
    0.134709217311473325928054001771707, 0.123491976262065851077958109831074,
    0.109387158802297641899210590325805, 0.093125454583697605535065465083366,
    0.075039674810919952767043140916190, 0.054755896574351996031381300244580,
    0.032558162307964727478818972459390, 0.011694638867371874278064396062192,
])
_WG10 = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338, 0.295524224714752870173892994651338,
    0.269266719309996355091226921569469, 0.219086362515982043995534934228163,
    0.149451349150580593145776339657697, 0.066671344308688137593568809893332,
])
_WG = np.zeros(21)
_WG[1::2] = _WG10
_NK = _XK.size

# error estimates below this multiple of eps * integral(|f|) are rounding noise
_ROUNDOFF_FACTOR = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_width: float = 40.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be > 0")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be >= 0")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if not self.tail_width >= 10:
            raise DomainError("tail_width must be >= 10")

    def replace(self, **changes) -> "QuadratureSpec":
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update(changes)
        return QuadratureSpec(**values)


DEFAULT_SPEC = QuadratureSpec()


def truncate_domain(baths: BathPair, T: Transmission,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """Finite energy window outside which every integrand is negligible.

    The window extends ``tail_width`` times the hotter temperature beyond
    the chemical potentials, and is widened to contain any finite feature
    of the transmission (double-dot resonances padded by ``tail_width``
    times the coupling).
    """
    width = spec.tail_width * max(baths.T_L, baths.T_R)
    lo = min(baths.mu_L, baths.mu_R) - width
    hi = max(baths.mu_L, baths.mu_R) + width
    support = T.support()
    if support is not None:
        pad = spec.tail_width * T.padding() if isinstance(T, DoubleDot) else 0.0
        lo = min(lo, support[0] - pad)
        hi = max(hi, support[1] + pad)
    return (lo, hi)


def breakpoints(baths: BathPair, T: Transmission, domain) -> tuple[float, ...]:
    """Transmission features and Fermi edges strictly inside ``domain``."""
    lo, hi = domain
    pts = set(T.features()) | {baths.mu_L, baths.mu_R}
    return tuple(sorted(p for p in pts if lo < p < hi))


def _gk21(func, lefts, rights):
    """Kronrod values and Kronrod-Gauss differences on many intervals."""
    centers = 0.5 * (lefts + rights)
    halves = 0.5 * (rights - lefts)
    nodes = (centers[:, None] + halves[:, None] * _XK[None, :]).reshape(-1)
    vals = np.asarray(func(nodes), dtype=float)
    scalar = vals.ndim == 1
    vals = vals.reshape(-1, lefts.size, _NK)
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand returned non-finite values")
    kron = vals @ _WK * halves
    gauss = vals @ _WG * halves
    absint = np.abs(vals) @ _WK * halves
    return kron, np.abs(kron - gauss), absint, scalar


def integrate(func, domain, spec: QuadratureSpec = DEFAULT_SPEC, points=()):
    """Integrate ``func`` over ``domain = (a, b)``.

    ``points`` are interior breakpoints that start as interval edges, so
    narrow features cannot fall between Kronrod nodes.

    Returns ``(value, error_estimate)``; both are floats for a scalar
    integrand and arrays of shape ``(m,)`` for an ``(m, n)`` stack. Raises
    :class:`ConvergenceError` (carrying the best estimate) when the
    tolerance is not met within ``spec.max_subdivisions`` intervals.
    """
    a, b = float(domain[0]), float(domain[1])
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError("integration domain must be finite")
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.array(sorted({a, b, *(float(p) for p in points if a < p < b)}))
    lefts, rights = edges[:-1], edges[1:]
    kron, err, absint, scalar = _gk21(func, lefts, rights)
    limit = max(int(spec.max_subdivisions), lefts.size)

    while True:
        total = kron.sum(axis=1)
        total_err = err.sum(axis=1)
        tol = np.maximum.reduce([
            np.full_like(total, spec.abs_tol),
            spec.rel_tol * np.abs(total),
            _ROUNDOFF_FACTOR * absint.sum(axis=1),
        ])
        if np.all(total_err <= tol):
            break
        # normalised error share of each interval, worst component
        with np.errstate(divide="ignore", invalid="ignore"):
            share = np.where(tol[:, None] > 0, err / tol[:, None], np.inf)
        share = share.max(axis=0)
        n = lefts.size
        split = share > 1.0 / n
        split[np.argmax(share)] = True
        n_split = int(split.sum())
        if n + n_split > limit:
            n_split = limit - n
            if n_split <= 0:
                raise ConvergenceError(
                    f"tolerance not met within {limit} subintervals "
                    f"(error {total_err.max():.3g})",
                    value=sign * (total[0] if scalar else total),
                    error=total_err[0] if scalar else total_err)
            # keep the worst ones, ties broken by position
            order = np.argsort(-share, kind="stable")[:n_split]
            split = np.zeros(n, dtype=bool)
            split[order] = True
        mids = 0.5 * (lefts[split] + rights[split])
        new_l = np.concatenate([lefts[split], mids])
        new_r = np.concatenate([mids, rights[split]])
        k2, e2, a2, _ = _gk21(func, new_l, new_r)
        keep = ~split
        lefts = np.concatenate([lefts[keep], new_l])
        rights = np.concatenate([rights[keep], new_r])
        kron = np.concatenate([kron[:, keep], k2], axis=1)
        err = np.concatenate([err[:, keep], e2], axis=1)
        absint = np.concatenate([absint[:, keep], a2], axis=1)
        # interval order matters for bit-reproducible summation
        order = np.argsort(lefts, kind="stable")
        lefts, rights = lefts[order], rights[order]
        kron, err, absint = kron[:, order], err[:, order], absint[:, order]

    if scalar:
        return sign * float(total[0]), float(total_err[0])
    return sign * total, total_err


def integrate_energy(func, baths: BathPair, T: Transmission,
                     spec: QuadratureSpec = DEFAULT_SPEC):
    """:func:`integrate` over the truncated domain with seeded breakpoints."""
    domain = truncate_domain(baths, T, spec)
    return integrate(func, domain, spec, points=breakpoints(baths, T, domain))
