"""Parameter sweeps, bound verification and single-point reports."""

from __future__ import annotations

import io
import json
import logging
import math

import numpy as np

from . import fcs
from .config import QUANTITIES, SCHEMA_VERSION, SweepConfig
from .core import (BathPair, General, Linear, TabulatedWeight, delta_f,
                   energy, noise_bracket, particle)
from .currents import snr, transport_moments
from .errors import ConvergenceError, HypercurrentError
from .hyper import (hyper_weight, hyper_weight_function,
                    linear_hyper_from_moments, linear_snr_formula)
from .quadrature import truncate_domain

log = logging.getLogger(__name__)

ORDER_SLACK = 1e-8
UNDEFINED = "undefined"


class OrderingViolation(HypercurrentError):
    """A sweep row breaks S_h <= S_lhyp <= S_hyp beyond the allowed slack."""


def _point_quantities(config: SweepConfig, baths: BathPair):
    m = transport_moments(config.transmission, baths, config.quadrature)
    if baths.is_equilibrium:
        zeros = dict.fromkeys(("S_N", "S_E", "S_QL", "S_QR", "S_lhyp",
                               "S_hyp", "sigma_half", "J_N", "J_E"), 0.0)
        zeros["rho_F"] = m.rho_F
        return m, None, zeros
    lin = linear_hyper_from_moments(m)
    q = {
        "S_N": lin.S_N,
        "S_E": lin.S_E,
        "S_QL": m.linear_stats(1.0, -baths.mu_L).S,
        "S_QR": m.linear_stats(1.0, -baths.mu_R).S,
        "S_lhyp": lin.S_lhyp,
        "S_hyp": m.S_hyp,
        "sigma_half": 0.5 * m.sigma,
        "J_N": m.J_N,
        "J_E": m.J_E,
        "rho_F": lin.fisher_corr,
    }
    return m, lin, q


def ordering_slack(q: dict) -> float:
    """min(S_lhyp - S_h for the four linear currents, S_hyp - S_lhyp)."""
    linear = max(q["S_N"], q["S_E"], q["S_QL"], q["S_QR"])
    return min(q["S_lhyp"] - linear, q["S_hyp"] - q["S_lhyp"])


def run_sweep(config: SweepConfig):
    """Evaluate the requested quantities along the sweep.

    Returns ``(columns, rows)``; the first column is the sweep variable.
    """
    if config.sweep is None:
        raise HypercurrentError("configuration has no [sweep] table")
    columns = (config.sweep.variable, *config.outputs)
    rows = []
    for value in config.sweep.values():
        baths = config.baths_at(value)
        try:
            _, _, q = _point_quantities(config, baths)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"{config.sweep.variable}={value!r}: {exc}",
                exc.value, exc.error) from exc
        slack = ordering_slack(q)
        if slack < -ORDER_SLACK:
            raise OrderingViolation(
                f"{config.sweep.variable}={value!r}: ordering slack {slack:.3g}")
        if slack < 0:
            log.info("%s=%r: ordering slack %.3g within quadrature noise",
                     config.sweep.variable, value, slack)
        rows.append((value, *(q[name] for name in config.outputs)))
    return columns, rows


# --------------------------------------------------------------------------
# output

def _fmt(value):
    if isinstance(value, str):
        return value
    if value is None or not math.isfinite(value):
        return UNDEFINED
    return repr(float(value))


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else UNDEFINED
    if isinstance(value, np.integer):
        return int(value)
    return value


def format_csv(columns, rows) -> str:
    out = io.StringIO()
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def format_json(columns, rows, config: SweepConfig) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config_echo": config.echo,
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    return json.dumps(_jsonable(doc), indent=2) + "\n"


# --------------------------------------------------------------------------
# verification

def random_weights(rng: np.random.Generator, baths: BathPair, domain, count: int):
    """Linear, cubic-polynomial and random-tabulated weights in rotation."""
    centre = baths.mu_mean
    scale = max(baths.T_L, baths.T_R)
    lo, hi = domain
    weights = []
    for i in range(count):
        kind = i % 3
        if kind == 0:
            a, b = rng.normal(size=2)
            weights.append(Linear(float(a), float(b)))
        elif kind == 1:
            c = rng.normal(size=4)
            weights.append(General(
                lambda e, c=c: np.polyval(c[::-1], (e - centre) / scale),
                name="cubic"))
        else:
            nodes = np.sort(rng.uniform(lo, hi, size=12))
            core = np.linspace(centre - 10 * scale, centre + 10 * scale, 20)
            nodes = np.unique(np.concatenate([nodes, core]))
            weights.append(TabulatedWeight(tuple(nodes),
                                           tuple(rng.uniform(-1, 1, nodes.size))))
    return weights


class _Check:
    def __init__(self, name, kind, tol):
        self.name, self.kind, self.tol = name, kind, tol
        self.worst = None
        self.points = 0
        self.failures = []

    def record(self, at, value):
        """``kind='min'``: value is a slack that must be >= -tol;
        ``kind='max'``: value is a discrepancy that must be <= tol."""
        self.points += 1
        if self.kind == "min":
            self.worst = value if self.worst is None else min(self.worst, value)
            ok = value >= -self.tol
        else:
            self.worst = value if self.worst is None else max(self.worst, value)
            ok = value <= self.tol
        if not ok:
            self.failures.append({"at": at, "value": value})

    def report(self):
        return {"name": self.name, "passed": not self.failures, "kind": self.kind,
                "tolerance": self.tol, "worst": self.worst,
                "points_checked": self.points, "failures": self.failures}


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def verify(config: SweepConfig, random_weight_count=None, grid_nodes=None,
           seed=None, tamper=None):
    """Run the bound property checks at each (subsampled) sweep point.

    ``tamper`` maps check names to a relative offset applied to the
    oracle-side value; it exists to prove that the harness can fail.
    Returns a JSON-ready report with ``passed`` and one entry per check.
    """
    opts = config.verify
    n_random = opts["random_weights"] if random_weight_count is None else random_weight_count
    nodes = opts["grid_nodes"] if grid_nodes is None else grid_nodes
    rng = np.random.default_rng(opts["seed"] if seed is None else seed)
    tamper = dict(tamper or {})
    bump = lambda name, x: x * (1.0 + tamper.get(name, 0.0))  # noqa: E731

    checks = {
        "ordering": _Check("ordering", "min", ORDER_SLACK),
        "hyper_dominance": _Check("hyper_dominance", "min", 1e-8),
        "linear_consistency": _Check("linear_consistency", "max", 1e-8),
        "linear_formula": _Check("linear_formula", "max", 1e-8),
        "fcs_first_cumulant": _Check("fcs_first_cumulant", "max", 1e-8),
        "fcs_second_cumulant": _Check("fcs_second_cumulant", "max", 1e-6),
        "grid_oracle_snr": _Check("grid_oracle_snr", "max", 1e-6),
        "grid_oracle_weight": _Check("grid_oracle_weight", "max", 1e-12),
        "entropy_production": _Check("entropy_production", "min", 1e-12),
        "entropy_routes": _Check("entropy_routes", "max", 1e-9),
    }
    if opts.get("saturation_tol") is not None:
        checks["linres_saturation"] = _Check("linres_saturation", "max",
                                             float(opts["saturation_tol"]))

    T, spec = config.transmission, config.quadrature
    if config.sweep is None:
        points = [(None, config.baths_base)]
    else:
        values = config.sweep.values()[::max(1, int(opts["subsample"]))]
        points = [(v, config.baths_at(v)) for v in values]

    for at, baths in points:
        m, lin, q = _point_quantities(config, baths)
        q = dict(q, S_hyp=bump("ordering", q["S_hyp"]))
        checks["ordering"].record(at, ordering_slack(q))
        domain = truncate_domain(baths, T, spec)

        # sigma >= 0, two evaluation routes
        sigma_direct = bump("entropy_production", m.sigma)
        checks["entropy_production"].record(at, sigma_direct)
        sigma_cur = -baths.delta_beta * m.J_E + baths.delta_betamu * m.J_N
        checks["entropy_routes"].record(
            at, abs(bump("entropy_routes", sigma_cur) - m.sigma)
            / max(1.0, abs(m.sigma)))

        # CGF derivatives against the closed-form integrands
        eps = np.linspace(*domain, int(opts["fcs_samples"]))
        eps = np.concatenate([eps, rng.uniform(*domain, 50)])
        for h in (particle(), energy(), hyper_weight_function(T, baths)):
            _fcs_record(checks, at, h, T, baths, eps, bump)

        if lin is None:  # equilibrium: nothing to optimise
            continue
        S_hyp = m.S_hyp
        for h in random_weights(rng, baths, domain, n_random):
            S = snr(h, T, baths, spec).S
            checks["hyper_dominance"].record(at, bump("hyper_dominance", S_hyp) - S)

        direct = snr(lin.weight, T, baths, spec).S
        checks["linear_consistency"].record(
            at, _rel(bump("linear_consistency", direct), lin.S_lhyp))
        eq9 = linear_snr_formula(lin.S_E, lin.S_N, lin.fisher_corr,
                                 m.J_E * m.J_N >= 0)
        checks["linear_formula"].record(at, _rel(bump("linear_formula", eq9),
                                                 lin.S_lhyp))

        problem = fcs.build_grid_problem(T, baths, nodes, spec)
        h_vec, S_grid = fcs.grid_oracle_optimum(problem)
        checks["grid_oracle_snr"].record(
            at, _rel(bump("grid_oracle_snr", S_grid), S_hyp))
        live = problem.D > 0
        ref = hyper_weight(T, baths, problem.nodes[live])
        diff = np.abs(bump("grid_oracle_weight", h_vec[live]) - ref)
        checks["grid_oracle_weight"].record(
            at, float(np.max(diff / np.maximum(np.abs(ref), 1e-300))))

        if "linres_saturation" in checks:
            ratio = bump("linres_saturation", S_hyp) / (0.5 * m.sigma)
            checks["linres_saturation"].record(at, abs(ratio - 1.0))

    reports = [c.report() for c in checks.values()]
    return {
        "schema_version": SCHEMA_VERSION,
        "config_echo": config.echo,
        "passed": all(r["passed"] for r in reports),
        "checks": reports,
    }


def _fcs_record(checks, at, h, T, baths, eps, bump):
    hv, tv = h(eps), T(eps)
    first = hv * tv * delta_f(baths, eps)
    second = hv * hv * tv * noise_bracket(baths, T, eps)
    c1 = bump("fcs_first_cumulant", fcs.cumulant_from_cgf(1, h, T, baths, eps))
    c2 = bump("fcs_second_cumulant", fcs.cumulant_from_cgf(2, h, T, baths, eps))
    checks["fcs_first_cumulant"].record(
        at, float(np.max(np.abs(c1 - first) / np.maximum(1.0, np.abs(first)))))
    checks["fcs_second_cumulant"].record(
        at, float(np.max(np.abs(c2 - second) / np.maximum(1.0, np.abs(second)))))


# --------------------------------------------------------------------------
# single point

def point_report(config: SweepConfig, at: float | None = None) -> dict:
    """Full diagnostic record at one parameter point."""
    baths = config.baths_base if at is None else config.baths_at(at)
    T, spec = config.transmission, config.quadrature
    m, lin, q = _point_quantities(config, baths)
    record = {
        "J_N": q["J_N"], "J_E": q["J_E"],
        "Delta_N": m.Delta_N, "Delta_E": m.Delta_E, "C": m.C,
        "rho_F": q["rho_F"],
        "S_N": q["S_N"], "S_E": q["S_E"], "S_QL": q["S_QL"], "S_QR": q["S_QR"],
        "S_lhyp": q["S_lhyp"], "S_hyp": q["S_hyp"],
        "sigma": 0.0 if baths.is_equilibrium else m.sigma,
        "sigma_half": q["sigma_half"],
    }
    if baths.is_equilibrium:
        record["epsilon_star"] = UNDEFINED
        record["epsilon_star_status"] = "equilibrium"
        record["saturation_ratio"] = UNDEFINED
        record["h_lhyp"] = {"a": 0.0, "b": 0.0}
    else:
        if baths.delta_beta == 0:
            record["epsilon_star"] = UNDEFINED
            record["epsilon_star_status"] = "isothermal"
        else:
            record["epsilon_star"] = baths.delta_betamu / baths.delta_beta
        record["saturation_ratio"] = m.S_hyp / (0.5 * m.sigma)
        record["h_lhyp"] = {"a": lin.a, "b": lin.b}
    record["ordering_slack"] = ordering_slack(q)
    lo, hi = truncate_domain(baths, T, spec)
    eps = np.linspace(lo, hi, config.point_samples)
    record["h_hyp"] = {"eps": eps.tolist(),
                       "h": np.asarray(hyper_weight(T, baths, eps)).tolist()}
    return {
        "schema_version": SCHEMA_VERSION,
        "config_echo": config.echo,
        "at": at,
        "baths": {"beta_L": baths.beta_L, "mu_L": baths.mu_L,
                  "beta_R": baths.beta_R, "mu_R": baths.mu_R},
        "record": record,
    }


__all__ = ["QUANTITIES", "OrderingViolation", "format_csv", "format_json",
           "ordering_slack", "point_report", "random_weights", "run_sweep",
           "verify"]
