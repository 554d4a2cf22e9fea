"""Sweep / point configuration: TOML documents and compiled-in presets.

Example document::

    schema_version = 1

    [transmission]
    kind = "double_dot"        # constant | boxcar | double_dot | tabulated
    gamma = 0.1
    omega = 0.1

    [baths]                    # or beta_mean, betamu_mean, delta_beta, delta_betamu
    T_L = 0.8
    T_R = 1.0
    mu_L = 0.0
    mu_R = 0.0

    [sweep]
    variable = "delta_mu"      # delta_mu | delta_T | delta_beta | delta_betamu
    start = 0.0
    stop = 4.0
    num_points = 41
    outputs = ["S_N", "S_E", "S_lhyp", "S_hyp", "sigma_half"]

    [quadrature]
    rel_tol = 1e-10

Sweep variables act on the base baths as follows (means held fixed):
``delta_mu`` sets mu_L = mu_c - v/2, mu_R = mu_c + v/2; ``delta_T`` sets
T_L = T_0 - v/2, T_R = T_0 + v/2; ``delta_beta`` and ``delta_betamu`` set
the corresponding gradient coordinate.
"""

from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import BathPair, Boxcar, Constant, DoubleDot, Tabulated, Transmission
from .errors import ConfigError, DomainError
from .quadrature import QuadratureSpec

SCHEMA_VERSION = 1

SWEEP_VARIABLES = ("delta_mu", "delta_T", "delta_beta", "delta_betamu")
QUANTITIES = ("S_N", "S_E", "S_QL", "S_QR", "S_lhyp", "S_hyp", "sigma_half",
              "J_N", "J_E", "rho_F")

VERIFY_DEFAULTS = {
    "random_weights": 20,
    "grid_nodes": 100_000,
    "subsample": 1,
    "seed": 0,
    "fcs_samples": 200,
    "saturation_tol": None,
}

PRESETS = {
    "fig2a": {
        "schema_version": 1,
        "transmission": {"kind": "double_dot", "gamma": 0.1, "omega": 0.1,
                         "eps0": 0.0},
        "baths": {"T_L": 0.8, "T_R": 1.0, "mu_L": 0.0, "mu_R": 0.0},
        "sweep": {"variable": "delta_mu", "start": 0.0, "stop": 4.0,
                  "num_points": 41, "outputs": list(QUANTITIES)},
    },
    "fig2b": {
        "schema_version": 1,
        "transmission": {"kind": "double_dot", "gamma": 6.5, "omega": 10.0,
                         "eps0": 0.0},
        "baths": {"T_L": 5.0, "T_R": 5.0, "mu_L": 6.0, "mu_R": 0.0},
        "sweep": {"variable": "delta_T", "start": 0.0, "stop": 8.0,
                  "num_points": 41, "outputs": list(QUANTITIES)},
    },
    # fig2a at delta_mu = 1 with both gradients scaled by 1e-3, swept in the
    # chemical gradient around that point
    "linres": {
        "schema_version": 1,
        "transmission": {"kind": "double_dot", "gamma": 0.1, "omega": 0.1,
                         "eps0": 0.0},
        "baths": {"beta_mean": 1.125, "betamu_mean": -0.0625,
                  "delta_beta": 0.25e-3, "delta_betamu": -1.125e-3},
        "sweep": {"variable": "delta_betamu", "start": -1.5e-3,
                  "stop": -0.75e-3, "num_points": 5,
                  "outputs": list(QUANTITIES)},
        "verify": {"saturation_tol": 1e-2},
    },
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    num_points: int

    def values(self):
        n = self.num_points
        step = (self.stop - self.start) / (n - 1)
        return [self.stop if i == n - 1 else self.start + i * step
                for i in range(n)]


@dataclass(frozen=True)
class SweepConfig:
    transmission: Transmission
    baths_base: BathPair
    sweep: SweepSpec | None
    quadrature: QuadratureSpec
    outputs: tuple
    verify: dict = field(default_factory=lambda: dict(VERIFY_DEFAULTS))
    point_samples: int = 101
    echo: dict = field(default_factory=dict, compare=False)

    def baths_at(self, value: float) -> BathPair:
        """Base baths with the swept coordinate set to ``value``."""
        if self.sweep is None:
            return self.baths_base
        return apply_sweep(self.baths_base, self.sweep.variable, value)


def apply_sweep(base: BathPair, variable: str, value: float) -> BathPair:
    if variable == "delta_mu":
        centre = 0.5 * (base.mu_L + base.mu_R)
        return BathPair(base.beta_L, centre - 0.5 * value,
                        base.beta_R, centre + 0.5 * value)
    if variable == "delta_T":
        t0 = 0.5 * (base.T_L + base.T_R)
        return BathPair.from_temperatures(t0 - 0.5 * value, base.mu_L,
                                          t0 + 0.5 * value, base.mu_R)
    if variable == "delta_beta":
        return BathPair.from_gradients(base.beta_mean, base.betamu_mean,
                                       value, base.delta_betamu)
    if variable == "delta_betamu":
        return BathPair.from_gradients(base.beta_mean, base.betamu_mean,
                                       base.delta_beta, value)
    raise ConfigError(f"unknown sweep variable {variable!r}")


def _number(table, key, where, default=None):
    if key not in table:
        if default is None:
            raise ConfigError(f"missing '{key}' in [{where}]")
        return default
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{where}] {key} must be a number, got {value!r}")
    return float(value)


def _transmission(table) -> Transmission:
    kind = table.get("kind")
    where = "transmission"
    if kind == "constant":
        return Constant(_number(table, "tau", where))
    if kind == "boxcar":
        return Boxcar(_number(table, "tau", where),
                      _number(table, "eps_lo", where),
                      _number(table, "eps_hi", where))
    if kind == "double_dot":
        return DoubleDot(_number(table, "gamma", where),
                         _number(table, "omega", where),
                         _number(table, "eps0", where, 0.0))
    if kind == "tabulated":
        if "eps" not in table or "values" not in table:
            raise ConfigError("tabulated transmission needs 'eps' and 'values'")
        return Tabulated(tuple(table["eps"]), tuple(table["values"]),
                         table.get("outside", "zero"))
    raise ConfigError(f"unknown transmission kind {kind!r}")


def _baths(table) -> BathPair:
    lr = {"T_L", "T_R", "mu_L", "mu_R"}
    grad = {"beta_mean", "betamu_mean", "delta_beta", "delta_betamu"}
    keys = set(table)
    if keys == lr:
        return BathPair.from_temperatures(
            _number(table, "T_L", "baths"), _number(table, "mu_L", "baths"),
            _number(table, "T_R", "baths"), _number(table, "mu_R", "baths"))
    if keys == grad:
        return BathPair.from_gradients(*(_number(table, k, "baths") for k in
                                         ("beta_mean", "betamu_mean",
                                          "delta_beta", "delta_betamu")))
    raise ConfigError("[baths] must give exactly T_L, T_R, mu_L, mu_R or "
                      "beta_mean, betamu_mean, delta_beta, delta_betamu")


def parse_config(doc: dict) -> SweepConfig:
    """Validate a configuration mapping and build a :class:`SweepConfig`."""
    doc = copy.deepcopy(doc)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} "
                          f"(expected {SCHEMA_VERSION})")
    known = {"schema_version", "transmission", "baths", "sweep",
             "quadrature", "verify", "point"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    for key in ("transmission", "baths"):
        if not isinstance(doc.get(key), dict):
            raise ConfigError(f"missing [{key}] table")
    try:
        transmission = _transmission(doc["transmission"])
        baths = _baths(doc["baths"])
        quad = doc.get("quadrature", {})
        unknown = set(quad) - set(QuadratureSpec.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown [quadrature] keys: {sorted(unknown)}")
        quadrature = QuadratureSpec(**quad)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc

    sweep = None
    outputs = QUANTITIES
    if "sweep" in doc:
        table = doc["sweep"]
        variable = table.get("variable")
        if variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep variable must be one of {SWEEP_VARIABLES}, "
                              f"got {variable!r}")
        start = _number(table, "start", "sweep")
        stop = _number(table, "stop", "sweep")
        num = table.get("num_points")
        if not isinstance(num, int) or isinstance(num, bool) or num < 2:
            raise ConfigError("num_points must be an integer >= 2")
        if not start < stop:
            raise ConfigError(f"sweep needs start < stop, got {start}, {stop}")
        sweep = SweepSpec(variable, start, stop, num)
        outputs = tuple(table.get("outputs", QUANTITIES))
        bad = [q for q in outputs if q not in QUANTITIES]
        if bad or not outputs:
            raise ConfigError(f"unknown output quantities {bad}; "
                              f"choose from {QUANTITIES}")
        for v in (start, stop):
            try:
                apply_sweep(baths, variable, v)
            except DomainError as exc:
                raise ConfigError(f"sweep value {v}: {exc}") from exc

    verify = dict(VERIFY_DEFAULTS)
    unknown = set(doc.get("verify", {})) - set(VERIFY_DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown [verify] keys: {sorted(unknown)}")
    verify.update(doc.get("verify", {}))
    samples = doc.get("point", {}).get("samples", 101)
    if not isinstance(samples, int) or samples < 2:
        raise ConfigError("[point] samples must be an integer >= 2")
    return SweepConfig(transmission, baths, sweep, quadrature, outputs,
                       verify, samples, echo=doc)


def load_config(source: str) -> SweepConfig:
    """Parse a preset name or a TOML file path."""
    if source in PRESETS:
        return parse_config(PRESETS[source])
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"{source!r} is neither a preset "
                          f"({', '.join(PRESETS)}) nor a readable file")
    try:
        doc = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(doc)


def preset(name: str, num_points: int | None = None) -> SweepConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    doc = copy.deepcopy(PRESETS[name])
    if num_points is not None:
        doc["sweep"]["num_points"] = num_points
    return parse_config(doc)
