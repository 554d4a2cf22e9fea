import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hypercurrent import ConfigError, DoubleDot, Tabulated
from hypercurrent.cli import main
from hypercurrent.config import PRESETS, load_config, parse_config, preset
from hypercurrent.sweep import (OrderingViolation, format_csv, ordering_slack,
                                point_report, run_sweep, verify)

DATA = Path(__file__).parent / "data"

FIG2A_TOML = """
schema_version = 1

[transmission]
kind = "double_dot"
gamma = 0.1
omega = 0.1

[baths]
T_L = 0.8
T_R = 1.0
mu_L = 0.0
mu_R = 0.0

[sweep]
variable = "delta_mu"
start = 0.5
stop = 2.5
num_points = 3
outputs = ["S_N", "S_E", "S_lhyp", "S_hyp", "sigma_half"]
"""


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "hypercurrent", *args],
                          capture_output=True, text=True)


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


@pytest.fixture
def toml_file(tmp_path):
    def write(text, name="config.toml"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


class TestConfig:
    def test_presets_parse(self):
        for name in PRESETS:
            cfg = load_config(name)
            assert cfg.sweep.num_points >= 5

    def test_fig2a_preset_contents(self):
        cfg = preset("fig2a")
        assert cfg.transmission == DoubleDot(0.1, 0.1, 0.0)
        assert cfg.sweep.num_points == 41
        assert cfg.baths_at(2.0).mu_L == -1.0 and cfg.baths_at(2.0).mu_R == 1.0

    def test_fig2b_sweeps_temperatures_about_mean(self):
        b = preset("fig2b").baths_at(4.0)
        assert (b.T_L, b.T_R) == pytest.approx((3.0, 7.0))
        assert (b.mu_L, b.mu_R) == (6.0, 0.0)

    def test_sweep_values_hit_endpoints(self):
        values = preset("fig2a", 7).sweep.values()
        assert values[0] == 0.0 and values[-1] == 4.0 and len(values) == 7

    def test_gradient_baths_and_tabulated(self, toml_file):
        cfg = load_config(toml_file("""
schema_version = 1
[transmission]
kind = "tabulated"
eps = [-1.0, 0.0, 1.0]
values = [0.0, 1.0, 0.0]
[baths]
beta_mean = 1.0
betamu_mean = 0.0
delta_beta = 0.01
delta_betamu = 0.02
[quadrature]
rel_tol = 1e-8
"""))
        assert isinstance(cfg.transmission, Tabulated)
        assert cfg.baths_base.delta_betamu == pytest.approx(0.02)
        assert cfg.quadrature.rel_tol == 1e-8 and cfg.sweep is None

    @pytest.mark.parametrize("mutate", [
        lambda d: d.update(schema_version=2),
        lambda d: d.update(extra=1),
        lambda d: d["transmission"].update(kind="laser"),
        lambda d: d["transmission"].update(gamma="big"),
        lambda d: d["transmission"].update(gamma=-1.0),
        lambda d: d["baths"].update(T_L=-1.0),
        lambda d: d["baths"].pop("mu_L"),
        lambda d: d["sweep"].update(variable="delta_x"),
        lambda d: d["sweep"].update(stop=0.0),
        lambda d: d["sweep"].update(num_points=1),
        lambda d: d["sweep"].update(outputs=["S_Q"]),
        lambda d: d.update(quadrature={"rel_tol": 0.0}),
        lambda d: d.update(quadrature={"bogus": 1.0}),
        lambda d: d.update(verify={"bogus": 1}),
    ])
    def test_rejects_bad_documents(self, mutate):
        import copy
        doc = copy.deepcopy(PRESETS["fig2a"])
        mutate(doc)
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_rejects_sweep_leaving_physical_range(self):
        import copy
        doc = copy.deepcopy(PRESETS["fig2b"])
        doc["sweep"]["stop"] = 12.0
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_missing_file_and_bad_toml(self, toml_file):
        with pytest.raises(ConfigError):
            load_config("/nonexistent/file.toml")
        with pytest.raises(ConfigError):
            load_config(toml_file("schema_version = ["))


class TestSweep:
    def test_matches_golden_files(self):
        for name in ("fig2a", "fig2b"):
            cols, rows = read_csv(format_csv(*run_sweep(preset(name, 5))))
            gold_cols, gold = read_csv((DATA / f"{name}_5.csv").read_text())
            assert cols == gold_cols
            for row, ref in zip(rows, gold):
                assert row == pytest.approx(ref, rel=1e-9, abs=1e-18)

    def test_rows_follow_sweep_order_and_ordering_holds(self):
        cols, rows = run_sweep(preset("fig2b", 9))
        assert [r[0] for r in rows] == preset("fig2b", 9).sweep.values()
        for row in rows[1:]:
            q = dict(zip(cols, row))
            assert ordering_slack(q) >= -1e-8 * q["S_hyp"]

    def test_ordering_violation_is_raised(self, monkeypatch):
        import hypercurrent.sweep as sweep_mod
        real = sweep_mod._point_quantities

        def broken(config, baths):
            m, lin, q = real(config, baths)
            q = dict(q, S_hyp=0.5 * q["S_lhyp"])
            return m, lin, q
        monkeypatch.setattr(sweep_mod, "_point_quantities", broken)
        cfg = preset("fig2a", 3)
        with pytest.raises(OrderingViolation):
            run_sweep(cfg)

    def test_equilibrium_row(self):
        cols, rows = run_sweep(preset("fig2b", 3))
        q = dict(zip(cols, rows[0]))
        # fig2b starts with equal temperatures but a chemical bias
        assert q["S_N"] > 0
        import copy
        doc = copy.deepcopy(PRESETS["fig2a"])
        doc["baths"]["T_L"] = 1.0
        cols, rows = run_sweep(parse_config(doc))
        q = dict(zip(cols, rows[0]))
        assert all(q[k] == 0.0 for k in ("S_N", "S_E", "S_lhyp", "S_hyp", "sigma_half"))


class TestPointReport:
    def test_fig2a_particle_current_nearly_optimal_linear(self):
        rec = point_report(preset("fig2a"), 1.0)["record"]
        assert rec["S_N"] == pytest.approx(rec["S_lhyp"], rel=1e-3)
        assert rec["S_hyp"] >= rec["S_lhyp"]
        assert rec["epsilon_star"] == pytest.approx(
            (1.25 * -0.5 - 1.0 * 0.5) / 0.25)

    def test_fig2b_linear_combination_beats_both_currents(self):
        rec = point_report(preset("fig2b"), 4.0)["record"]
        assert rec["S_lhyp"] > max(rec["S_E"], rec["S_N"])

    def test_equilibrium_point(self):
        import copy
        doc = copy.deepcopy(PRESETS["fig2a"])
        doc["baths"]["T_L"] = 1.0
        rep = point_report(parse_config(doc), 0.0)
        rec = rep["record"]
        assert rec["epsilon_star"] == "undefined"
        assert rec["epsilon_star_status"] == "equilibrium"
        assert rec["S_hyp"] == 0.0 and rec["sigma_half"] == 0.0
        assert all(h == 0.0 for h in rec["h_hyp"]["h"])

    def test_isothermal_point(self):
        import copy
        doc = copy.deepcopy(PRESETS["fig2a"])
        doc["baths"]["T_L"] = 1.0
        rec = point_report(parse_config(doc), 1.0)["record"]
        assert rec["epsilon_star"] == "undefined"
        assert rec["epsilon_star_status"] == "isothermal"

    def test_samples_and_echo(self):
        rep = point_report(preset("fig2b"), 2.0)
        assert rep["schema_version"] == 1
        assert rep["config_echo"]["transmission"]["kind"] == "double_dot"
        assert len(rep["record"]["h_hyp"]["eps"]) == 101


class TestVerify:
    def test_preset_passes(self):
        report = verify(preset("fig2b", 5), random_weight_count=5, grid_nodes=20_000)
        assert report["passed"], [c for c in report["checks"] if not c["passed"]]

    def test_tampering_is_caught(self):
        report = verify(preset("fig2a", 3), random_weight_count=2, grid_nodes=20_000,
                        tamper={"grid_oracle_snr": 1e-3})
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        assert failed == ["grid_oracle_snr"]


class TestCommandLine:
    def test_sweep_from_file(self, toml_file):
        out = run_cli("sweep", toml_file(FIG2A_TOML), "--quiet")
        assert out.returncode == 0, out.stderr
        cols, rows = read_csv(out.stdout)
        assert cols == ["delta_mu", "S_N", "S_E", "S_lhyp", "S_hyp", "sigma_half"]
        assert [r[0] for r in rows] == [0.5, 1.5, 2.5]
        assert not out.stdout.splitlines()[0].endswith(",")

    def test_json_output(self, toml_file):
        out = run_cli("sweep", toml_file(FIG2A_TOML), "--format", "json", "--quiet")
        doc = json.loads(out.stdout)
        assert doc["schema_version"] == 1
        assert doc["config_echo"]["sweep"]["num_points"] == 3
        assert len(doc["rows"]) == 3 and set(doc["rows"][0]) >= {"delta_mu", "S_hyp"}

    def test_out_file(self, tmp_path):
        target = tmp_path / "out.csv"
        assert main(["preset", "fig2a", "--points", "3", "--out", str(target), "--quiet"]) == 0
        assert target.read_text().startswith("delta_mu,")

    def test_point_command(self):
        out = run_cli("point", "fig2a", "--at", "1.0", "--quiet")
        assert out.returncode == 0
        assert json.loads(out.stdout)["record"]["S_hyp"] > 0

    def test_point_needs_at_for_sweep_configs(self):
        assert main(["point", "fig2a", "--quiet"]) == 1

    def test_verify_command(self):
        out = run_cli("verify", "fig2b", "--grid-nodes", "20000", "--quiet")
        assert out.returncode == 0, out.stdout + out.stderr

    def test_verify_fault_injection(self):
        out = run_cli("verify", "fig2a", "--grid-nodes", "20000", "--quiet",
                      "--inject-fault", "linear_consistency:1e-4")
        assert out.returncode == 3
        assert json.loads(out.stdout)["failed_checks"] == ["linear_consistency"]
        assert "linear_consistency" in out.stderr

    @pytest.mark.parametrize("text", [
        "schema_version = 1\n[transmission]\nkind = 'constant'\ntau = 2.0\n"
        "[baths]\nT_L = 1.0\nT_R = 1.0\nmu_L = 0.0\nmu_R = 0.0\n",
        FIG2A_TOML.replace("stop = 2.5", "stop = 0.5"),
        "not toml at all [",
    ])
    def test_config_errors_exit_1(self, toml_file, text):
        out = run_cli("sweep", toml_file(text), "--quiet")
        assert out.returncode == 1
        assert "configuration error" in out.stderr

    def test_bad_tolerance_exits_1(self):
        assert main(["preset", "fig2a", "--points", "3", "--rel-tol", "-1", "--quiet"]) == 1

    def test_convergence_failure_exits_2(self, toml_file):
        text = FIG2A_TOML + "\n[quadrature]\nrel_tol = 1e-14\nabs_tol = 0.0\nmax_subdivisions = 8\n"
        out = run_cli("sweep", toml_file(text), "--quiet")
        assert out.returncode == 2
        assert "convergence" in out.stderr

    def test_deterministic_output(self):
        first = run_cli("preset", "fig2b", "--points", "5", "--quiet")
        second = run_cli("preset", "fig2b", "--points", "5", "--quiet")
        assert first.returncode == 0
        assert first.stdout == second.stdout

    def test_version(self, capsys):
        with pytest.raises(SystemExit):
            main(["--version"])
        assert capsys.readouterr().out.strip() == "0.1.0"
