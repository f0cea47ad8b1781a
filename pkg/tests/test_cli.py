import json
import subprocess
import sys
from pathlib import Path

import pytest

from qcollide.cli import (
    ParseError,
    SchemaError,
    ValidationError,
    load_config,
    main,
    run_scenario,
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestLoadConfig:
    def test_bundled_fixture(self):
        cfg = load_config(CONFIG_DIR / "qubit-demo.json")
        assert cfg.scenario == "qubit-demo"
        assert cfg.taus == [0.01]
        assert cfg.n_steps == 200

    @pytest.mark.parametrize(
        "name", ["qubit-demo", "converge", "bound-check", "oracle-check", "multibath", "custom"]
    )
    def test_all_bundled_configs_load(self, name):
        cfg = load_config(CONFIG_DIR / f"{name}.json")
        assert cfg.scenario == name

    def test_unknown_key_rejected(self, tmp_path):
        path = write(tmp_path, "bad.json", {"scenario": "qubit-demo", "foo": 1})
        with pytest.raises(SchemaError, match="foo"):
            load_config(path)

    def test_unknown_scenario_rejected(self, tmp_path):
        path = write(tmp_path, "bad.json", {"scenario": "warp"})
        with pytest.raises(SchemaError, match="scenario"):
            load_config(path)

    def test_parse_error_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"scenario": \n', encoding="utf-8")
        with pytest.raises(ParseError, match="line 2"):
            load_config(path)

    def test_non_hermitian_matrix_named(self, tmp_path):
        payload = {
            "scenario": "custom",
            "H_S": [[[0.5, 0.0], [1.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
            "H_A": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
            "V": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            "chi": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
        }
        path = write(tmp_path, "bad.json", payload)
        with pytest.raises(ValidationError, match="H_S"):
            load_config(path)

    def test_missing_seed_for_randomized(self, tmp_path):
        path = write(tmp_path, "bad.json", {"scenario": "bound-check"})
        with pytest.raises(ValidationError, match="seed"):
            load_config(path)

    def test_custom_requires_matrices(self, tmp_path):
        path = write(tmp_path, "bad.json", {"scenario": "custom"})
        with pytest.raises(ValidationError, match="H_S"):
            load_config(path)

    def test_tau_list_only_for_sweeps(self, tmp_path):
        path = write(tmp_path, "bad.json", {"scenario": "qubit-demo", "tau": [0.01, 0.02]})
        with pytest.raises(ValidationError, match="tau"):
            load_config(path)


class TestRunScenario:
    def test_qubit_demo_writes_trajectory(self, tmp_path):
        cfg = load_config(write(tmp_path, "demo.json", {"scenario": "qubit-demo", "n_steps": 20}))
        code = run_scenario(cfg, out_dir=tmp_path / "out")
        assert code == 0
        rows = (tmp_path / "out" / "trajectory.csv").read_text().strip().splitlines()
        assert rows[0].startswith("step,t,E_S,Q_A_cum,W_cum,W_C_cum,Q_inc_cum,Sigma_cum,")
        assert len(rows) == 21  # header + n_steps
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        assert report["scenario"] == "qubit-demo"
        assert all(check["pass"] for check in report["checks"])

    def test_custom_scenario_runs(self, tmp_path):
        cfg = load_config(CONFIG_DIR / "custom.json")
        assert run_scenario(cfg, out_dir=tmp_path) == 0

    def test_verification_failure_exits_two(self, tmp_path, capsys):
        # an energy-non-conserving interaction cannot keep |W| at zero
        payload = {
            "scenario": "custom",
            "H_S": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
            "H_A": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.5, 0.0]]],
            "V": [
                [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
            ],
            "chi": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
            "beta": 1.0,
            "lambda": 0.1,
            "tau": 0.01,
            "n_steps": 5,
        }
        cfg = load_config(write(tmp_path, "bad.json", payload))
        assert run_scenario(cfg, out_dir=tmp_path / "out") == 2
        lines = capsys.readouterr().out.strip().splitlines()
        assert any(line.startswith("CHECK work_scaled_max FAIL") for line in lines)

    def test_check_line_format(self, tmp_path, capsys):
        cfg = load_config(write(tmp_path, "demo.json", {"scenario": "qubit-demo", "n_steps": 3}))
        run_scenario(cfg, out_dir=tmp_path / "out")
        for line in capsys.readouterr().out.strip().splitlines():
            fields = line.split()
            assert fields[0] == "CHECK"
            assert fields[2] in ("PASS", "FAIL")
            assert fields[3].startswith("value=")
            assert fields[4].startswith("bound=")


class TestMainEntry:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["--version"])
        assert info.value.code == 0

    def test_validate_ok(self, capsys):
        assert main(["validate", "--config", str(CONFIG_DIR / "qubit-demo.json")]) == 0
        assert "OK scenario=qubit-demo" in capsys.readouterr().out

    def test_input_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "nope.json"
        assert main(["validate", "--config", str(path)]) == 1
        assert "error:" in capsys.readouterr().err


class TestSubprocessDeterminism:
    def test_bound_check_reproducible(self, tmp_path):
        config = tmp_path / "bound.json"
        config.write_text(
            json.dumps({"scenario": "bound-check", "seed": 42, "n_steps": 120}),
            encoding="utf-8",
        )
        outputs = []
        for tag in ("one", "two"):
            out = tmp_path / tag
            result = subprocess.run(
                [sys.executable, "-m", "qcollide", "run", "--config", str(config), "--out", str(out)],
                capture_output=True,
                text=True,
                timeout=300,
            )
            assert result.returncode == 0, result.stderr
            outputs.append(out)
        first, second = outputs
        assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()
        assert (first / "samples.csv").read_bytes() == (second / "samples.csv").read_bytes()

    def test_csv_numbers_roundtrip(self, tmp_path):
        config = tmp_path / "demo.json"
        config.write_text(json.dumps({"scenario": "qubit-demo", "n_steps": 5}), encoding="utf-8")
        out = tmp_path / "out"
        result = subprocess.run(
            [sys.executable, "-m", "qcollide", "run", "--config", str(config), "--out", str(out)],
            capture_output=True,
            text=True,
            timeout=300,
        )
        assert result.returncode == 0, result.stderr
        rows = (out / "trajectory.csv").read_text().strip().splitlines()[1:]
        for row in rows:
            for cell in row.split(",")[1:]:
                value = float(cell)
                assert format(value, ".17g") == cell
