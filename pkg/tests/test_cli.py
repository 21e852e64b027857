import json
import subprocess
import sys

import jsonschema
import pytest

from rabifloquet.cli import main, output_schema


def run_cli(args, tmp_path=None):
    proc = subprocess.run(
        [sys.executable, "-m", "rabifloquet.cli", *args],
        capture_output=True, text=True,
    )
    return proc


class TestDynamics:
    def test_csv_shape_and_initial_row(self, tmp_path):
        out = tmp_path / "dyn.csv"
        rc = main(["dynamics", "--omega", "0.6", "--amp", "2", "--periods", "5",
                   "--samples", "40", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,p1_numeric,p1_chrw,p1_floquet"
        first = lines[1].split(",")
        assert len(first) == 4
        assert float(first[0]) == 0.0
        assert abs(float(first[1])) < 1e-12

    def test_gray_area_cells_empty_with_sidecar(self, tmp_path):
        out = tmp_path / "dyn.csv"
        rc = main(["dynamics", "--omega", "1", "--amp", "5", "--periods", "2",
                   "--samples", "10", "--out", str(out)])
        assert rc == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        assert all(row[2] == "" for row in rows)
        sidecar = tmp_path / "dyn.csv.warnings"
        assert sidecar.exists()
        assert "unavailable" in sidecar.read_text()

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["dynamics", "--omega", "0.6", "--amp", "1.5", "--periods", "3",
                "--samples", "25"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_validates_against_schema(self, tmp_path):
        out = tmp_path / "dyn.json"
        rc = main(["dynamics", "--omega", "1", "--amp", "1", "--periods", "2",
                   "--samples", "12", "--format", "json", "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        jsonschema.validate(doc, output_schema())
        assert doc["meta"]["config"]["amp"] == 1.0
        assert len(doc["data"]["t"]) == 12


class TestConfigMerge:
    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"omega": 1.0, "amp": 1.0, "periods": 2, "samples": 9}))
        out = tmp_path / "o.json"
        rc = main(["dynamics", "--config", str(cfg), "--amp", "2",
                   "--format", "json", "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["meta"]["config"]["amp"] == 2.0
        assert doc["meta"]["config"]["omega"] == 1.0

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"omega": 1.0, "bogus": 3}))
        proc = run_cli(["dynamics", "--config", str(cfg), "--amp", "1", "--periods", "1"])
        assert proc.returncode == 2
        assert "bogus" in proc.stderr


class TestOtherSubcommands:
    def test_chrw_map_no_solution_cell(self, tmp_path):
        out = tmp_path / "map.csv"
        rc = main(["chrw-map", "--omega-range", "1:1:1", "--amp-range", "5:5:1",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "omega_over_omega0,A_over_omega0,count"
        assert lines[1].split(",") == ["1", "5", "0"]

    def test_spectrum_sources(self, tmp_path):
        out = tmp_path / "spec.csv"
        rc = main(["spectrum", "--omega", "0.6", "--amp-range", "1:1:1",
                   "--nmax", "1", "--out", str(out)])
        assert rc == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        sources = {row[3] for row in rows}
        assert sources == {"numeric", "gvv", "grwa", "chrw"}

    def test_open_two_traces(self, tmp_path):
        out = tmp_path / "open.csv"
        rc = main(["open", "--omega", "1", "--amp", "10", "--gamma10", "1",
                   "--gamma11", "0.2", "--periods", "1", "--samples", "15",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,p1_lab_lindblad,p1_gvv_lindblad"
        assert len(lines) == 16


class TestExitCodes:
    def test_missing_required_flag_is_usage_error(self):
        proc = run_cli(["dynamics", "--omega", "1"])
        assert proc.returncode == 2

    def test_bad_range_syntax_is_usage_error(self):
        proc = run_cli(["chrw-map", "--omega-range", "nonsense", "--amp-range", "1:2:1"])
        assert proc.returncode == 2

    def test_numerical_domain_failure_is_exit_one(self):
        proc = run_cli(["dynamics", "--omega", "-0.6", "--amp", "1", "--periods", "1"])
        assert proc.returncode == 1
        assert "error:" in proc.stderr
