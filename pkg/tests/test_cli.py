import json
import math
import subprocess
import sys

import numpy as np
import pytest

from phaseloc.cli import main, to_jsonable
from phaseloc.fieldio import read_binary, read_csv


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_grid_vacuum_csv(tmp_path, capsys):
    assert run(tmp_path, "grid", "--state", "vacuum", "--grid-N", "64") == 0
    field = read_csv(tmp_path / "field_vacuum_s0.csv")
    values = np.asarray(field.values)
    # samples are cell-centred, so the peak sits half a cell from the origin
    h = field.grid.spacing
    assert values.max() == pytest.approx(2 / math.pi * math.exp(-2 * 2 * (h / 2) ** 2), rel=1e-12)
    assert "normalisation" in capsys.readouterr().out


def test_grid_husimi_of_fock_is_nonnegative(tmp_path):
    args = ("grid", "--state", "fock:3", "--order", "-1", "--grid-N", "64", "--format", "bin", "--format", "json")
    assert run(tmp_path, *args) == 0
    field = read_binary(tmp_path / "field_fock_3_s-1.bin")
    assert field.order == -1
    assert np.asarray(field.values).min() >= 0
    meta = json.loads((tmp_path / "field_fock_3_s-1.json").read_text())
    assert meta["normalisation"] == pytest.approx(1.0, abs=1e-8)
    assert meta["config"]["grid"]["resolved_R"]["fock:3"] == field.grid.half_extent


def test_grid_intermediate_order(tmp_path):
    assert run(tmp_path, "grid", "--state", "fock:1", "--order", "-0.5", "--grid-N", "64") == 0
    assert (tmp_path / "field_fock_1_s-0.5.csv").exists()


@pytest.mark.parametrize(
    "args",
    [
        ("grid", "--state", "vacuum", "--order", "0.5"),
        ("grid", "--state", "coherant:1"),
        ("grid", "--state", "vacuum", "--state", "fock:1"),
        ("measures", "--state", "vacuum", "--grid-N", "15"),
        ("measures", "--state", "vacuum", "--grid-R", "-2"),
        ("verify", "--state", "vacuum", "--cutoff", "0"),
        ("verify", "--state", "vacuum", "--workers", "0"),
    ],
)
def test_bad_arguments_exit_2(tmp_path, capsys, args):
    assert run(tmp_path, *args) == 2
    assert "error:" in capsys.readouterr().err


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(tmp_path, "verify", "--config", str(bad)) == 2
    bad.write_text(json.dumps({"states": []}))
    assert run(tmp_path, "verify", "--config", str(bad)) == 2
    bad.write_text(json.dumps({"sates": ["vacuum"]}))
    assert run(tmp_path, "verify", "--config", str(bad)) == 2
    bad.write_text(json.dumps({"states": ["vacuum"], "relations": ["nope"]}))
    assert run(tmp_path, "verify", "--config", str(bad)) == 2


def test_unknown_format_rejected_by_parser(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(tmp_path, "verify", "--format", "xml")
    assert exc.value.code == 2


def test_verify_writes_verdicts_and_echoes_config(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "states": ["coherent:1", "fock:1"],
        "relations": ["renyi_infty_case", "collision_case"],
        "grid": {"N": 128},
    }))
    assert run(tmp_path, "verify", "--config", str(cfg)) == 0
    data = json.loads((tmp_path / "verdicts.json").read_text())
    assert data["config"]["states"] == ["coherent:1", "fock:1"]
    assert data["config"]["grid"]["N"] == 128
    assert set(data["config"]["grid"]["resolved_R"]) == {"coherent:1.0", "fock:1"}
    assert data["summary"]["failed"] == 0
    ids = [(v["state_tag"], v["relation_id"]) for v in data["verdicts"]]
    assert ids == [("coherent:1.0", "collision_case"), ("coherent:1.0", "renyi_infty_case"),
                   ("fock:1", "collision_case"), ("fock:1", "renyi_infty_case")]
    inf_case = data["verdicts"][1]
    assert inf_case["equality_expected"] is True and inf_case["passed"] is True
    assert (tmp_path / "verdicts_table.txt").read_text().count("PASS") == 4
    assert "4 passed, 0 failed" in capsys.readouterr().out


def test_verify_flags_override_config(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"states": ["fock:1"], "relations": ["p_infty_case"], "grid": {"N": 64}}))
    assert run(tmp_path, "verify", "--config", str(cfg), "--state", "vacuum", "--grid-N", "96") == 0
    data = json.loads((tmp_path / "verdicts.json").read_text())
    assert data["config"]["states"] == ["vacuum"] and data["config"]["grid"]["N"] == 96


def test_verify_reports_failed_state_with_exit_1(tmp_path):
    args = ("verify", "--state", "vacuum", "--state", "fock:70", "--grid-N", "64")
    assert run(tmp_path, *args) == 1
    data = json.loads((tmp_path / "verdicts.json").read_text())
    bad = [v for v in data["verdicts"] if v["state_tag"] == "fock:70"]
    assert bad and all(v["error"].startswith("ConfigError") and v["slack"] is None for v in bad)


def test_output_is_byte_identical(tmp_path):
    args = ("measures", "--state", "thermal:1", "--state", "cat:1.5,odd", "--grid-N", "64")
    assert run(tmp_path, *args) == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["measures_00_thermal_1.0.json", "measures_01_cat_1.5_3.141592653589793.json", "measures_table.txt"]
    first = {name: (tmp_path / name).read_bytes() for name in files}
    assert run(tmp_path, *args) == 0
    assert first == {name: (tmp_path / name).read_bytes() for name in files}


def test_measures_json_content(tmp_path):
    assert run(tmp_path, "measures", "--state", "vacuum", "--grid-N", "64", "--format", "json") == 0
    data = json.loads((tmp_path / "measures_00_vacuum.json").read_text())
    rep = data["report"]
    assert rep["wehrl"] == pytest.approx(1 + math.log(math.pi), abs=1e-6)
    assert rep["renyi_wehrl"][-1][0] == "inf"
    assert not (tmp_path / "measures_table.txt").exists()


def test_report_bundles_everything(tmp_path):
    args = ("report", "--state", "vacuum", "--grid-N", "64", "--format", "json")
    assert run(tmp_path, *args) == 0
    data = json.loads((tmp_path / "report.json").read_text())
    assert set(data) == {"config", "measures", "summary", "verdicts"}
    assert data["summary"]["total"] == len(data["verdicts"]) == 14


def test_jsonable_special_values():
    assert to_jsonable({"a": math.inf, "b": math.nan, "c": (1, np.float64(2.5)), "d": np.bool_(True)}) == {
        "a": "inf", "b": None, "c": [1, 2.5], "d": True}


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "phaseloc", "grid", "--state", "vacuum", "--grid-N", "32", "--out", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert "normalisation" in proc.stdout
