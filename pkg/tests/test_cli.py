import json
import os
import subprocess
import sys

import pytest

from fiberlab.cli import main
from fiberlab.config import ConfigError, load_config, system_preset


def run(args):
    return main(list(args))


def read_all(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_system_presets_expand():
    for name in ("free-monoid-uniform", "z2-uniform", "f2-markov"):
        driving, fiber = system_preset(name)
        assert driving.alphabet.size in (2, 4)
        assert fiber.fiber_alphabet.size == 2
    with pytest.raises(ConfigError):
        system_preset("nope")


def test_load_config_validation():
    base = {"preset": "z2-uniform", "horizons": [100], "block_lengths": [2], "seeds": [1]}
    load_config(base)
    with pytest.raises(ConfigError):
        load_config({**base, "horizons": [100, 50]})  # not ascending
    with pytest.raises(ConfigError):
        load_config({**base, "horizons": [10 ** 8]})  # horizon cap
    with pytest.raises(ConfigError):
        load_config({**base, "block_lengths": [9]})  # (4*2)**9 > 2**24
    with pytest.raises(ConfigError):
        load_config({**base, "seeds": [-1]})
    with pytest.raises(ConfigError):
        load_config({**base, "format": "xml"})
    with pytest.raises(ConfigError):
        load_config({})


def test_cli_requires_preset_or_config(capsys):
    assert run(["entropy"]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_malformed_config_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(["entropy", "--config", str(bad)]) == 2


def test_cli_entropy_and_reports(tmp_path):
    out = tmp_path / "reports"
    code = run(["entropy", "--preset", "z2-uniform", "--k", "3", "--out", str(out)])
    assert code == 0
    text = (out / "entropy.csv").read_text()
    assert text.startswith("# fiberlab.entropy.v1\n")
    assert "2.75" in text


def test_cli_entropy_json_format(tmp_path):
    out = tmp_path / "reports"
    assert run(["entropy", "--preset", "z2-uniform", "--k", "3", "--out", str(out), "--format", "json"]) == 0
    payload = json.loads((out / "entropy.json").read_text())
    assert payload["schema"] == "fiberlab.entropy.v1"
    assert payload["rows"][0]["H_k"] == pytest.approx(2.75)


def test_cli_verify_brudno_passes_and_is_deterministic(tmp_path):
    out = tmp_path / "reports"
    args = [
        "verify-brudno",
        "--preset", "free-monoid-uniform",
        "--n", "4096", "--k", "4",
        "--seed", "1", "--seed", "2",
        "--out", str(out),
    ]
    assert run(args) == 0
    first = read_all(out)
    assert run(args) == 0
    assert read_all(out) == first
    summary = json.loads((out / "brudno_summary.json").read_text())
    assert summary["all_bounds_hold"] is True
    assert summary["max_gap_code_vs_exact"] == pytest.approx(0.0)


def test_cli_verify_ar_tolerance_zero_fails(tmp_path):
    out = tmp_path / "reports"
    base = ["verify-ar", "--preset", "f2-markov", "--n", "1000", "--k", "5", "--seed", "1", "--out", str(out)]
    assert run(base + ["--tolerance", "0.1"]) == 0
    # finite-n overhead is strictly positive, so tolerance 0 must fail
    assert run(base + ["--tolerance", "0"]) == 1
    summary = json.loads((out / "ar_summary.json").read_text())
    assert summary["pass"] is False


def test_cli_range_f2_is_identically_one(tmp_path):
    out = tmp_path / "reports"
    assert run(["range", "--preset", "f2-markov", "--n", "2000", "--seed", "3", "--out", str(out)]) == 0
    lines = (out / "range.csv").read_text().strip().splitlines()
    for line in lines[2:]:
        assert line.endswith(",1.0")


def test_cli_simulate_is_byte_identical(tmp_path):
    out = tmp_path / "reports"
    args = ["simulate", "--preset", "z2-uniform", "--n", "1000", "--seed", "7", "--out", str(out)]
    assert run(args) == 0
    first = read_all(out)
    assert run(args) == 0
    assert read_all(out) == first
    assert "simulate_seed7.csv" in first


def test_cli_config_file_round_trip(tmp_path):
    config = {
        "preset": "z2-uniform",
        "horizons": [500],
        "block_lengths": [2, 3],
        "seeds": [1],
        "out": str(tmp_path / "reports"),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    assert run(["entropy", "--config", str(path)]) == 0
    rows = (tmp_path / "reports" / "entropy.csv").read_text().strip().splitlines()
    assert len(rows) == 4  # schema comment, header, two block lengths


def test_cli_explicit_specs_in_config(tmp_path):
    config = {
        "driving": {"alphabet": ["0", "1"], "pi": ["1/2", "1/2"], "Pi": [["1/2", "1/2"], ["1/2", "1/2"]]},
        "fiber": {"action": "free-monoid", "fiber_alphabet": ["0", "1"], "p": ["1/2", "1/2"]},
        "horizons": [256],
        "block_lengths": [4],
        "seeds": [1],
        "out": str(tmp_path / "reports"),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    assert run(["verify-brudno", "--config", str(path)]) == 0


def test_cli_parallel_cells_match_serial_bytes(tmp_path):
    serial = tmp_path / "serial"
    parallel = tmp_path / "parallel"
    base = ["verify-brudno", "--preset", "free-monoid-uniform", "--n", "512", "--k", "4",
            "--seed", "1", "--seed", "2", "--seed", "3"]
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    cmd = [sys.executable, "-m", "fiberlab"]
    subprocess.run(cmd + base + ["--out", str(serial)], check=True,
                   env=dict(env, FIBERLAB_MAX_CELLS="1"), capture_output=True)
    subprocess.run(cmd + base + ["--out", str(parallel)], check=True,
                   env=dict(env, FIBERLAB_MAX_CELLS="3"), capture_output=True)
    assert read_all(serial) == read_all(parallel)
