"""CLI: config round-trip, CSV determinism, command plumbing."""

import csv
import json
from pathlib import Path

import numpy as np
import pytest

from jbmvqe.cli import (CSV_COLUMNS, ExperimentConfig, initial_parameters,
                        main, parse_config, serialize_config,
                        shots_to_beat_hf, write_log_csv)
from jbmvqe.ansatz import AnsatzCircuit
from jbmvqe.engine import IterationLog

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "jbmvqe" \
    / "fixtures"


def h2_config(tmp_path, **overrides):
    cfg = ExperimentConfig(hamiltonian_path=str(FIXTURE_DIR / "h2.ham"),
                           output_dir=str(tmp_path / "out"), **overrides)
    path = tmp_path / "exp.ini"
    path.write_text(serialize_config(cfg))
    return cfg, path


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig(
        hamiltonian_path="x.ham", method="JBM", depth=3, trials=7,
        seed_base=11, learning_rate=0.125, shift=float(np.pi / 2),
        sign_period=10, bell_shots=100, sign_shots_per_group=9,
        vqe_shots_per_group=55, stop_window=20, stop_delta=0.01,
        max_iterations=123, oracle=True, stop_at_hf=True,
        output_dir="there")
    assert parse_config(serialize_config(cfg)) == cfg


def test_config_float_round_trip_exact():
    cfg = ExperimentConfig(hamiltonian_path="x", learning_rate=0.1 + 1e-17,
                           stop_delta=1.0 / 3.0)
    back = parse_config(serialize_config(cfg))
    assert back.learning_rate == cfg.learning_rate
    assert back.stop_delta == cfg.stop_delta


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(hamiltonian_path="x", trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(hamiltonian_path="x", method="quantum")


def test_initial_parameters_deterministic_and_in_range():
    circuit = AnsatzCircuit(4, 2, 2)
    a = initial_parameters(circuit, 7)
    b = initial_parameters(circuit, 7)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (8,)
    assert np.all((0 <= a) & (a < np.pi / 5))
    assert not np.array_equal(a, initial_parameters(circuit, 8))


def test_write_log_csv_byte_deterministic(tmp_path):
    log = IterationLog()
    log.append(1, -1.100000000000001, -1.2, 100, True)
    log.append(2, -1.3, -1.4000000000000001, 250, False)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_log_csv(log, p1)
    write_log_csv(log, p2)
    assert p1.read_bytes() == p2.read_bytes()
    rows = list(csv.reader(p1.open()))
    assert rows[0] == list(CSV_COLUMNS)
    # repr round-trip: exact float recovery
    assert float(rows[1][1]) == -1.100000000000001
    assert float(rows[2][2]) == -1.4000000000000001
    assert rows[2] == ["2", "-1.3", "-1.4000000000000001", "250", "0"]


def test_shots_to_beat_hf():
    log = IterationLog()
    log.append(1, -1.0, -1.0, 10, False)
    log.append(2, -1.2, -1.2, 20, False)
    assert shots_to_beat_hf(log, hf_energy=-1.1) == 20
    assert shots_to_beat_hf(log, hf_energy=-1.3) is None


def test_thresholds_command_small(capsys):
    rc = main(["thresholds", "--kind", "SM", "--tau", "0.3", "--p", "0.8",
               "--grid-count", "41"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "tau\tp=0.8"
    assert out.splitlines()[1].startswith("0.3\t")
    int(out.splitlines()[1].split("\t")[1])  # an integer threshold


def test_thresholds_sign_command(capsys):
    rc = main(["thresholds", "--kind", "SIGN", "--shots", "17",
               "--expectation", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "0.801" in out


def test_groups_command(capsys):
    rc = main(["groups", str(FIXTURE_DIR / "h2.ham")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "terms: 14" in out
    assert "groups: 5" in out


def test_groundstate_command(capsys):
    rc = main(["groundstate", str(FIXTURE_DIR / "h2.ham")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "-1.137283" in out


def test_run_command_writes_csv(tmp_path, capsys):
    cfg, path = h2_config(tmp_path, method="JBM", max_iterations=4,
                          trials=1)
    rc = main(["run", "--config", str(path), "--seed", "3"])
    assert rc == 0
    out_csv = Path(cfg.output_dir) / "run_JBM_3.csv"
    rows = list(csv.reader(out_csv.open()))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 5
    assert [r[0] for r in rows[1:]] == ["1", "2", "3", "4"]
    shots = [int(r[3]) for r in rows[1:]]
    assert shots == sorted(shots)


def test_run_command_deterministic(tmp_path):
    cfg, path = h2_config(tmp_path, method="conventional",
                          max_iterations=3, trials=1)
    main(["run", "--config", str(path), "--seed", "5"])
    first = (Path(cfg.output_dir) / "run_conventional_5.csv").read_bytes()
    main(["run", "--config", str(path), "--seed", "5"])
    second = (Path(cfg.output_dir) / "run_conventional_5.csv").read_bytes()
    assert first == second


def test_compare_command(tmp_path, capsys):
    cfg, path = h2_config(tmp_path, trials=2, max_iterations=150,
                          stop_at_hf=True)
    rc = main(["compare", "--config", str(path), "--quiet"])
    assert rc == 0
    summary = json.loads((Path(cfg.output_dir) / "compare.json").read_text())
    assert summary["trials"] == 2
    assert set(summary["success_rate"]) == {"conventional", "JBM"}
    assert len(summary["per_trial"]) == 2
    for record in summary["per_trial"]:
        for method in ("conventional", "JBM"):
            assert "shots_to_beat_hf" in record[method]
        csv_path = Path(cfg.output_dir) / \
            f"trial_{record['seed']}_JBM.csv"
        assert csv_path.exists()
    ratios = summary["ratios"]
    if ratios:
        assert summary["mean_ratio_conventional_over_jbm"] == \
            pytest.approx(float(np.mean(ratios)))


def test_compare_oracle_flag(tmp_path):
    cfg, path = h2_config(tmp_path, trials=1, max_iterations=10)
    rc = main(["compare", "--config", str(path), "--quiet", "--oracle"])
    assert rc == 0
    summary = json.loads((Path(cfg.output_dir) / "compare.json").read_text())
    assert summary["per_trial"][0]["JBM"]["iterations"] == 10
