"""Command-line interface: exit codes, report schema, config echo, and
byte-identical reruns."""

import json

import numpy as np
import pytest

import ergokit
from ergokit.cli import main
from ergokit.serialize import density_from_csv


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out else None
    return code, payload, captured.err


def test_invariant_tent_16_bins_is_uniform(capsys, tmp_path):
    out = tmp_path / "density.csv"
    code, payload, _ = _run(capsys, ["invariant", "--map", "tent",
                                     "--bins", "16", "--out", str(out)])
    assert code == 0
    assert payload["schema"] == 1
    assert payload["tool"] == "ergokit"
    assert payload["version"] == ergokit.__version__
    assert payload["subcommand"] == "invariant"
    assert payload["config"]["bins"] == 16
    assert payload["config"]["map"] == "tent"
    # defaults are echoed even when not passed on the command line
    assert payload["config"]["tol"] == 1e-12
    assert payload["config"]["timing"] is False
    assert payload["result"]["min_mass"] == pytest.approx(1.0 / 16, rel=1e-12)
    assert payload["result"]["max_mass"] == pytest.approx(1.0 / 16, rel=1e-12)
    d = density_from_csv(out.read_text())
    np.testing.assert_allclose(d.masses, np.full(16, 1.0 / 16), rtol=1e-12)


def test_certify_exit_codes_span_the_outcomes(capsys):
    code, payload, _ = _run(capsys, ["certify", "--map", "cubic", "--grid", "20000"])
    assert code == 0
    assert payload["result"]["status"] == "certified"
    assert payload["result"]["inf_bound"] > 1.0

    code, payload, _ = _run(capsys, ["certify", "--map", "ricker",
                                     "--param", "lambda=0.95", "--grid", "20000"])
    assert code == 3
    assert payload["result"]["status"] == "inconclusive"

    code, payload, _ = _run(capsys, ["certify", "--map", "tent"])
    assert code == 4
    assert payload["result"]["status"] == "precondition-failed"
    assert payload["result"]["raw_infimum"] is None


def test_certify_criterion_note_when_not_applicable(capsys):
    # above the closed-form threshold the certificate rests on the grid
    # infimum alone and says so
    code, payload, _ = _run(capsys, ["certify", "--map", "ricker",
                                     "--param", "lambda=0.47", "--grid", "20000"])
    assert code == 0
    assert payload["config"]["param"] == {"lambda": 0.47}
    assert payload["config"]["grid"] == 20000
    assert payload["result"]["criterion"] is not None
    assert any("criterion" in note for note in payload["result"]["notes"])


def test_runtime_errors_exit_2(capsys):
    code, payload, err = _run(capsys, ["certify", "--map", "ricker",
                                       "--param", "lambda=1.5"])
    assert code == 2
    assert payload is None
    assert "error" in err

    code, _, err = _run(capsys, ["certify", "--map", "tent", "--param", "weird"])
    assert code == 2
    assert "name=value" in err


def test_threads_env_echoed_and_validated(capsys, monkeypatch):
    monkeypatch.setenv("ERGOKIT_THREADS", "2")
    code, payload, _ = _run(capsys, ["invariant", "--map", "tent", "--bins", "8"])
    assert code == 0
    assert payload["config"]["threads"] == 2

    monkeypatch.setenv("ERGOKIT_THREADS", "abc")
    code, payload, err = _run(capsys, ["invariant", "--map", "tent", "--bins", "8"])
    assert code == 2
    assert "ERGOKIT_THREADS" in err

    monkeypatch.delenv("ERGOKIT_THREADS")
    code, payload, _ = _run(capsys, ["invariant", "--map", "tent", "--bins", "8"])
    assert payload["config"]["threads"] is None


def test_reruns_are_byte_identical(capsys, tmp_path):
    out = tmp_path / "ens.csv"
    argv = ["sample", "--kind", "ou", "--lam", "0.5", "--t-max", "1.0",
            "--dt", "0.1", "--n-samples", "3", "--seed", "7", "--out", str(out)]
    code = main(argv)
    first_json = capsys.readouterr().out
    first_csv = out.read_bytes()
    code = main(argv)
    second_json = capsys.readouterr().out
    assert code == 0
    assert second_json == first_json
    assert out.read_bytes() == first_csv


def test_timing_adds_wall_clock_only_on_request(capsys):
    _, payload, _ = _run(capsys, ["birkhoff", "--map", "logistic", "--x0", "0.2",
                                  "--iters", "1000"])
    assert "wall_clock_s" not in payload
    _, payload, _ = _run(capsys, ["birkhoff", "--map", "logistic", "--x0", "0.2",
                                  "--iters", "1000", "--timing"])
    assert payload["wall_clock_s"] > 0.0


def test_iterate_accepts_a_density_csv_start(capsys, tmp_path):
    start = tmp_path / "start.csv"
    code, _, _ = _run(capsys, ["invariant", "--map", "logistic",
                               "--bins", "32", "--out", str(start)])
    assert code == 0
    code, payload, _ = _run(capsys, ["iterate", "--map", "logistic", "--bins", "32",
                                     "--steps", "3", "--start", str(start)])
    assert code == 0
    # one distance per completed step
    assert len(payload["result"]["l1_to_invariant"]) == 3
    # a start density on the wrong partition is refused
    code, _, err = _run(capsys, ["iterate", "--map", "logistic", "--bins", "64",
                                 "--steps", "3", "--start", str(start)])
    assert code == 2
    assert "bins" in err


def test_semiflow_writes_frames_and_plot(capsys, tmp_path):
    out, plot = tmp_path / "traj.csv", tmp_path / "traj.svg"
    code, payload, _ = _run(capsys, ["semiflow", "--lam", "1.0", "--t-max", "0.5",
                                     "--dt", "0.1", "--n-grid", "65",
                                     "--out", str(out), "--plot", str(plot)])
    assert code == 0
    assert payload["result"]["n_frames"] == 6
    assert out.read_text().startswith("t,x,value\n")
    assert plot.read_bytes().startswith(b"<?xml")


def test_invariant_plot_with_overlay(capsys, tmp_path):
    plot = tmp_path / "density.svg"
    code, _, _ = _run(capsys, ["invariant", "--map", "logistic",
                               "--bins", "16", "--plot", str(plot)])
    assert code == 0
    assert plot.exists()


def test_plot_refused_where_no_plotter_exists(capsys):
    code, _, err = _run(capsys, ["birkhoff", "--map", "logistic", "--x0", "0.3",
                                 "--iters", "100", "--plot", "x.svg"])
    assert code == 2
    assert "no plot output" in err


def test_sample_invariant_row_count(capsys, tmp_path):
    out = tmp_path / "states.csv"
    code, payload, _ = _run(capsys, ["sample", "--kind", "invariant", "--lam", "0.8",
                                     "--n-grid", "17", "--n-samples", "2",
                                     "--seed", "3", "--out", str(out)])
    assert code == 0
    assert payload["result"]["n_points"] == 17
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 2 * 17
    assert lines[0] == "sample_id,t,value"


def test_turbulence_cli_reports_pointwise_probes(capsys):
    code, payload, _ = _run(capsys, ["turbulence", "--lam", "0.5", "--horizon", "50",
                                     "--dt", "0.05", "--seed", "11",
                                     "--probe-x", "0.5"])
    assert code == 0
    res = payload["result"]
    assert isinstance(res["gamma0_significant"], bool)
    assert set(res["pointwise"]) == {"0.5"}
    assert len(res["pointwise"]["0.5"]) == len(res["lags"])


def test_stationarity_cli_smoke(capsys):
    code, payload, _ = _run(capsys, ["stationarity", "--lam", "1.0", "--t", "0.5",
                                     "--n-samples", "50", "--seed", "5",
                                     "--n-grid", "101"])
    assert code == 0
    assert isinstance(payload["result"]["stationary"], bool)
    assert len(payload["result"]["z_mean"]) == 5


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert ergokit.__version__ in capsys.readouterr().out
