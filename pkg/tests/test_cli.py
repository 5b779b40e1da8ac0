import subprocess
import sys

import numpy as np
import pytest

from xwigner import cli
from xwigner import io as xio
from xwigner.certify import CheckResult
from xwigner.crosswigner import gouy_delta_free, gouy_delta_slit
from xwigner.states import PhysicalConfig


def run(args, capsys=None):
    code = cli.main(args)
    return code


def test_help_runs():
    out = subprocess.run([sys.executable, "-m", "xwigner", "--help"], capture_output=True,
                         text=True)
    assert out.returncode == 0
    for verb in cli.VERBS:
        assert verb in out.stdout
    assert "inject" not in out.stdout


def test_free_cw_sweeps_both_gammas(tmp_path, capsys):
    assert run(["free-cw", "--out", str(tmp_path), "--grid", "31,21"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == sorted(f"free_cw_{g}_{kind}.csv" for g in ("g+0", "g-1")
                           for kind in ("gouy", "nogouy", "xt_k0"))
    a0, a1, v, meta = xio.read_grid_csv(tmp_path / "free_cw_g-1_gouy.csv")
    assert v.shape == (31, 21)
    assert meta["gamma"] == "-1.0" and meta["normalization"] == "none"
    assert float(meta["delta_mu"]) == pytest.approx(gouy_delta_free(PhysicalConfig(gamma=-1), 0.05))
    _, _, off, _ = xio.read_grid_csv(tmp_path / "free_cw_g-1_nogouy.csv")
    np.testing.assert_allclose(np.abs(v), np.abs(off), rtol=1e-12)


def test_free_cw_single_gamma_normalised(tmp_path):
    assert run(["free-cw", "--gamma", "0.5", "--no-gouy", "--normalize", "--grid", "21,21",
                "--out", str(tmp_path), "--format", "bin"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["free_cw_g+0.5_nogouy.bin", "free_cw_g+0.5_xt_k0.bin"]
    _, _, v = xio.read_grid_bin(tmp_path / "free_cw_g+0.5_nogouy.bin")
    assert np.max(np.abs(v)) == pytest.approx(1.0)


def test_slit_cw_outputs(tmp_path):
    assert run(["slit-cw", "--out", str(tmp_path), "--grid", "21,21"]) == 0
    assert (tmp_path / "slits_cw.csv").exists()
    lines = [ln for ln in (tmp_path / "gouy_discrepancy.csv").read_text().splitlines()
             if not ln.startswith("#")]
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    g, dmu, diff = rows.T
    np.testing.assert_allclose(dmu, [gouy_delta_slit(PhysicalConfig(gamma=x)) for x in g])
    np.testing.assert_allclose(diff, 2 * np.abs(np.sin(dmu / 2)), rtol=1e-9)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("gamma=-1\nsigma0=5\ngrid=21,21\n")
    assert run(["free-cw", "--config", str(cfg), "--gamma", "0", "--out",
                str(tmp_path / "o")]) == 0
    _, _, _, meta = xio.read_grid_csv(tmp_path / "o" / "free_cw_g+0_gouy.csv")
    assert meta["gamma"] == "0.0" and float(meta["sigma0"]) == pytest.approx(5e-6)


def test_gouy_map(tmp_path):
    assert run(["gouy-map", "--gamma-range=-1,1,3", "--time-range", "10,50,5", "--out",
                str(tmp_path)]) == 0
    g, t, v, meta = xio.read_grid_csv(tmp_path / "gouy_free_map.csv")
    np.testing.assert_allclose(g, [-1, 0, 1])
    assert v[0, -1].real == pytest.approx(abs(gouy_delta_free(PhysicalConfig(gamma=-1), 0.05)))
    assert meta["axes"] == "gamma,t"


@pytest.mark.parametrize("args", [
    ["gouy-map", "--gamma-range", "1,-1,5"],
    ["gouy-map", "--gamma-range", "0,0,4"],
    ["gouy-map", "--gamma-range", "a,b,c"],
    ["free-cw", "--sigma0", "-2"],
    ["free-cw", "--grid", "10,10"],
    ["free-cw", "--span", "0,1"],
    ["reconstruct", "--projections", "1"],
])
def test_config_errors_exit_2(args, tmp_path, capsys):
    assert run(args + ["--out", str(tmp_path)]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour=blue\n")
    assert run(["free-cw", "--config", str(cfg)]) == 2


def test_bad_flag_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["free-cw", "--format", "hdf5"])
    assert exc.value.code == 2


def test_threads_env(monkeypatch, tmp_path):
    monkeypatch.setenv("XWIGNER_THREADS", "0")
    assert run(["free-cw", "--out", str(tmp_path)]) == 2
    monkeypatch.setenv("XWIGNER_THREADS", "two")
    assert run(["free-cw", "--out", str(tmp_path)]) == 2


def test_io_error_exit_4(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["free-cw", "--grid", "21,21", "--out", str(blocker / "sub")]) == 4


def test_coverage_error_exit_3(tmp_path):
    assert run(["reconstruct", "--tau-window", "10,20,30", "--out", str(tmp_path)]) == 3
    assert not any(tmp_path.iterdir())


def test_reconstruct_metrics(tmp_path):
    assert run(["reconstruct", "--projections", "90", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "metrics.csv").read_text().splitlines()
    head = lines[-2].split(",")
    vals = dict(zip(head, map(float, lines[-1].split(","))))
    assert 0 < vals["l2_wigner"] < 1 and 0 < vals["l2_cw"] < 1
    assert vals["n_proj"] == 90 and vals["theta_span_deg"] == pytest.approx(178)
    assert (tmp_path / "wigner_fbp.csv").exists() and (tmp_path / "recon_cw.csv").exists()


def test_certify_exit_codes(monkeypatch, tmp_path, capsys):
    results = [CheckResult("a", 0.1, 1.0, True), CheckResult("b", 2.0, 1.0, False)]
    monkeypatch.setattr(cli, "run_checks", lambda *a, **kw: results)
    out = tmp_path / "report.csv"
    assert run(["certify", "--out", str(out), "--run-id", "x"]) == 3
    text = capsys.readouterr().out
    assert text == out.read_text()
    assert "# summary=1/2 passed" in text and "b,2.000e+00,1.0e+00,FAIL" in text
    monkeypatch.setattr(cli, "run_checks", lambda *a, **kw: results[:1])
    assert run(["certify"]) == 0


def test_certify_forwards_fault_and_threads(monkeypatch):
    seen = {}

    def fake(cfg, gammas, faults, threads):
        seen.update(gammas=gammas, faults=faults, threads=threads)
        return [CheckResult("a", 0.0, 1.0, True)]

    monkeypatch.setattr(cli, "run_checks", fake)
    monkeypatch.setenv("XWIGNER_THREADS", "3")
    assert run(["certify", "--inject-fault", "a5-sign", "--gamma", "-1"]) == 0
    assert seen == {"gammas": (-1.0,), "faults": ("a5-sign",), "threads": 3}
