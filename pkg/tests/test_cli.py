import json
import subprocess
import sys
import time

import jsonschema
import numpy as np
import pytest

from twophoton import gf
from twophoton.cli import main
from twophoton.serialize import SCHEMAS, fmt, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, SCHEMAS[data["command"]])
    return data


def test_solve_normalized(capsys):
    data = run_json(capsys, "solve", "--nu", "1", "--s", "0.5", "--sigma", "0", "--r", "1",
                    "--out", "json")
    assert data["branch"] == "kummer"
    total = sum(data["distribution"]["p_n"]) + data["distribution"]["tail_bound"]
    assert total == pytest.approx(1.0, abs=1e-12)
    assert data["mandel_q"] == pytest.approx(data["n2"] / data["mean"] - data["mean"])


def test_solve_matches_oracle(capsys):
    args = ["--nu", "0.1", "--s", "2", "--sigma", "1", "--r", "2", "--nmax", "60"]
    a = run_json(capsys, "solve", *args)["distribution"]["p_n"]
    b = run_json(capsys, "oracle", *args)["distribution"]["p_n"]
    assert np.max(np.abs(np.array(a) - b)) <= 1e-8


def test_solve_routes_zero_nu(capsys):
    code, _, err = run(capsys, "solve", "--nu", "0", "--r", "1")
    assert code == 2 and "paeos" in err


def test_solve_routes_sigma_only(capsys):
    code, _, err = run(capsys, "solve", "--nu", "1", "--sigma", "1")
    assert code == 2 and "oracle" in err


def test_solve_vacuum(capsys):
    data = run_json(capsys, "solve", "--nu", "1")
    assert data["branch"] == "vacuum" and data["distribution"]["p_n"][0] == 1


def test_oracle_pure_absorption(capsys):
    data = run_json(capsys, "oracle", "--d1a", "1")
    assert data["distribution"]["p_n"][0] == 1 and data["residual"] <= 1e-10


def test_oracle_parity_mixture(capsys):
    data = run_json(capsys, "oracle", "--nu", "0", "--r", "1", "--beta0", "0.3")
    p = np.array(data["distribution"]["p_n"])
    even = gf.paeos_probabilities(gf.PaeosParams(0.0, 1.0), len(p) - 1).probs
    odd = gf.paeos_probabilities(gf.PaeosParams(1.0, 1.0), len(p) - 1).probs
    assert np.max(np.abs(p - (0.7 * even + 0.3 * odd))) < 1e-12
    assert data["parity_weight"] == pytest.approx(0.3)


def test_oracle_non_unique(capsys):
    assert run(capsys, "oracle", "--nu", "0", "--r", "1")[0] == 4
    assert run(capsys, "oracle", "--nu", "0", "--r", "1", "--method", "evolve")[0] == 4


def test_oracle_evolve(capsys):
    data = run_json(capsys, "oracle", "--nu", "1", "--s", "0.5", "--r", "1",
                    "--method", "evolve")
    assert data["method"] == "evolve" and data["residual"] <= 1e-12


def test_oracle_general_config(capsys, tmp_path):
    cfg = {"d1a": 1, "d2a": 1, "d2e": 2, "d10a": 0.5, "d12a": 0.2,
           "w1e": [{"j": 2, "w": 0.1}], "saturated": [{"k": 3, "d": 0.2, "gamma": 1.0}]}
    path = tmp_path / "rates.json"
    path.write_text(json.dumps(cfg))
    data = run_json(capsys, "oracle", "--config", str(path))
    assert data["residual"] <= 1e-10
    assert data["rates"]["d10a"] == 0.5
    assert "constants" not in data


def test_oracle_bad_config(capsys, tmp_path):
    path = tmp_path / "rates.json"
    path.write_text(json.dumps({"d1a": 1, "bogus": 2}))
    assert run(capsys, "oracle", "--config", str(path))[0] == 64
    assert run(capsys, "oracle", "--config", str(path), "--d1a", "1")[0] == 64


def test_limits(capsys):
    data = run_json(capsys, "limits", "--case", "negbin", "--s", "0.5", "--sigma", "0")
    assert data["mean"] == 1
    data = run_json(capsys, "limits", "--case", "no2a", "--rho", "1", "--s", "0.5",
                    "--sigma", "0")
    assert data["mean"] == pytest.approx(5.0, abs=1e-9) and data["gamma"] == 6
    code, _, err = run(capsys, "limits", "--case", "negbin", "--s", "1.5")
    assert code == 2 and "valid only for" in err


def test_paeos(capsys):
    data = run_json(capsys, "paeos", "--r", "1", "--S", "0")
    assert data["beta"] == pytest.approx(0.3670989, abs=1e-7)
    assert data["mandel_q"] == pytest.approx(data["mandel_q_weak"], rel=1e-12)
    data = run_json(capsys, "paeos", "--r", "2", "--beta", "0.25")
    assert data["S"] is None and data["mandel_q_weak"] is None
    data = run_json(capsys, "paeos", "--r", "1", "--s", "1", "--sigma", "1")
    assert data["S"] == 1.0


def test_wigner_and_linearity(capsys):
    def curve(beta):
        return np.array(run_json(capsys, "wigner", "--r", "10", "--beta", str(beta))["W"])
    w0, wh, wq = curve(0), curve(0.5), curve(0.25)
    assert w0[0] == pytest.approx(2.0, abs=1e-12)
    assert wh.min() >= -1e-9
    assert np.max(np.abs(wq - 0.5 * (w0 + wh))) < 1e-12


def test_wigner_validation(capsys):
    assert run(capsys, "wigner", "--r", "0", "--beta", "0.2")[0] == 64
    assert run(capsys, "wigner", "--r", "1", "--beta", "0.2", "--points", "1")[0] == 2


@pytest.mark.parametrize("fid,w0", [(1, 2.0), (2, -2.0), (3, 0.0)])
def test_figures(capsys, fid, w0):
    data = run_json(capsys, "figure", str(fid))
    assert data["figure"] == fid and data["r"] == 10
    assert len(data["x"]) == 801 and data["x"][-1] == 8
    assert data["W"][0] == pytest.approx(w0, abs=1e-12)
    if fid == 3:
        assert min(data["W"]) >= -1e-9


def test_csv_columns(capsys):
    _, out, _ = run(capsys, "figure", "1", "--out", "csv")
    lines = out.splitlines()
    assert lines[0] == "x,W" and len(lines) == 802
    _, out, _ = run(capsys, "limits", "--case", "negbin", "--s", "0.5", "--out", "csv")
    assert out.splitlines()[0] == "n,p_n" and out.splitlines()[1].startswith("0,")


def test_out_path(capsys, tmp_path):
    path = tmp_path / "w.csv"
    code, out, _ = run(capsys, "figure", "2", "--out", "csv", "--out-path", str(path))
    assert code == 0 and out == "" and path.read_text().startswith("x,W\n0,-2")


@pytest.mark.parametrize("argv", [
    ["solve", "--nu", "1", "--s", "0.5", "--r", "1"],
    ["oracle", "--nu", "0", "--r", "2", "--beta0", "0.4"],
    ["paeos", "--r", "3", "--S", "1"],
    ["figure", "3", "--out", "csv"],
])
def test_deterministic(capsys, argv):
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_usage_errors(capsys):
    assert run_usage(capsys, ["bogus"]) == 64
    assert run_usage(capsys, ["solve"]) == 64
    assert run_usage(capsys, ["figure", "4"]) == 64
    assert run(capsys, "solve", "--nu", "1", "--r", "1", "--eps", "2")[0] == 64
    assert run(capsys, "solve", "--nu", "1", "--r", "1", "--nmax", "2")[0] == 64


def run_usage(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    capsys.readouterr()
    return exc.value.code


def test_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("TPS_EPS", "1e-6")
    loose = run_json(capsys, "solve", "--nu", "1", "--r", "2")["distribution"]["nmax"]
    monkeypatch.setenv("TPS_EPS", "1e-14")
    tight = run_json(capsys, "solve", "--nu", "1", "--r", "2")["distribution"]["nmax"]
    assert loose < tight
    monkeypatch.setenv("TPS_EPS", "nope")
    assert run(capsys, "solve", "--nu", "1", "--r", "2")[0] == 64


def test_verify_quick(capsys):
    start = time.perf_counter()
    data = run_json(capsys, "verify", "--quick", "--json")
    assert time.perf_counter() - start < 10
    assert data["passed"] and all(c["passed"] for c in data["checks"])


def test_verify_detects_perturbation(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--perturb", "1e-3")
    assert code == 1 and "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twophoton", "paeos", "--r", "1", "--S", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "paeos"


def test_number_format():
    assert fmt(0.1) == "0.10000000000000001"
    assert float(fmt(1 / 3)) == 1 / 3
    assert fmt(-0.0) == "0"
    with pytest.raises(ValueError):
        fmt(float("nan"))
    assert json.loads(to_json({"a": [1.5, 2], "b": None})) == {"a": [1.5, 2], "b": None}
