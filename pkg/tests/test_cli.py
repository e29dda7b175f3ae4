import json
import pathlib
import subprocess
import sys

import pytest

from arakdyn.cli import EXIT_BUDGET, EXIT_IO, EXIT_USAGE, EXIT_VIOLATION, main
from golden_cases import CASES

HERE = pathlib.Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"


def argv(name):
    return [a.replace("{data}", str(DATA)) for a in CASES[name]]


def run(args, tmp_path, name="out"):
    out = tmp_path / f"{name}.txt"
    code = main(list(args) + ["--out", str(out)])
    return code, out.read_text()


def load(name, tmp_path):
    code, text = run(argv(name), tmp_path, name)
    assert code == 0
    return text


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    text = load(name, tmp_path)
    golden = GOLDEN / f"{name}.txt"
    assert text == golden.read_text()


def test_ranks_numbers(tmp_path):
    rows = json.loads(load("ranks_g2", tmp_path))["rows"]
    assert rows[1]["F_computed"] == rows[1]["F_formula"] == 9
    assert rows[0]["F_computed"] == 4
    assert rows[2]["K_formula"] == 10 and rows[2]["K_computed"] == 28
    assert rows[1]["R"] == 4
    single = json.loads(load("ranks_g2_n0", tmp_path))["rows"]
    assert len(single) == 1 and single[0]["F_computed"] == 4
    theta = json.loads(load("ranks_theta", tmp_path))["rows"]
    assert [r["F_computed"] for r in theta] == [6, 7, 13]


def test_matrices_via_walks(tmp_path):
    rose = json.loads(load("walks_rose", tmp_path))["matrix"]["A"]
    assert rose == [[1, 1, 0, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 1, 1]]
    theta = json.loads(load("walks_theta", tmp_path))
    assert theta["matrix"]["A"][0] == [0, 1, 0, 0, 0, 1] and theta["count"] == 12
    dumbbell = json.loads(load("walks_dumbbell", tmp_path))["matrix"]["A"]
    assert dumbbell[0] == [0, 0, 1, 0, 0, 1]


def test_lfactor_numbers(tmp_path):
    arch = json.loads(load("lfactor_arch", tmp_path))
    assert arch["det_times_L_minus_1"] < 1e-8
    archR = json.loads(load("lfactor_arch_R", tmp_path))
    assert archR["det_times_L_minus_1"] < 1e-8
    na = json.loads(load("lfactor_nonarch", tmp_path))
    assert na["L"] == [2.0, 0.0]
    assert na["fit"]["residual"] < 1e-8
    assert set(na) >= {"s", "L", "det", "fit"}


def test_spectrum_numbers(tmp_path):
    L = json.loads(load("spectrum_arch_L", tmp_path))["lines"]
    assert [l["mult"] for l in L] == [4, 8, 24]
    V = json.loads(load("spectrum_arch_V", tmp_path))["lines"]
    assert {l["mult"] for l in V} == {4} and all(l["lambda_int"] <= 0 for l in V)
    H = json.loads(load("spectrum_arch_H", tmp_path))
    assert H["sign"]["squares_to_identity"] and H["sign"]["commutator_norm"] == 1.0
    nh = json.loads(load("spectrum_nonarch_H", tmp_path))
    assert sorted(l["lambda_int"] for l in nh["lines"]) == [-3, -2, -1, 0, 1, 2]
    assert nh["scale"]["transcendental"] == "2pi_over_log_q"


def test_ck_text(tmp_path):
    assert load("ck_dumbbell", tmp_path).strip().endswith("relations: exact")
    assert json.loads(load("ck_g2", tmp_path))["relations"] == "exact"


def test_fiber_numbers(tmp_path):
    d = json.loads(load("fiber_theta", tmp_path))
    assert d["cylinders"] == [{"letter": "a", "t": 0.3}, {"letter": "a~", "t": 0.7}]


def test_exit_codes(tmp_path, monkeypatch):
    assert main(["ranks"]) == EXIT_USAGE
    assert main(["ranks", "--genus", "2", "--preset", "theta"]) == EXIT_USAGE
    assert main(["nope"]) == EXIT_USAGE
    assert main(["ranks", "--graph", str(tmp_path / "missing.json")]) == EXIT_IO
    monkeypatch.setenv("ARAKDYN_BUDGET", "5")
    assert main(["walks", "--genus", "2", "--level", "3"]) == EXIT_BUDGET
    assert main(["fiber", "--preset", "theta", "--edge", "zz"]) == EXIT_USAGE


def test_nonarch_R2_not_exact(tmp_path):
    code, text = run(["lfactor", "--nonarch", "--genus", "1", "--q", "3", "--R", "2"], tmp_path)
    assert code == EXIT_VIOLATION
    assert not json.loads(text)["fit"]["exact_claim"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "arakdyn", "ranks", "--genus", "2", "--max-n", "1"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["ok"] is True
