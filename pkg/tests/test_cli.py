import json
import subprocess
import sys

import numpy as np
import pytest

from rpchain.cli import RunConfig, InputError, main, run
from rpchain.io import write_array
from rpchain.models import gibbs_rp, tfim_decomposition


@pytest.fixture
def fixtures(tmp_path):
    swapped = np.zeros((4, 4))
    swapped[1, 1] = swapped[2, 2] = 0.5
    write_array(tmp_path / "swapped.txt", swapped)
    write_array(tmp_path / "epr.txt", np.array([1, 0, 0, 1]) / np.sqrt(2))
    write_array(tmp_path / "left.txt", np.diag([0.75, 0.25]))
    write_array(tmp_path / "flat.txt", np.eye(2) / 2)
    return tmp_path


def report(argv):
    code, text = run(argv)
    return code, (json.loads(text) if text else None)


def test_check_rp_exit_codes(fixtures):
    code, rep = report(["check-rp", str(fixtures / "swapped.txt")])
    assert code == 1
    assert rep["verdict"] == "not_rp" and abs(rep["gram_min_eig"] + 0.5) < 1e-12
    code, rep = report(["check-rp", str(fixtures / "epr.txt")])
    assert code == 0 and rep["verdict"] == "strictly_rp" and rep["schema"] == 1


def test_input_errors(fixtures, tmp_path):
    assert main(["check-rp", str(tmp_path / "missing.txt")]) == 2
    (tmp_path / "odd.txt").write_text("8\n" + "1 0\n" * 8)
    assert main(["check-rp", str(tmp_path / "odd.txt")]) == 2
    assert main(["cluster-demo", "--n", "13"]) == 2
    assert main(["perron-frobenius", "--n", "7", "--d", "4"]) == 2
    assert main(["check-rp", str(fixtures / "epr.txt"), "--tol-psd", "-1"]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["tfim-demo", "--n", "6"]) == 2


def test_run_config_guard():
    with pytest.raises(InputError):
        RunConfig("cluster-demo", n_half=13)
    with pytest.raises(InputError):
        RunConfig("cluster-demo", n_half=4, local_dim=9)
    RunConfig("cluster-demo", n_half=6, local_dim=4)


def test_cluster_demo(fixtures):
    code, rep = report(["cluster-demo", "--n", "3"])
    assert code == 0
    assert abs(rep["zzzz"] - 1) < 1e-10 and abs(rep["zz_outer"]) < 1e-10 and abs(rep["zz_inner"]) < 1e-10


def test_tfim_demo(tmp_path):
    b, a = tmp_path / "b.csv", tmp_path / "a.csv"
    code, rep = report(["tfim-demo", "--n", "2", "--b-csv", str(b), "--a-csv", str(a)])
    assert code == 0
    assert rep["strict_rp"] is True and rep["a_min_eig"] > 0 and rep["covariance_max_dev"] < 1e-9
    assert len(b.read_text().splitlines()) == 8
    assert len(a.read_text().splitlines()[0].split(",")) == 8


def test_gibbs_rp_from_operator_files(tmp_path):
    hl = tmp_path / "hl.txt"
    h0 = tmp_path / "h0.txt"
    hl.write_text("# left half of the Ising ring\n-1 0 1:X 2:X\n-1 0 1:Z\n-1 0 2:Z\n")
    h0.write_text("-1 0 2:X 3:X\n-1 0 1:X 4:X\n")
    code, rep = report(["gibbs-rp", "--hl", str(hl), "--h0", str(h0), "--beta", "2", "--n", "2"])
    assert code == 0
    expected = gibbs_rp(tfim_decomposition(2, 2.0))
    assert abs(rep["gram_min_eig"] - expected.gram_min_eig) < 1e-12
    assert rep["hypothesis"]["status"] in ("inside", "boundary")
    # wrong sign on the coupling violates the hypothesis: input error
    h0.write_text("1 0 2:X 3:X\n")
    assert main(["gibbs-rp", "--hl", str(hl), "--h0", str(h0), "--n", "2"]) == 2
    h0.write_text("1 0 2:W\n")
    assert main(["gibbs-rp", "--hl", str(hl), "--h0", str(h0), "--n", "2"]) == 2
    assert main(["gibbs-rp", "--hl", str(hl), "--n", "2"]) == 2


def test_gibbs_rp_builtin():
    code, rep = report(["gibbs-rp", "--n", "3", "--beta", "0.5"])
    assert code == 0 and rep["gram_min_eig"] >= -1e-10


def test_purify_and_uniqueness(fixtures, tmp_path):
    out = tmp_path / "psi.txt"
    code, rep = report(["purify", str(fixtures / "left.txt"), "--vector-out", str(out)])
    assert code == 0 and rep["certificate"]["verdict"] == "strictly_rp"
    assert np.allclose(rep["vector"], [[0.75**0.5, 0], [0, 0], [0, 0], [0.5, 0]])
    code, rep = report(["angular-momentum", str(out)])
    assert code == 0 and rep["is_invariant"]
    code, rep = report(["uniqueness-oracle", str(fixtures / "left.txt"), "--grid", "4"])
    assert code == 0 and rep["unique"] and rep["passing_phases"] == [[0, 0]]
    assert main(["uniqueness-oracle", str(fixtures / "flat.txt")]) == 2


def test_perron_frobenius_deterministic(tmp_path):
    argv = ["perron-frobenius", "--seed", "7", "--trials", "3", "--n", "2"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["all_ok"] and len(rep["trials"]) == 3


def test_console_entry_point(fixtures):
    proc = subprocess.run(
        [sys.executable, "-m", "rpchain.cli", "check-rp", str(fixtures / "swapped.txt")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "not_rp"
