import json

import numpy as np
import pytest

from spectralset.cli import main
from spectralset.io import write_matrix

from conftest import rand_matrix


@pytest.fixture
def matrix_file(tmp_path):
    def make(A, name="a.json"):
        p = tmp_path / name
        write_matrix(np.asarray(A, dtype=complex), p)
        return str(p)
    return make


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_range_nilpotent(matrix_file, tmp_path, capsys):
    m = matrix_file([[0, 2], [0, 0]])
    code, out, _ = run(["range", "--matrix", m, "--q", "0.6", "--grid", "256",
                        "--fourier-k", "32", "--out", str(tmp_path / "o")], capsys)
    assert code == 0
    s = json.loads(out)
    assert s["numrange"]["perimeter"] == pytest.approx(2 * np.pi, rel=1e-6)
    assert s["qrange"]["w_omega"] == pytest.approx(3.0, rel=1e-4)
    assert (tmp_path / "o" / "qrange.csv").exists()


def test_range_csv_to_stdout(matrix_file, capsys):
    code, out, _ = run(["range", "--matrix", matrix_file([[0, 2], [0, 0]]), "--grid", "16",
                        "--fourier-k", "4", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "theta,re,im,weight,rho" and len(out.splitlines()) == 17


def test_exit_codes(matrix_file, tmp_path, capsys):
    assert run(["range", "--matrix", matrix_file(np.diag([0, 1, 1j])), "--grid", "64",
                "--fourier-k", "16"], capsys)[0] == 3
    assert run(["bounds", "--matrix", matrix_file([[1]]), "--grid", "100"], capsys)[0] == 2
    assert run(["bounds", "--matrix", str(tmp_path / "none.json")], capsys)[0] == 2
    code, _, err = run(["bounds", "--matrix", matrix_file(np.diag([0, 5])), "--omega",
                        "disk:0,0,1", "--grid", "64", "--fourier-k", "16"], capsys)
    assert code == 4 and "potential" in err
    with pytest.raises(SystemExit):
        main(["bounds", "--matrix", "x", "--omega", "square"])


def test_bounds_scalar(matrix_file, capsys):
    code, out, _ = run(["bounds", "--matrix", matrix_file([[0.2]]), "--omega", "disk:0,1",
                        "--grid", "128", "--fourier-k", "16"], capsys)
    assert code == 0
    assert json.loads(out)["gamma1"] == pytest.approx(-2.0, abs=1e-9)


def test_bounds_deterministic(matrix_file, tmp_path, capsys):
    m = matrix_file(rand_matrix(3, 0))
    args = ["bounds", "--matrix", m, "--grid", "128", "--fourier-k", "16", "--seed", "5"]
    a = tmp_path / "out_a.json"
    b = tmp_path / "out_b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_conjecture_ensemble(tmp_path, capsys):
    f = tmp_path / "f.jsonl"
    code, out, _ = run(["conjecture", "--ensemble", "nilpotent_shift", "--n", "2",
                        "--trials", "1", "--q", "0.8", "--degree", "2", "--restarts", "2",
                        "--grid", "128", "--fourier-k", "16", "--findings", str(f),
                        "--log-all"], capsys)
    assert code == 0
    s = json.loads(out)
    assert s["per_q"]["0.8"]["trials"] == 1 and s["violations"] == 0
    assert len(f.read_text().splitlines()) == 1


def test_verify_subset(capsys):
    code, out, _ = run(["verify", "--only", "1,12", "--grid", "256"], capsys)
    assert code == 0
    assert out.count("[PASS]") == 2
    assert run(["verify", "--only", "99"], capsys)[0] == 2
