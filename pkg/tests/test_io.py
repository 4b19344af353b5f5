import json
import os
import threading

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectralset.errors import InputError
from spectralset.geometry import SupportFn, boundary_mesh
from spectralset.io import (append_jsonl, atomic_writer, dumps, matrix_hash, read_boundary_csv,
                            read_matrix, write_boundary_csv, write_matrix)

from conftest import rand_matrix


@given(st.integers(0, 10_000), st.integers(1, 5))
def test_matrix_round_trip_bit_exact(tmp_path_factory, seed, n):
    A = rand_matrix(n, seed)
    p = tmp_path_factory.mktemp("m") / "a.json"
    write_matrix(A, p)
    B = read_matrix(p)
    assert np.array_equal(A, B)
    assert matrix_hash(A) == matrix_hash(B)


def test_hash_distinguishes():
    assert matrix_hash(np.eye(2)) != matrix_hash(np.eye(3))
    assert matrix_hash(np.eye(2)) != matrix_hash(2 * np.eye(2))


def test_bad_matrix_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2, "re": [[1]]}')
    with pytest.raises(InputError):
        read_matrix(p)
    p.write_text("not json")
    with pytest.raises(InputError):
        read_matrix(p)
    with pytest.raises(InputError):
        read_matrix(tmp_path / "missing.json")


def test_boundary_csv_round_trip(tmp_path):
    mesh = boundary_mesh(SupportFn.disk(0.5j, 2), 64)
    p = tmp_path / "b.csv"
    write_boundary_csv(mesh, p)
    d = read_boundary_csv(p)
    assert np.array_equal(d["theta"], mesh.thetas)
    assert np.array_equal(d["re"] + 1j * d["im"], mesh.points)


def test_atomic_writer_leaves_target_on_failure(tmp_path):
    p = tmp_path / "x.txt"
    p.write_text("old")
    with pytest.raises(RuntimeError):
        with atomic_writer(p) as fh:
            fh.write("new")
            raise RuntimeError
    assert p.read_text() == "old"
    assert os.listdir(tmp_path) == ["x.txt"]


def test_jsonl_concurrent_appends(tmp_path):
    p = tmp_path / "f.jsonl"
    threads = [threading.Thread(target=append_jsonl, args=(p, {"i": i})) for i in range(20)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    rows = [json.loads(line) for line in p.read_text().splitlines()]
    assert sorted(r["i"] for r in rows) == list(range(20))


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})
