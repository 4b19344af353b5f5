"""File formats: matrix JSON, boundary CSV, findings JSONL; all writes are atomic."""
import contextlib
import csv
import hashlib
import json
import os
import tempfile
import threading

import numpy as np

from .core import as_operator
from .errors import InputError

_findings_lock = threading.Lock()


@contextlib.contextmanager
def atomic_writer(path, mode="w"):
    """Write to a temporary file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def matrix_to_dict(A):
    A = as_operator(A)
    return {"n": int(A.shape[0]), "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_dict(d):
    try:
        n = int(d["n"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros((n, n))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix object: {exc}") from None
    if re.shape != (n, n) or im.shape != (n, n):
        raise InputError(f"matrix arrays must have shape ({n}, {n})")
    return as_operator(re + 1j * im)


def read_matrix(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from None
    return matrix_from_dict(d)


def write_matrix(A, path):
    with atomic_writer(path) as fh:
        json.dump(matrix_to_dict(A), fh)
        fh.write("\n")


def matrix_hash(A):
    A = as_operator(A)
    h = hashlib.sha256()
    h.update(np.asarray(A.shape, dtype=np.int64).tobytes())
    h.update(A.tobytes())
    return h.hexdigest()[:16]


def write_boundary_rows(mesh, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["theta", "re", "im", "weight", "rho"])
    for th, p, wt, r in zip(mesh.thetas, mesh.points, mesh.weights, mesh.rho):
        w.writerow([f"{th:.17g}", f"{p.real:.17g}", f"{p.imag:.17g}", f"{wt:.17g}", f"{r:.17g}"])


def write_boundary_csv(mesh, path):
    with atomic_writer(path) as fh:
        write_boundary_rows(mesh, fh)


def read_boundary_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in ("theta", "re", "im", "weight", "rho")}


def append_jsonl(path, record):
    """Append one JSON object as a line; serialised across threads."""
    line = json.dumps(record) + "\n"
    with _findings_lock:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "a") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())


def dumps(obj):
    """Deterministic JSON: insertion order kept, floats at round-trip precision."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
