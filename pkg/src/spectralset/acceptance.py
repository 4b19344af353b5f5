"""The acceptance suite: twelve end-to-end criteria with oracles and tolerances.

Every criterion returns a :class:`Criterion` row; :func:`run` executes a
selection and :func:`format_row` renders one PASS/FAIL line.  The grid size
and seed are configurable so that ``spectralset verify --grid 16`` shows the
quadrature criteria failing on a deliberately coarse mesh.
"""
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import oracles
from .bounds import (constant_thm25, conjecture_constant, geometric_gamma_bound,
                     qrange_gamma_bound)
from .core import gershgorin_enclosing_disk, min_resolvent_modulus_batch
from .errors import NonSmoothBoundary
from .geometry import (SupportFn, boundary_mesh, farthest_point_modulus, fit_support,
                       perimeter, support_from_function)
from .polynomial import Polynomial
from .potential import (BoundaryFunction, cauchy_fcalc, cauchy_transform_op, gamma,
                        gamma_one, partition_error, potential_profile)
from .ranges import (EIG_GAP_TOL, QParameter, numrange_body, numrange_support,
                     perimeter_derivative_check, qrange_body, qrange_support_grid)
from .search import conjecture_trial, ginibre, omega_q_mesh, ratio

NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)
SWEEP_QS = (0.6, 0.8, 0.9, 1.0)
SWEEP_RESTARTS = 8


@dataclass
class Criterion:
    number: int
    name: str
    measured: float
    target: str
    tol: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0


def format_row(c):
    flag = "PASS" if c.passed else "FAIL"
    line = (f"[{flag}] {c.number:>2} {c.name}: measured={c.measured:.6g} target={c.target} "
            f"tol={c.tol:g} ({c.seconds:.1f}s)")
    if c.detail:
        line += f" | {c.detail}"
    return line


def _degree(grid):
    return max(1, min(64, grid // 2 - 1))


def _mesh(body, grid):
    return boundary_mesh(body, grid)


def _thetas(grid):
    return np.arange(grid) * (2.0 * np.pi / grid)


def _w_fit(A, grid):
    th = _thetas(grid)
    return fit_support(th, numrange_support(A, th), _degree(grid), check=False)


def _enclosing_disk(A, grid, factor):
    """Disk about the Steiner point of W(A), radius ``factor`` times the farthest extent."""
    w = _w_fit(A, grid)
    c = w.steiner_point()
    th = _thetas(4 * grid)
    extent = float(np.max(numrange_support(A, th) - np.real(c * np.exp(-1j * th))))
    return SupportFn.disk(c, factor * extent), w


# -- criteria --------------------------------------------------------------

def c1_nilpotent(grid=512, seed=0):
    A = NILPOTENT
    th = _thetas(grid)
    dev_support = float(np.max(np.abs(numrange_support(A, th) - 1.0)))
    body = numrange_body(A, grid, _degree(grid))
    mesh = _mesh(body, grid)
    prof = potential_profile(A, mesh)
    dev_lam = float(np.max(np.abs(prof.lambda_min)))
    z = BoundaryFunction.from_polynomial(Polynomial([0, 1]), mesh)
    dev_g = float(np.linalg.norm(cauchy_transform_op(A, mesh, z, prof), 2))
    r = ratio(A, Polynomial([0, 1]), _mesh(SupportFn.disk(0, 1), grid))
    dev_r = abs(r - 2.0)
    exact = constant_thm25(0.0, 0.0) == 2.0
    worst = max(dev_support, dev_lam, dev_g, dev_r)
    return worst, "0", 1e-8, worst <= 1e-8 and exact, (
        f"support {dev_support:.1e}, lambda_min {dev_lam:.1e}, g(A) {dev_g:.1e}, "
        f"ratio {r:.12g}, thm25(0,0)==2: {exact}")


def c2_partition(grid=512, seed=0):
    errs = []
    for s in range(seed, seed + 20):
        A = ginibre(3, s)
        c, r = gershgorin_enclosing_disk(A)
        mesh = _mesh(SupportFn.disk(c, 1.5 * r), grid)
        errs.append(partition_error(potential_profile(A, mesh)))
    worst = max(errs)
    return worst, "0", 1e-8, worst <= 1e-8, f"20 matrices, N={grid}"


def _random_poly_function(rng, mesh, degree):
    c = mesh.body.steiner_point()
    size = float(np.max(np.abs(mesh.points - c)))
    coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    coeffs /= size ** np.arange(degree + 1)
    return BoundaryFunction.from_polynomial(Polynomial(coeffs, c), mesh, normalize=True)


def c3_s_norm(grid=512, seed=0):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    positive = 0
    trials = 0
    s = seed
    while trials < 100:
        A = ginibre(int(rng.integers(2, 5)), 1000 + s)
        s += 1
        ev = np.linalg.eigvals(A)
        c = ev.mean()
        spread = float(np.max(np.abs(ev - c)))
        # small factors give domains around the spectrum but not around W(A)
        factor = rng.uniform(1.3, 3.0) if trials % 2 else rng.uniform(1.1, 1.4)
        radius = factor * max(spread, 0.05)
        if trials % 3 == 0:
            u = rng.uniform(0.7, 1.0)
            a, b = radius / u, radius
            body = support_from_function(
                lambda t: np.sqrt((a * np.cos(t)) ** 2 + (b * np.sin(t)) ** 2), _degree(grid), grid
            ).shifted(c)
        else:
            body = SupportFn.disk(c, radius)
        mesh = _mesh(body, grid)
        prof = potential_profile(A, mesh)
        f = _random_poly_function(rng, mesh, int(rng.integers(0, 6)))
        n = A.shape[0]
        S = cauchy_fcalc(A, mesh, f, prof) + cauchy_transform_op(A, mesh, f, prof).conj().T \
            + gamma(prof, f) * np.eye(n)
        g1 = gamma_one(prof)
        positive += g1 > 0
        worst = max(worst, float(np.linalg.norm(S, 2) - (2.0 + g1)))
        trials += 1
    ok = worst <= 1e-6 and positive > 0
    return worst, "<= 0", 1e-6, ok, f"100 trials, {positive} with gamma(1) > 0"


def c4_perimeter(grid=512, seed=0):
    ell = support_from_function(lambda t: np.sqrt(4 * np.cos(t) ** 2 + np.sin(t) ** 2),
                                _degree(grid), grid)
    bodies = {"disk": SupportFn.disk(0.3 - 0.2j, 1.7), "ellipse": ell}
    try:
        bodies["W(A)"] = numrange_body(ginibre(3, seed + 1), grid, _degree(grid))
    except NonSmoothBoundary:
        bodies["W(A)"] = numrange_body(ginibre(3, seed + 2), grid, _degree(grid))
    devs = {k: abs(perimeter(b) - float(np.sum(_mesh(b, grid).weights))) for k, b in bodies.items()}
    oracle = oracles.ellipse_perimeter_polygon(2.0, 1.0)
    dev_ell = abs(perimeter(ell) - oracle)
    worst = max(devs.values())
    ok = worst <= 1e-10 and dev_ell <= 1e-4 and abs(oracle - 9.68845) <= 1e-4
    return worst, "0", 1e-10, ok, (f"ellipse perimeter {perimeter(ell):.10f} vs polygon "
                                   f"{oracle:.10f} ({dev_ell:.1e})")


def _contained_trials(grid, seed, count=20):
    rng = np.random.default_rng(seed + 5)
    out = []
    for s in range(seed, seed + count):
        A = ginibre(3, 2000 + s)
        omega, w = _enclosing_disk(A, grid, rng.uniform(1.05, 1.6))
        out.append((A, omega, w))
    return out


def c5_lambda_floor(grid=512, seed=0):
    worst_lam = -np.inf
    worst_r = -np.inf
    for A, omega, _ in _contained_trials(grid, seed):
        mesh = _mesh(omega, grid)
        prof = potential_profile(A, mesh)
        r = min_resolvent_modulus_batch(A, mesh.points)
        gap = omega(mesh.thetas) - numrange_support(A, mesh.thetas)
        worst_lam = max(worst_lam, float(np.max(r * gap / np.pi - prof.lambda_min)))
        w_o = farthest_point_modulus(omega)
        w_w = float(np.max(numrange_support(A, _thetas(8 * grid))))
        worst_r = max(worst_r, float(np.max((1.0 / (w_o + 2.0 * w_w)) ** 2 - r)))
    ok = worst_lam <= 1e-8 and worst_r <= 1e-10
    return worst_lam, "<= 0", 1e-8, ok, f"resolvent floor excess {worst_r:.2e} (tol 1e-10)"


def c6_geo_bound(grid=512, seed=0):
    worst = -np.inf
    for A, omega, w in _contained_trials(grid, seed):
        g1 = gamma_one(potential_profile(A, _mesh(omega, grid)))
        worst = max(worst, g1 - geometric_gamma_bound(A, omega, w))
    w = numrange_body(NILPOTENT, grid, _degree(grid))
    disk = SupportFn.disk(0, 2)
    bound = geometric_gamma_bound(NILPOTENT, disk, w)
    g1 = gamma_one(potential_profile(NILPOTENT, _mesh(disk, grid)))
    ok = worst <= 1e-8 and abs(bound + 0.25) <= 1e-10 and g1 <= -0.25
    return worst, "<= 0", 1e-8, ok, f"nilpotent bound {bound:.12g}, gamma(1) {g1:.12g}"


def c7_qrange_anchor(grid=512, seed=0):
    body = qrange_body(NILPOTENT, 0.6, grid, _degree(grid), seed=seed)
    th = _thetas(grid)
    dev_fit = float(np.max(np.abs(body(th) - 3.0)))
    probe = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    dev_oracle = max(abs(oracles.qrange_support_bruteforce(NILPOTENT, 0.6, t) - 3.0) for t in probe)
    cc = conjecture_constant(0.6)
    tr = conjecture_trial(NILPOTENT, 0.6, 4, SWEEP_RESTARTS, seed, grid, _degree(grid))
    dev_ratio = abs(tr.max_ratio - 2.0 / 3.0)
    ok = dev_fit <= 1e-6 and dev_oracle <= 1e-6 and cc == 1.0 and dev_ratio <= 1e-6 \
        and not tr.violation
    return max(dev_fit, dev_ratio), "0", 1e-6, ok, (
        f"radius dev {dev_fit:.1e}, oracle dev {dev_oracle:.1e}, ratio {tr.max_ratio:.10f}, "
        f"violation {tr.violation}")


def _simple_top(A, grid):
    w = np.linalg.eigvalsh(0.5 * (np.exp(-1j * _thetas(grid))[:, None, None] * A
                                  + np.conj(np.exp(-1j * _thetas(grid))[:, None, None] * A)
                                  .transpose(0, 2, 1)))
    return bool(np.min(w[:, -1] - w[:, -2]) > 1e3 * EIG_GAP_TOL)


def c8_qrange_bound(grid=512, seed=0):
    t0 = time.perf_counter()
    w = numrange_body(NILPOTENT, grid, _degree(grid))
    oq = qrange_body(NILPOTENT, 0.6, grid, _degree(grid), seed=seed)
    bound = qrange_gamma_bound(NILPOTENT, 0.6, oq, w, grid, seed)
    g1 = gamma_one(potential_profile(NILPOTENT, _mesh(oq, grid)))
    rels = []
    skipped = []
    s = seed
    while len(rels) < 10:
        A = ginibre(3, 3000 + s)
        s += 1
        if not _simple_top(A, grid):
            skipped.append(3000 + s - 1)
            continue
        try:
            lhs, rhs = perimeter_derivative_check(A, 1e-3, grid, _degree(grid), seed=seed)
        except NonSmoothBoundary:
            skipped.append(3000 + s - 1)
            continue
        rels.append(abs(lhs - rhs) / lhs)
    secs = time.perf_counter() - t0
    worst = max(rels)
    ok = abs(bound + 0.32) <= 1e-9 and g1 <= bound and worst <= 1e-2 and secs <= 60.0
    return worst, "0", 1e-2, ok, (f"nilpotent bound {bound:.12g}, gamma(1) {g1:.10g}; "
                                  f"skipped seeds {skipped}")


def c9_nesting(grid=512, seed=0):
    th = _thetas(grid)
    worst = -np.inf
    for s in range(seed, seed + 20):
        A = ginibre(3, 4000 + s)
        vals = [qrange_support_grid(A, q, th, seed=seed) for q in (1.0, 0.9, 0.8, 0.6)]
        for lo, hi in zip(vals, vals[1:]):
            worst = max(worst, float(np.max(lo - hi)))
    return worst, "<= 0", 1e-8, worst <= 1e-8, "20 matrices, |q| = 1.0, 0.9, 0.8, 0.6"


def c10_fcalc(grid=512, seed=0):
    rng = np.random.default_rng(seed + 10)
    worst = 0.0
    for s in range(seed, seed + 20):
        A = ginibre(3, 5000 + s)
        c, r = gershgorin_enclosing_disk(A)
        mesh = _mesh(SupportFn.disk(c, 1.5 * r), grid)
        prof = potential_profile(A, mesh)
        deg = int(rng.integers(0, 9))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        p = Polynomial(coeffs)
        direct = oracles.poly_of_matrix_powers(coeffs, A)
        quad = cauchy_fcalc(A, mesh, BoundaryFunction.from_polynomial(p, mesh), prof)
        worst = max(worst, float(np.linalg.norm(quad - direct, 2) / np.linalg.norm(direct, 2)))
    return worst, "0", 1e-8, worst <= 1e-8, "20 trials, degrees 0..8"


def c11_sweep(grid=512, seed=0, findings_path=None, restarts=SWEEP_RESTARTS, trials=50):
    t0 = time.perf_counter()
    violations = 0
    skipped = []
    worst_excess = -np.inf
    for s in range(seed, seed + trials):
        A = ginibre(3, s)
        for q in SWEEP_QS:
            try:
                tr = conjecture_trial(A, q, 4, restarts, s, grid, _degree(grid),
                                      findings_path=findings_path)
            except NonSmoothBoundary:
                skipped.append((s, q))
                continue
            violations += tr.violation
            worst_excess = max(worst_excess, tr.max_ratio - tr.bound)
    secs = time.perf_counter() - t0
    ok = violations == 0 and secs <= 300.0
    return float(violations), "0 violations", 1e-6, ok, (
        f"{trials * len(SWEEP_QS) - len(skipped)} trials, max ratio - bound {worst_excess:.3g}, "
        f"skipped (non-smooth) {skipped}")


def c12_scalar(grid=512, seed=0):
    A = np.array([[0.2]], dtype=complex)
    mesh = _mesh(SupportFn.disk(0, 1), grid)
    prof = potential_profile(A, mesh)
    g1 = gamma_one(prof)
    idx = np.arange(8) * (grid // 8)
    dev = float(np.max(np.abs(prof.lambda_min[idx] - oracles.scalar_mu(0.2, mesh.points[idx]))))
    positive = bool(np.all(prof.lambda_min > 0))
    ok = abs(g1 + 2.0) <= 1e-8 and dev <= 1e-8 and positive
    return abs(g1 + 2.0), "0", 1e-8, ok, f"gamma(1) {g1:.12g}, density dev {dev:.1e}"


CRITERIA = {
    1: ("nilpotent anchor", c1_nilpotent),
    2: ("partition identity", c2_partition),
    3: ("||S|| <= 2 + gamma(1)", c3_s_norm),
    4: ("perimeter identity", c4_perimeter),
    5: ("pointwise lambda_min floor", c5_lambda_floor),
    6: ("geometric gamma bound", c6_geo_bound),
    7: ("q-range anchor", c7_qrange_anchor),
    8: ("q-range gamma bound and perimeter slope", c8_qrange_bound),
    9: ("q-range nesting", c9_nesting),
    10: ("Cauchy functional calculus", c10_fcalc),
    11: ("conjecture sweep", c11_sweep),
    12: ("scalar anchor", c12_scalar),
}


def run_one(number, grid=512, seed=0, **kwargs):
    name, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            measured, target, tol, ok, detail = fn(grid, seed, **kwargs)
    except Exception as exc:  # a crash is a failure of the criterion, not of the run
        measured, target, tol, ok = float("nan"), "-", float("nan"), False
        detail = f"{type(exc).__name__}: {exc}"
    return Criterion(number, name, float(measured), target, float(tol), bool(ok), detail,
                     time.perf_counter() - t0)


def run(only=None, grid=512, seed=0, findings_path=None, echo=None):
    numbers = sorted(CRITERIA) if not only else sorted(set(only))
    rows = []
    for k in numbers:
        kw = {"findings_path": findings_path} if k == 11 else {}
        row = run_one(k, grid, seed, **kw)
        rows.append(row)
        if echo is not None:
            echo(format_row(row))
    return rows
