"""Verification suites: one function per acceptance criterion.

Each criterion returns a list of :class:`Check` rows.  ``run_suite`` groups
them the way the ``verify`` command exposes them.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass

import numpy as np

from geoflow import algebra as A
from geoflow import oracle
from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.diagnostics import drift_report, monitor_totally_geodesic, relative_drift
from geoflow.errors import ContractError, IntegrationDiverged
from geoflow.integrators import StepperConfig, integrate
from geoflow.models import MODEL_IDS, ModelSpec, default_resolution, initial_state


@dataclass
class Check:
    criterion: int
    name: str
    value: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"[{verdict}] criterion {self.criterion:>2}  {self.name:<46} "
                f"value={self.value:.3e} tol={self.tolerance:.1e} ({self.seconds:.2f}s){extra}")


def _le(criterion, name, value, tol, seconds=0.0, detail=""):
    return Check(criterion, name, float(value), tol, bool(value <= tol), seconds, detail)


def _runtime(criterion, name, seconds, limit):
    return Check(criterion, f"{name} runtime", seconds, limit, seconds < limit, seconds)


# ---------------------------------------------------------------------------
# 1. adjoint identity


def criterion_adjoint(n_triples=100, seed=0):
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    checks = []
    cases = [
        ("l2", functools.partial(s1.ad_transpose, metric=s1.L2), oracle.wrong_ad_transpose_l2),
        ("h1", functools.partial(s1.ad_transpose, metric=s1.H1), oracle.wrong_ad_transpose_h1),
    ]
    for kind, good, bad in cases:
        triples = [oracle.random_triple(rng) for _ in range(n_triples)]
        worst = max(oracle.adjoint_residual(good, kind, t) for t in triples)
        weakest = min(oracle.adjoint_residual(bad, kind, t) for t in triples)
        checks.append(_le(1, f"adjoint identity ({kind})", worst, 1e-12))
        checks.append(Check(1, f"negative control ({kind}) exceeds 1e-3", weakest, 1e-3,
                            weakest > 1e-3))
    checks.append(_runtime(1, "adjoint suite", time.perf_counter() - t0, 5.0))
    return checks


# ---------------------------------------------------------------------------
# 2. extension reductions


def criterion_extensions(seed=0, draws=5):
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    by_kind = {}
    for kind, name, data in oracle.extension_cases(seed):
        worst = max(oracle.extension_residual(kind, data, rng) for _ in range(draws))
        by_kind.setdefault(kind, []).append((name, worst))
    checks = []
    for kind, rows in by_kind.items():
        worst = max(r for _, r in rows)
        checks.append(_le(2, f"euler_rhs_{kind} vs brute force ({len(rows)} algebras)", worst, 1e-12,
                          detail="; ".join(n for n, _ in rows)))
        checks.append(Check(2, f"euler_rhs_{kind} algebra count", len(rows), 3, len(rows) >= 3))
    checks.append(_runtime(2, "extension suite", time.perf_counter() - t0, 5.0))
    return checks


# ---------------------------------------------------------------------------
# 3. rigid body


def criterion_rigid_body():
    t0 = time.perf_counter()
    model = A.rigid_body((1.0, 2.0, 3.0))
    s0 = (np.array([0.3, 1.0, -0.5]),)
    traj = integrate(model, s0, StepperConfig(t_final=100.0, dt=1e-3, record_stride=100),
                     detect_blowup=False)
    e0 = traj.diagnostics[0]
    e_drift = max(relative_drift(d["energy"], e0["energy"]) for d in traj.diagnostics)
    c_drift = max(relative_drift(d["casimir"], e0["casimir"]) for d in traj.diagnostics)
    seconds = time.perf_counter() - t0
    stationary = 0.0
    for axis in range(3):
        u = np.zeros(3)
        u[axis] = 1.7
        run = integrate(model, (u,), StepperConfig(t_final=1.0, dt=1e-3, record_stride=1000),
                        diagnostics=False, detect_blowup=False)
        stationary = max(stationary, float(np.abs(run.final[0] - u).max()),
                         float(np.abs(model.rhs((u,))[0]).max()))
    return [
        _le(3, "rigid body energy drift (t=100, dt=1e-3)", e_drift, 1e-10, seconds),
        _le(3, "rigid body Casimir |Iu|^2 drift", c_drift, 1e-10, seconds),
        _le(3, "principal axes stationary", stationary, 1e-12),
        _runtime(3, "rigid body", seconds, 5.0),
    ]


# ---------------------------------------------------------------------------
# 4. Burgers


def burgers_exact(x, t, u0=np.sin, iters=200):
    """Characteristics solution ``u = u0(x - 3ut)`` by fixed-point iteration."""
    u = u0(x)
    for _ in range(iters):
        u_new = u0(x - 3.0 * u * t)
        if np.abs(u_new - u).max() < 1e-15:
            return u_new
        u = u_new
    return u


def criterion_burgers():
    t0 = time.perf_counter()
    spec = ModelSpec("burgers")
    s0 = initial_state(spec, s1.DEFAULT_N, preset="sine", amplitude=1.0)
    traj = integrate(spec, s0, StepperConfig(t_final=0.2, cfl=spec.entry.cfl, record_stride=10**9))
    u = traj.final[0]
    x = s1.grid_points(s1.collocation_size(u.n_modes))
    err = float(np.abs(u.grid() - burgers_exact(x, 0.2)).max())
    fired = float("nan")
    try:
        integrate(spec, s0, StepperConfig(t_final=1.0, cfl=spec.entry.cfl, record_stride=10**9),
                  diagnostics=False)
    except IntegrationDiverged as exc:
        fired = exc.time
    seconds = time.perf_counter() - t0
    in_window = 0.3 < fired < 0.4
    return [
        _le(4, "Burgers vs characteristics at t=0.2 (max norm)", err, 1e-6),
        Check(4, "blow-up detector fires in (0.3, 0.4)", fired, 0.4, in_window,
              detail=f"fired at t={fired:.4f}"),
        _runtime(4, "Burgers", seconds, 10.0),
    ]


# ---------------------------------------------------------------------------
# 5-7. conservation


def run_default(model_id, params=None, preset=None, amplitude=None, seed=0, t_final=None,
                cfl=None, n=None, record_stride=10):
    spec = ModelSpec(model_id, params or {})
    e = spec.entry
    s0 = initial_state(spec, n or default_resolution(spec), preset=preset,
                       amplitude=amplitude, seed=seed)
    cfg = StepperConfig(t_final=e.t_final if t_final is None else t_final,
                        cfl=e.cfl if cfl is None else cfl, record_stride=record_stride)
    return spec, integrate(spec, s0, cfg)


def criterion_energy(models=MODEL_IDS):
    t0 = time.perf_counter()
    checks = []
    for mid in models:
        t1 = time.perf_counter()
        try:
            spec, traj = run_default(mid, record_stride=50)
            drift = drift_report(spec, traj).rows["energy"]["drift"]
            detail = ""
        except IntegrationDiverged as exc:
            drift, detail = float("inf"), f"diverged at t={exc.time:.4f}"
        checks.append(_le(5, f"energy drift {mid}", drift, 1e-8, time.perf_counter() - t1, detail))
    checks.append(_runtime(5, "energy catalog", time.perf_counter() - t0, 180.0))
    return checks


def criterion_casimirs():
    t0 = time.perf_counter()
    checks = []
    wanted = {
        "euler-2d": [("enstrophy", 1e-8), ("omega3", 1e-4), ("omega4", 1e-4)],
        "qg-beta": [("enstrophy", 1e-8), ("omega3", 1e-4), ("omega4", 1e-4)],
        "mhd-2d": [("cross_helicity", 1e-8)],
        "charged-fluid": [("rho2", 1e-6), ("rho3", 1e-6)],
        "passive-scalar": [("f2", 1e-6), ("f3", 1e-6)],
    }
    for mid, names in wanted.items():
        t1 = time.perf_counter()
        spec, traj = run_default(mid, t_final=1.0)
        report = drift_report(spec, traj)
        for name, tol in names:
            checks.append(_le(6, f"{mid} {name}", report.rows[name]["drift"], tol,
                              time.perf_counter() - t1))
    checks.append(_runtime(6, "Casimir suite", time.perf_counter() - t0, 60.0))
    return checks


def criterion_monitors():
    t0 = time.perf_counter()
    checks = []
    for mid in ("euler-2d", "qg-beta", "boussinesq", "passive-scalar"):
        spec, traj = run_default(mid, t_final=1.0)
        rep = monitor_totally_geodesic(spec, traj)
        names = ", ".join(f"{k}={v:.1e}" for k, v in rep.quantities.items())
        checks.append(_le(7, f"totally geodesic {mid}", rep.worst, 1e-11, detail=names))
    checks.append(_runtime(7, "monitor suite", time.perf_counter() - t0, 60.0))
    return checks


# ---------------------------------------------------------------------------
# 8. reductions


def _line_field(n_grid, u1d):
    """Torus field ``(u(x), 0)`` built from a circle spectrum."""
    t = s2.torus(n_grid)
    hat = np.zeros((2,) + t.spectral_shape, dtype=complex)
    c = u1d.coeffs
    hat[0, : c.size, 0] = c
    hat[0, n_grid - c.size + 1 :, 0] = np.conj(c[1:][::-1])
    return s2.VecField2D(hat * t.mask)


def _line_coeffs(v, n_modes):
    return v.component(0).hat[: n_modes + 1, 0]


def criterion_reductions(seed=0):
    rng = np.random.default_rng(seed)
    n_grid = 128
    n_modes = s2.torus(n_grid).kmax[0]
    u = oracle.random_band_limited(rng, n_modes, band=10)
    field = _line_field(n_grid, u)
    tm = s2.rhs_template_matching(field)
    burg = s1.rhs_burgers(u)
    e_tm = float(np.abs(_line_coeffs(tm, n_modes) - burg.coeffs).max())
    e_tm2 = float(np.abs(tm.hat[1]).max())
    ep = s2.rhs_epdiff(field, 1.0)
    ch = s1.rhs_camassa_holm(u, 0.0)
    e_ep = float(np.abs(_line_coeffs(ep, n_modes) - ch.coeffs).max())
    e_kdv = float(np.abs(s1.rhs_kdv(u, 0.0).coeffs - burg.coeffs).max())
    e_ext = float(np.abs(s1.rhs_camassa_holm(u, 0.0).coeffs
                         - s1.inertia_invert(s1.ch_momentum_rate(u), s1.H1).coeffs).max())
    # expanded extended-CH momentum rate at a = 0 against the Hamiltonian form
    du1, du2, du3 = (s1.deriv(u, k) for k in (1, 2, 3))
    expanded = (-3.0 * s1.multiply(u, du1) + 2.0 * s1.multiply(du1, du2) + s1.multiply(u, du3))
    e_exp = float(np.abs(s1.inertia_invert(expanded, s1.H1).coeffs - ch.coeffs).max())
    return [
        _le(8, "template matching on (u(x),0) = Burgers", max(e_tm, e_tm2), 1e-12),
        _le(8, "EPDiff (alpha^2=1) on (u(x),0) = Camassa-Holm", e_ep, 1e-12),
        _le(8, "KdV at a=0 = Burgers", e_kdv, 1e-12),
        _le(8, "extended CH at a=0 = CH", max(e_ext, e_exp), 1e-12),
    ]


# ---------------------------------------------------------------------------
# 9. convergence


def rk4_order_ch(dts=(0.04, 0.02, 0.01), t_final=0.8, n_modes=32):
    spec = ModelSpec("camassa-holm")
    s0 = initial_state(spec, n_modes, preset="two-mode", amplitude=0.5)

    def run(dt):
        cfg = StepperConfig(t_final=t_final, dt=dt, record_stride=10**9)
        return integrate(spec, s0, cfg, diagnostics=False).final[0]

    ref = run(dts[-1] / 4)
    errs = [float(np.abs((run(dt) - ref).coeffs).max()) for dt in dts]
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    return float(slope), errs


def _analytic_vorticity(x, y):
    return np.exp(np.cos(x)) + np.exp(0.8 * np.sin(y)) + 0.5 * np.exp(np.cos(x + y))


def spectral_error(n, n_ref=128):
    def rhs_at(m):
        hat = s2.Field2D.from_function(_analytic_vorticity, m).hat.copy()
        hat[0, 0] = 0.0
        return s2.rhs_euler_vorticity(s2.Field2D(hat))

    ref = rhs_at(n_ref).grid()
    return float(np.abs(s2.resample(rhs_at(n), n_ref).grid() - ref).max())


def criterion_convergence():
    slope, errs = rk4_order_ch()
    e16, e32 = spectral_error(16), spectral_error(32)
    ratio = e16 / max(e32, 1e-300)
    return [
        Check(9, "RK4 order on Camassa-Holm", slope, 0.3, abs(slope - 4.0) <= 0.3,
              detail="errors " + ", ".join(f"{e:.2e}" for e in errs)),
        Check(9, "spectral error ratio N=16 -> 32 (Euler vorticity)", ratio, 1e3, ratio > 1e3,
              detail=f"e16={e16:.2e} e32={e32:.2e}"),
    ]


# ---------------------------------------------------------------------------
# 10. finite differences


FD_MODELS = ("euler-2d", "qg-beta", "boussinesq", "passive-scalar", "mhd-2d",
             "charged-fluid", "template-matching", "epdiff", "lae-alpha")


def fd_state(spec, seed=5, amplitude=0.5):
    s = initial_state(spec, 128, preset="random-band", amplitude=amplitude, seed=seed)
    if isinstance(s[-1], np.ndarray):
        s = s[:-1] + (np.array([0.3, -0.2]),)
    return s


def criterion_finite_difference(n_fine=512):
    t0 = time.perf_counter()
    checks = []
    for mid in FD_MODELS:
        spec = ModelSpec(mid)
        gaps = oracle.fd_crosscheck(spec, fd_state(spec), n_fine)
        checks.append(_le(10, f"finite-difference {mid} ({n_fine}^2)", max(gaps.values()), 1e-4))
    checks.append(_runtime(10, "finite-difference suite", time.perf_counter() - t0, 60.0))
    return checks


CRITERIA = {
    1: criterion_adjoint,
    2: criterion_extensions,
    3: criterion_rigid_body,
    4: criterion_burgers,
    5: criterion_energy,
    6: criterion_casimirs,
    7: criterion_monitors,
    8: criterion_reductions,
    9: criterion_convergence,
    10: criterion_finite_difference,
}

SUITES = {
    "oracle": (1, 2, 8, 10),
    "conservation": (3, 4, 5, 6),
    "convergence": (9,),
    "monitors": (7,),
    "all": tuple(CRITERIA),
}


def run_suite(name, emit=None):
    if name not in SUITES:
        raise ContractError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    checks = []
    for c in SUITES[name]:
        rows = CRITERIA[c]()
        for row in rows:
            if emit:
                emit(row.line())
        checks.extend(rows)
    return checks
