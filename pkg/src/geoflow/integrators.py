"""Fixed-step RK4 time integration with CFL step selection and blow-up detection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.errors import ContractError, IntegrationDiverged

SPEED_FLOOR = 1e-12
BLOWUP_FRACTION = 0.1


@dataclass(frozen=True)
class StepperConfig:
    t_final: float
    dt: float | None = None
    cfl: float | None = None
    record_stride: int = 1

    def __post_init__(self):
        if (self.dt is None) == (self.cfl is None):
            raise ContractError("exactly one of dt and cfl must be given")
        if self.dt is not None and not self.dt > 0:
            raise ContractError("dt must be positive")
        if self.cfl is not None and not 0 < self.cfl <= 1:
            raise ContractError("cfl must lie in (0, 1]")
        if not self.t_final >= 0:
            raise ContractError("t_final must be non-negative")
        if int(self.record_stride) < 1:
            raise ContractError("record_stride must be a positive integer")


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)

    def append(self, t, state, diag=None):
        if self.times and not t > self.times[-1]:
            raise ContractError("trajectory times must increase strictly")
        self.times.append(float(t))
        self.states.append(state)
        self.diagnostics.append(diag if diag is not None else {})

    def __len__(self):
        return len(self.times)

    @property
    def final(self):
        return self.states[-1]


def _axpy(state, rate, h):
    return tuple(x + h * r for x, r in zip(state, rate))


def _is_finite(state):
    for x in state:
        data = getattr(x, "coeffs", None)
        if data is None:
            data = getattr(x, "hat", x)
        if not np.all(np.isfinite(data)):
            return False
        mean = getattr(x, "mean", None)
        if isinstance(mean, np.ndarray) and not np.all(np.isfinite(mean)):
            return False
    return True


def rk4_step(rhs, state, dt, t=0.0):
    """Classical four-stage Runge-Kutta step on a tuple state."""
    if not dt > 0:
        raise ContractError("dt must be positive")
    k1 = rhs(state)
    k2 = rhs(_axpy(state, k1, 0.5 * dt))
    k3 = rhs(_axpy(state, k2, 0.5 * dt))
    k4 = rhs(_axpy(state, k3, dt))
    out = tuple(x + (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d)
                for x, a, b, c, d in zip(state, k1, k2, k3, k4))
    if not _is_finite(out):
        raise IntegrationDiverged(f"non-finite state at t = {t + dt:.6g}", t + dt)
    return out


def cfl_dt(model, state, cfl, cap=math.inf, spacing=None):
    """``cfl / (speed / h + linear frequency)``, capped.

    ``speed`` is the model's transport speed (plus ``|B|`` for MHD) and the linear
    frequency bounds dispersive and rotational terms (e.g. ``2|a| k_max^3`` for KdV).
    """
    if not 0 < cfl <= 1:
        raise ContractError("cfl must lie in (0, 1]")
    h = model.grid_spacing(state) if spacing is None else spacing
    rate = max(model.speed(state), SPEED_FLOOR) / h + model.linear_rate(state)
    return min(cfl / rate, cap)


def high_band_fraction(state) -> float:
    """Share of spectral energy carried by the upper third of the retained band."""
    total = high = 0.0
    for x in state:
        if isinstance(x, s1.Spectrum1D):
            e = np.abs(x.coeffs) ** 2
            k = np.arange(e.size)
            e[1:] *= 2
            total += e[1:].sum()
            high += e[k > 2 * x.n_modes / 3].sum()
        elif isinstance(x, (s2.Field2D, s2.VecField2D)):
            t = x.torus
            e = t.weights * np.abs(x.hat) ** 2
            if e.ndim == 3:
                e = e.sum(axis=0)
            e = e * t.mask
            e[0, 0] = 0.0
            kx, ky = t.kmax
            band = np.maximum(np.abs(t.kx) / kx, t.ky / ky) > 2.0 / 3.0
            total += e.sum()
            high += e[band].sum()
    return high / total if total > 0 else 0.0


def _diagnostics(model, state):
    diag = {"energy": model.energy(state)}
    diag.update(model.invariants(state))
    return diag


def integrate(model, s0, cfg: StepperConfig, diagnostics=True, detect_blowup=True):
    """Advance ``s0`` to ``cfg.t_final`` and record every ``record_stride`` steps.

    ``model`` needs ``rhs(state)``; ``project``, ``energy``/``invariants`` and the
    CFL hooks are used when present.  Raises :class:`IntegrationDiverged` carrying
    the partial trajectory when the state leaves the smooth regime.
    """
    project = getattr(model, "project", None)
    want_diag = diagnostics and hasattr(model, "energy")
    traj = Trajectory()
    traj.append(0.0, s0, _diagnostics(model, s0) if want_diag else None)
    t, state, step = 0.0, s0, 0
    t_final = float(cfg.t_final)
    n_fixed = None
    if cfg.dt is not None:
        n_fixed = int(math.ceil(t_final / cfg.dt - 1e-9)) if t_final > 0 else 0
    while True:
        if n_fixed is not None:
            if step >= n_fixed:
                break
            dt = cfg.dt if step < n_fixed - 1 else t_final - t
        else:
            remaining = t_final - t
            if remaining <= 1e-14 * max(1.0, t_final):
                break
            dt = cfl_dt(model, state, cfg.cfl, cap=remaining)
        try:
            state = rk4_step(model.rhs, state, dt, t)
        except IntegrationDiverged as exc:
            exc.trajectory = traj
            raise
        if project is not None:
            state = project(state)
        step += 1
        t = t_final if (n_fixed is not None and step == n_fixed) else t + dt
        if detect_blowup and high_band_fraction(state) > BLOWUP_FRACTION:
            raise IntegrationDiverged(
                f"spectral blow-up detected at t = {t:.6g}", t, traj)
        last = (n_fixed is not None and step == n_fixed) or (
            n_fixed is None and t_final - t <= 1e-14 * max(1.0, t_final))
        if step % cfg.record_stride == 0 or last:
            traj.append(t, state, _diagnostics(model, state) if want_diag else None)
    return traj
