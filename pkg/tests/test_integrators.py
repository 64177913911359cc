import numpy as np
import pytest

from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.errors import ContractError, IntegrationDiverged
from geoflow.integrators import (StepperConfig, Trajectory, cfl_dt, high_band_fraction, integrate,
                                 rk4_step)
from geoflow.models import ModelSpec, initial_state


class Linear:
    """``u' = lam u`` on a 1-tuple of arrays."""

    def __init__(self, lam):
        self.lam = lam

    def rhs(self, state):
        return (self.lam @ state[0] if np.ndim(self.lam) else self.lam * state[0],)


def test_stepper_config_validation():
    with pytest.raises(ContractError):
        StepperConfig(t_final=1.0)
    with pytest.raises(ContractError):
        StepperConfig(t_final=1.0, dt=0.1, cfl=0.5)
    with pytest.raises(ContractError):
        StepperConfig(t_final=1.0, cfl=1.5)
    with pytest.raises(ContractError):
        StepperConfig(t_final=-1.0, dt=0.1)
    with pytest.raises(ContractError):
        StepperConfig(t_final=1.0, dt=0.1, record_stride=0)


def test_trajectory_times_increase():
    tr = Trajectory()
    tr.append(0.0, (1,))
    with pytest.raises(ContractError):
        tr.append(0.0, (2,))


def test_rk4_zero_rhs():
    s = (np.array([1.0, -2.0]),)
    out = rk4_step(lambda st: (np.zeros(2),), s, 0.3)
    assert np.array_equal(out[0], s[0])


@pytest.mark.parametrize("lam_dt", [0.1, 0.05, -0.1])
def test_rk4_linear_one_step(lam_dt):
    dt = 0.01
    lam = lam_dt / dt
    out = rk4_step(Linear(lam).rhs, (np.array([1.0]),), dt)[0][0]
    # Lagrange remainder of the degree-4 Taylor polynomial
    assert abs(out - np.exp(lam_dt)) <= abs(lam_dt) ** 5 / 120 * np.exp(abs(lam_dt))
    assert abs(out - np.exp(lam_dt)) >= abs(lam_dt) ** 5 / 120 * np.exp(-abs(lam_dt))


def test_rk4_oscillator_order():
    rot = Linear(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    s0 = (np.array([1.0, 0.0]),)
    errs = []
    for n in (40, 80):
        traj = integrate(rot, s0, StepperConfig(t_final=2 * np.pi, dt=2 * np.pi / n),
                         detect_blowup=False)
        errs.append(np.abs(traj.final[0] - s0[0]).max())
    assert 14 < errs[0] / errs[1] < 18


def test_rk4_raises_on_nonfinite():
    with pytest.raises(IntegrationDiverged):
        rk4_step(lambda st: (np.array([np.inf]),), (np.array([1.0]),), 0.1)


def test_fixed_dt_lands_on_t_final():
    rot = Linear(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    traj = integrate(rot, (np.array([1.0, 0.0]),), StepperConfig(t_final=1.0, dt=0.3),
                     detect_blowup=False)
    assert traj.times == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.0])
    assert traj.times[-1] == 1.0


def test_t_final_zero_single_snapshot():
    spec = ModelSpec("burgers")
    s0 = initial_state(spec, 16, preset="sine")
    traj = integrate(spec, s0, StepperConfig(t_final=0.0, cfl=0.5))
    assert len(traj) == 1 and traj.final is s0


def test_record_stride_keeps_last():
    spec = ModelSpec("camassa-holm")
    s0 = initial_state(spec, 16)
    traj = integrate(spec, s0, StepperConfig(t_final=0.1, dt=0.01, record_stride=3))
    assert traj.times == pytest.approx([0.0, 0.03, 0.06, 0.09, 0.1])
    assert set(traj.diagnostics[0]) == {"energy", *spec.invariants(s0)}


def test_cfl_dt_scaling():
    spec = ModelSpec("burgers")
    zero = (s1.Spectrum1D.zeros(32),)
    assert cfl_dt(spec, zero, 0.5, cap=0.25) == 0.25
    u = s1.Spectrum1D.from_modes(16, sin={1: 1.0})
    d16 = cfl_dt(spec, (u,), 0.5)
    d32 = cfl_dt(spec, (s1.Spectrum1D.from_modes(32, sin={1: 1.0}),), 0.5)
    h16 = 2 * np.pi / s1.collocation_size(16)
    h32 = 2 * np.pi / s1.collocation_size(32)
    assert d32 / d16 == pytest.approx(h32 / h16)
    w = s2.Field2D.from_function(lambda x, y: np.sin(x) * np.cos(y), 32)
    e = ModelSpec("euler-2d")
    dt32 = cfl_dt(e, (w, np.zeros(2)), 0.5)
    dt64 = cfl_dt(e, (s2.resample(w, 64), np.zeros(2)), 0.5)
    assert dt64 == pytest.approx(dt32 / 2)


def test_cfl_dt_kdv_dispersive_bound():
    spec = ModelSpec("kdv", {"a": 1.0})
    s = initial_state(spec, 85, preset="sine")
    assert cfl_dt(spec, s, 0.5) <= 0.5 / (2 * 85**3)


def test_burgers_finite_then_blows_up():
    spec = ModelSpec("burgers")
    s0 = initial_state(spec, 85, preset="sine", amplitude=1.0)
    traj = integrate(spec, s0, StepperConfig(t_final=0.3, cfl=0.2, record_stride=50))
    assert np.isfinite(traj.final[0].coeffs).all()
    assert high_band_fraction(traj.final) < 0.1
    with pytest.raises(IntegrationDiverged) as info:
        integrate(spec, s0, StepperConfig(t_final=1.0, cfl=0.2, record_stride=50))
    exc = info.value
    assert 1 / 3 < exc.time < 0.6
    assert exc.trajectory is not None and exc.trajectory.times[-1] < exc.time


def test_taylor_green_steady():
    spec = ModelSpec("euler-2d")
    w = s2.Field2D.from_function(lambda x, y: np.cos(x) + np.cos(y), 32)
    traj = integrate(spec, (w, np.zeros(2)), StepperConfig(t_final=1.0, cfl=0.5))
    assert np.abs(traj.final[0].hat - w.hat).max() <= 1e-10


def test_deterministic():
    spec = ModelSpec("qg-beta")
    s0 = initial_state(spec, 32, seed=9)
    cfg = StepperConfig(t_final=0.2, cfl=0.5)
    a, b = integrate(spec, s0, cfg), integrate(spec, s0, cfg)
    assert a.times == b.times
    assert np.array_equal(a.final[0].hat, b.final[0].hat)


@pytest.mark.parametrize("mid", ["mhd-2d", "charged-fluid", "lae-alpha"])
def test_incompressibility_over_many_steps(mid):
    spec = ModelSpec(mid)
    s0 = initial_state(spec, 16, amplitude=0.5)
    traj = integrate(spec, s0, StepperConfig(t_final=1.0, dt=1e-3, record_stride=250))
    for s in traj.states:
        for i in spec.entry.solenoidal:
            assert s2.max_divergence(s[i]) <= 1e-10


def test_fourth_order_across_models():
    for mid in ("kdv", "pair-h1", "euler-2d", "epdiff"):
        spec = ModelSpec(mid)
        s0 = initial_state(spec, 16, amplitude=0.5)

        def run(dt):
            x = integrate(spec, s0, StepperConfig(t_final=0.4, dt=dt), diagnostics=False,
                          detect_blowup=False).final[0]
            return x.coeffs if spec.dim == 1 else x.hat

        ref = run(0.0025)
        e1, e2 = (np.abs(run(dt) - ref).max() for dt in (0.04, 0.02))
        assert 8 <= e1 / e2 <= 32, mid
