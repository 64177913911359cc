import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoflow import oracle
from geoflow import spectral2d as s2
from geoflow.errors import ContractError

NG = 32
seeds = st.integers(0, 2**32 - 1)


def F(func, n=NG):
    return s2.Field2D.from_function(func, n)


def V(func, n=NG):
    return s2.VecField2D.from_function(func, n)


def gmax(x):
    return float(np.abs(x.grid()).max())


def rand_scalar(rng, n=NG, zero_mean=True):
    t = s2.torus(n)
    hat = (rng.standard_normal(t.spectral_shape) + 1j * rng.standard_normal(t.spectral_shape))
    hat *= np.exp(-0.3 * t.k2)
    f = s2.Field2D.from_grid(t.to_grid(hat * t.mask))
    if zero_mean:
        f = s2.Field2D(f.hat - f.hat[0, 0] * (np.arange(f.hat.size) == 0).reshape(f.hat.shape))
    return f


def rand_solenoidal(rng, n=NG, mean=(0.0, 0.0)):
    return s2.velocity_from_vorticity(rand_scalar(rng, n), mean)


def test_field_roundtrip_and_mean():
    f = F(lambda x, y: 1.5 + np.sin(x) * np.cos(2 * y))
    x, y = s2.torus(NG).points()
    assert np.allclose(f.grid(), 1.5 + np.sin(x) * np.cos(2 * y))
    assert abs(f.mean() - 1.5) < 1e-14
    assert abs(f.integral() - 1.5 * s2.AREA) < 1e-12
    v = V(lambda x, y: (np.sin(y) + 0.3, np.cos(x)))
    assert np.allclose(v.mean, [0.3, 0.0])
    assert np.allclose(v.component(0).grid(), np.sin(y) + 0.3)


def test_leray_examples():
    phi = F(lambda x, y: np.sin(x + 2 * y) + np.cos(3 * y))
    grad = s2.grad(phi)
    assert np.abs(s2.leray_project(grad).hat).max() < 1e-14
    u = s2.velocity_from_vorticity(F(lambda x, y: np.cos(x) * np.sin(y)), (0.2, -0.1))
    p = s2.leray_project(u)
    assert np.abs(p.hat - u.hat).max() < 1e-15 and np.allclose(p.mean, u.mean)
    v = V(lambda x, y: (np.sin(x), np.sin(x)))
    p = s2.leray_project(v)
    assert gmax(p.component(0)) < 1e-14
    assert np.allclose(p.component(1).grid(), np.sin(s2.torus(NG).points()[0]))


def test_stream_solve_examples():
    psi, u = s2.stream_solve(F(lambda x, y: np.sin(y)))
    x, y = s2.torus(NG).points()
    assert np.allclose(psi.grid(), -np.sin(y))
    assert np.allclose(u.grid()[0], -np.cos(y)) and np.allclose(u.grid()[1], 0.0)
    _, u = s2.stream_solve(s2.Field2D.zeros(NG))
    assert not u.hat.any()
    with pytest.raises(ContractError):
        s2.stream_solve(F(lambda x, y: 1.0 + np.sin(x)))


def test_jacobian_examples():
    f = F(lambda x, y: np.sin(x) + np.cos(x - 2 * y))
    assert gmax(s2.jacobian(f, f)) < 1e-13
    assert gmax(s2.jacobian(f, F(lambda x, y: 0 * x + 2.0))) < 1e-13
    x, y = s2.torus(NG).points()
    j = s2.jacobian(F(lambda x, y: np.sin(x)), F(lambda x, y: np.sin(y)))
    assert np.allclose(j.grid(), np.cos(x) * np.cos(y))


def test_euler_vorticity_examples():
    x, y = s2.torus(NG).points()
    assert gmax(s2.rhs_euler_vorticity(F(lambda x, y: np.sin(y)))) < 1e-14
    assert gmax(s2.rhs_euler_vorticity(F(lambda x, y: np.cos(x) + np.cos(y)))) < 1e-14
    rate = s2.rhs_euler_vorticity(F(lambda x, y: np.sin(x) + np.cos(2 * y)))
    assert np.allclose(rate.grid(), 1.5 * np.cos(x) * np.sin(2 * y), atol=1e-13)
    # same sign from the finite-difference advection oracle
    xf, yf = s2.torus(512).points()
    fd = oracle.finite_difference_rhs("euler-2d", {"omega": np.sin(xf) + np.cos(2 * yf)})
    assert np.abs(fd["omega"] - 1.5 * np.cos(xf) * np.sin(2 * yf)).max() < 1e-3


def test_qg_examples():
    w = F(lambda x, y: np.sin(x - y) + 0.5 * np.cos(2 * x))
    assert np.abs((s2.rhs_qg(w, 0.0) - s2.rhs_euler_vorticity(w)).hat).max() == 0.0
    assert gmax(s2.rhs_qg(F(lambda x, y: np.sin(y)), 3.0)) < 1e-14
    x, _ = s2.torus(NG).points()
    assert np.allclose(s2.rhs_qg(F(lambda x, y: np.sin(x)), 1.0).grid(), np.cos(x))


def test_boussinesq_examples():
    w = F(lambda x, y: np.sin(x - y))
    dw, dxi = s2.rhs_boussinesq(w, s2.Field2D.zeros(NG), 1e-300)
    assert np.abs((dw - s2.rhs_euler_vorticity(w)).hat).max() < 1e-15 and gmax(dxi) < 1e-15
    zero = s2.Field2D.zeros(NG)
    dw, dxi = s2.rhs_boussinesq(zero, F(lambda x, y: np.sin(y)), 1.0)
    assert gmax(dw) < 1e-14 and gmax(dxi) < 1e-14
    x, _ = s2.torus(NG).points()
    dw, dxi = s2.rhs_boussinesq(zero, F(lambda x, y: np.sin(x)), 2.0)
    assert np.allclose(dw.grid(), -np.cos(x)) and gmax(dxi) < 1e-14


def test_passive_scalar_examples():
    w = F(lambda x, y: np.sin(x + y) - np.cos(2 * y))
    _, df = s2.rhs_passive_scalar(w, F(lambda x, y: 0 * x + 4.0))
    assert gmax(df) < 1e-13
    dw, df = s2.rhs_passive_scalar(w, w)
    assert np.abs((dw - df).hat).max() < 1e-15
    x, y = s2.torus(NG).points()
    _, df = s2.rhs_passive_scalar(F(lambda x, y: np.sin(y)), F(lambda x, y: np.sin(x)))
    assert np.allclose(df.grid(), np.cos(x) * np.cos(y))


def test_mhd_examples():
    rng = np.random.default_rng(2)
    u = rand_solenoidal(rng)
    du, db = s2.rhs_mhd(u, s2.VecField2D.zeros(NG))
    assert np.abs(s2.curl(du).hat - s2.rhs_euler_vorticity(s2.curl(u)).hat).max() < 1e-10
    assert gmax(db.component(0)) < 1e-15
    du, db = s2.rhs_mhd(u, u)
    assert np.abs(du.hat).max() < 1e-13 and np.abs(db.hat).max() < 1e-13
    b = rand_solenoidal(rng)
    du, db = s2.rhs_mhd(s2.VecField2D.zeros(NG), b)
    bv = b.grid()
    dbx = np.stack([bv[0] * s2.dx(b.component(i)).grid() + bv[1] * s2.dy(b.component(i)).grid()
                    for i in range(2)])
    ref = s2.leray_project(s2.VecField2D.from_grid(*dbx))
    assert np.abs(du.hat - ref.hat).max() < 1e-12 and np.abs(db.hat).max() < 1e-15
    with pytest.raises(ContractError):
        s2.rhs_mhd(V(lambda x, y: (np.sin(x), 0 * x)), b)


def test_charged_fluid_examples():
    rng = np.random.default_rng(4)
    u = rand_solenoidal(rng)
    du, drho = s2.rhs_charged_fluid(u, s2.Field2D.zeros(NG), 1.0)
    ref = s2.rhs_euler_vorticity(s2.curl(u))
    assert np.abs(s2.curl(du).hat - ref.hat).max() < 1e-10
    du, _ = s2.rhs_charged_fluid(u, F(lambda x, y: 0 * x + 0.7), 2.0)
    assert np.abs(s2.curl(du).hat - ref.hat).max() < 1e-10
    shear = V(lambda x, y: (-np.cos(y), 0 * x))
    du, drho = s2.rhs_charged_fluid(shear, F(lambda x, y: np.sin(y)), 1.0)
    assert gmax(du.component(0)) < 1e-13 and gmax(du.component(1)) < 1e-13 and gmax(drho) < 1e-13


def test_template_matching_examples():
    assert np.abs(s2.rhs_template_matching(V(lambda x, y: (0 * x + 1.0, 0 * x - 2.0))).hat).max() < 1e-15
    x, _ = s2.torus(NG).points()
    r = s2.rhs_template_matching(V(lambda x, y: (np.sin(x), 0 * x)))
    assert np.allclose(r.component(0).grid(), -1.5 * np.sin(2 * x)) and gmax(r.component(1)) < 1e-14
    r = s2.rhs_template_matching(V(lambda x, y: (0 * x, np.sin(x))))
    assert np.allclose(r.component(0).grid(), -0.5 * np.sin(2 * x)) and gmax(r.component(1)) < 1e-14


def test_epdiff_examples():
    assert np.abs(s2.rhs_epdiff(V(lambda x, y: (0 * x + 0.5, 0 * x)), 0.3).hat).max() < 1e-15
    x, _ = s2.torus(NG).points()
    r = s2.rhs_epdiff(V(lambda x, y: (np.sin(x), 0 * x)), 1.0)
    assert np.allclose(r.component(0).grid(), -0.6 * np.sin(2 * x)) and gmax(r.component(1)) < 1e-14
    u = V(lambda x, y: (np.sin(x + y), np.cos(2 * x - y)))
    gap = s2.rhs_epdiff(u, 1e-6) - s2.rhs_template_matching(u)
    assert np.abs(gap.hat).max() < 1e-4
    with pytest.raises(ContractError):
        s2.rhs_epdiff(u, 0.0)


def test_lae_alpha_examples():
    assert not s2.rhs_lae_alpha(s2.VecField2D.zeros(NG), 0.1).hat.any()
    shear = V(lambda x, y: (-np.cos(y), 0 * x))
    assert np.abs(s2.rhs_lae_alpha(shear, 0.5).hat).max() < 1e-14
    u = rand_solenoidal(np.random.default_rng(6))
    gap = s2.curl(s2.rhs_lae_alpha(u, 1e-6)).hat - s2.rhs_euler_vorticity(s2.curl(u)).hat
    assert np.abs(gap).max() < 1e-4
    with pytest.raises(ContractError):
        s2.rhs_lae_alpha(u, -1.0)


def test_moment_exact_on_padded_grid():
    f = F(lambda x, y: np.cos(x) + np.sin(3 * y))
    # mean of (cos x + sin 3y)^4 = 3/8 + 3/8 + 6 * 1/4
    assert abs(s2.moment(f, 4) / s2.AREA - (0.375 + 0.375 + 1.5)) < 1e-13
    assert abs(s2.moment(f, 2) / s2.AREA - 1.0) < 1e-14


def test_resample_roundtrip():
    f = rand_scalar(np.random.default_rng(8), 16)
    g = s2.resample(s2.resample(f, 64), 16)
    assert np.abs(g.hat - f.hat).max() < 1e-15


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_leray_idempotent_selfadjoint(seed):
    rng = np.random.default_rng(seed)
    v = s2.VecField2D.from_grid(*rng.standard_normal((2, NG, NG)))
    w = s2.VecField2D.from_grid(*rng.standard_normal((2, NG, NG)))
    p = s2.leray_project(v)
    assert np.abs(s2.leray_project(p).hat - p.hat).max() <= 1e-12
    lhs = s2.vec_inner(p, w)
    rhs = s2.vec_inner(v, s2.leray_project(w))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
    assert s2.max_divergence(p) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_stream_roundtrip(seed):
    w = rand_scalar(np.random.default_rng(seed))
    _, u = s2.stream_solve(w)
    assert np.abs(s2.curl(u).hat - w.hat).max() <= 1e-13


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(-2, 2), st.floats(0.2, 3))
def test_energy_and_casimir_rates(seed, beta, brunt):
    rng = np.random.default_rng(seed)
    w, f = rand_scalar(rng), rand_scalar(rng)
    mean = rng.standard_normal(2) * 0.3
    u = s2.velocity_from_vorticity(w, mean)
    for dw in (s2.rhs_euler_vorticity(w, mean), s2.rhs_qg(w, beta, mean)):
        du = s2.velocity_from_vorticity(dw)
        assert abs(s2.vec_inner(du, u)) <= 1e-11 * max(1.0, s2.vec_inner(u, u))
        assert abs(s2.inner(dw, w)) <= 1e-11 * max(1.0, s2.inner(w, w))
    dw, df = s2.rhs_passive_scalar(w, f, mean)
    assert abs(s2.inner(df, f)) <= 1e-11 * max(1.0, s2.inner(f, f))
    dw, dxi, dmean = s2.rhs_boussinesq(w, f, brunt, mean, with_mean_rate=True)
    du = s2.velocity_from_vorticity(dw, dmean)
    rate = s2.vec_inner(du, u) + s2.inner(dxi, f) / brunt**2
    assert abs(rate) <= 1e-11 * max(1.0, s2.vec_inner(u, u) + s2.inner(f, f))


@settings(max_examples=20, deadline=None)
@given(seeds, st.floats(0.01, 1.0))
def test_velocity_model_energy_rates(seed, alpha2):
    rng = np.random.default_rng(seed)
    u, b = rand_solenoidal(rng, mean=(0.2, 0.1)), rand_solenoidal(rng, mean=(-0.3, 0.05))
    rho = rand_scalar(rng, zero_mean=False)
    du, db = s2.rhs_mhd(u, b)
    size = s2.vec_inner(u, u) + s2.vec_inner(b, b)
    assert abs(s2.vec_inner(du, u) + s2.vec_inner(db, b)) <= 1e-11 * size
    assert abs(s2.vec_inner(du, b) + s2.vec_inner(db, u)) <= 1e-11 * size
    du, drho = s2.rhs_charged_fluid(u, rho, 1.3)
    assert abs(s2.vec_inner(du, u)) <= 1e-11 * size
    assert abs(s2.inner(drho, rho)) <= 1e-11 * max(1.0, s2.inner(rho, rho))
    for rhs in (s2.rhs_lae_alpha, s2.rhs_epdiff):
        r = rhs(u, alpha2)
        m = s2._momentum(u, alpha2)
        assert abs(s2.vec_inner(r, m)) <= 1e-11 * max(1.0, s2.vec_inner(u, m))
