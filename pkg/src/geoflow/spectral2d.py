"""Pseudospectral calculus on the flat torus ``[0, 2pi)^2`` and the torus model right-hand sides.

Orientation and sign conventions (used consistently by every function here):

* area form ``dx ^ dy``; stream function ``psi`` with ``laplacian(psi) = omega``;
* velocity ``u = (d_y psi, -d_x psi)`` plus a constant (harmonic) part;
* vorticity density ``omega = d_y u_1 - d_x u_2`` (see :func:`curl`), so the
  transport equation reads ``d_t omega = -{omega, psi}`` with the Jacobian
  ``{f, g} = f_x g_y - f_y g_x``.

Fields keep spectral coefficients in ``numpy.fft.rfft2`` layout, normalised so
that ``f(x, y) = sum_k hat_k e^{i k.x}``, with the 2/3-rule mask applied to every
nonlinear product.  Vector fields carry their mean separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from geoflow.errors import ContractError

TWO_PI = 2.0 * np.pi
AREA = TWO_PI**2
DEFAULT_GRID = 128
_ZERO_MEAN_TOL = 1e-10
_DIV_TOL = 1e-10


class Torus:
    """Wavenumbers, de-aliasing mask and grid for an ``nx`` by ``ny`` torus."""

    def __init__(self, nx, ny):
        if nx < 4 or ny < 4 or nx % 2 or ny % 2:
            raise ContractError(f"grid sizes must be even and >= 4, got {nx}x{ny}")
        self.nx, self.ny = nx, ny
        self.kx = (np.fft.fftfreq(nx) * nx)[:, None]
        self.ky = np.arange(ny // 2 + 1, dtype=float)[None, :]
        self.k2 = self.kx**2 + self.ky**2
        self.inv_k2 = np.zeros_like(self.k2)
        self.inv_k2[self.k2 > 0] = 1.0 / self.k2[self.k2 > 0]
        self.mask = (np.abs(self.kx) < nx / 3.0) & (self.ky < ny / 3.0)
        self.kmax = (int(np.ceil(nx / 3.0)) - 1, int(np.ceil(ny / 3.0)) - 1)
        w = np.full((1, ny // 2 + 1), 2.0)
        w[0, 0] = 1.0
        w[0, -1] = 1.0
        self.weights = np.broadcast_to(w, self.k2.shape)
        self.h = (TWO_PI / nx, TWO_PI / ny)

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def spectral_shape(self):
        return (self.nx, self.ny // 2 + 1)

    def points(self):
        x = TWO_PI * np.arange(self.nx) / self.nx
        y = TWO_PI * np.arange(self.ny) / self.ny
        return np.meshgrid(x, y, indexing="ij")

    def to_grid(self, hat):
        return np.fft.irfft2(hat * (self.nx * self.ny), s=self.shape, axes=(-2, -1))

    def from_grid(self, values):
        return np.fft.rfft2(values, axes=(-2, -1)) * (self.mask / (self.nx * self.ny))


@lru_cache(maxsize=None)
def torus(nx, ny=None) -> Torus:
    return Torus(nx, nx if ny is None else ny)


def _torus_of(hat) -> Torus:
    nx, nyh = hat.shape[-2:]
    return torus(nx, 2 * (nyh - 1))


@dataclass(frozen=True, eq=False)
class Field2D:
    hat: np.ndarray

    def __post_init__(self):
        hat = np.asarray(self.hat, dtype=complex)
        if hat.ndim != 2:
            raise ContractError("Field2D expects a 2-d spectral array")
        object.__setattr__(self, "hat", hat)

    @property
    def torus(self) -> Torus:
        return _torus_of(self.hat)

    @classmethod
    def zeros(cls, nx, ny=None):
        return cls(np.zeros(torus(nx, ny).spectral_shape, dtype=complex))

    @classmethod
    def from_grid(cls, values):
        values = np.asarray(values, dtype=float)
        return cls(torus(*values.shape).from_grid(values))

    @classmethod
    def from_function(cls, func, nx, ny=None):
        t = torus(nx, ny)
        return cls(t.from_grid(func(*t.points())))

    def grid(self):
        return self.torus.to_grid(self.hat)

    def mean(self) -> float:
        return float(self.hat[0, 0].real)

    def integral(self) -> float:
        return AREA * self.mean()

    def __add__(self, other):
        return Field2D(self.hat + other.hat)

    def __sub__(self, other):
        return Field2D(self.hat - other.hat)

    def __neg__(self):
        return Field2D(-self.hat)

    def __mul__(self, scalar):
        if isinstance(scalar, Field2D):
            return NotImplemented
        return Field2D(self.hat * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class VecField2D:
    """Two-component field: zero-mean spectral part ``hat[0], hat[1]`` plus ``mean``."""

    hat: np.ndarray
    mean: np.ndarray = None

    def __post_init__(self):
        hat = np.array(self.hat, dtype=complex)
        if hat.ndim != 3 or hat.shape[0] != 2:
            raise ContractError("VecField2D expects spectral shape (2, nx, ny//2+1)")
        mean = np.zeros(2) if self.mean is None else np.array(self.mean, dtype=float).reshape(2)
        mean = mean + hat[:, 0, 0].real
        hat[:, 0, 0] = 0.0
        object.__setattr__(self, "hat", hat)
        object.__setattr__(self, "mean", mean)

    @property
    def torus(self) -> Torus:
        return _torus_of(self.hat)

    @classmethod
    def zeros(cls, nx, ny=None):
        return cls(np.zeros((2,) + torus(nx, ny).spectral_shape, dtype=complex))

    @classmethod
    def from_grid(cls, u1, u2):
        u = np.stack([np.asarray(u1, dtype=float), np.asarray(u2, dtype=float)])
        return cls(torus(*u.shape[1:]).from_grid(u))

    @classmethod
    def from_function(cls, func, nx, ny=None):
        t = torus(nx, ny)
        u1, u2 = func(*t.points())
        return cls(t.from_grid(np.stack([u1, u2])))

    @classmethod
    def from_components(cls, f1: Field2D, f2: Field2D, mean=None):
        return cls(np.stack([f1.hat, f2.hat]), mean)

    def component(self, i) -> Field2D:
        hat = self.hat[i].copy()
        hat[0, 0] = self.mean[i]
        return Field2D(hat)

    def grid(self):
        return self.torus.to_grid(self.hat) + self.mean[:, None, None]

    def __add__(self, other):
        return VecField2D(self.hat + other.hat, self.mean + other.mean)

    def __sub__(self, other):
        return VecField2D(self.hat - other.hat, self.mean - other.mean)

    def __neg__(self):
        return VecField2D(-self.hat, -self.mean)

    def __mul__(self, scalar):
        if isinstance(scalar, VecField2D):
            return NotImplemented
        return VecField2D(self.hat * scalar, self.mean * scalar)

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# linear operators


def dx(f: Field2D) -> Field2D:
    return Field2D(1j * f.torus.kx * f.hat)


def dy(f: Field2D) -> Field2D:
    return Field2D(1j * f.torus.ky * f.hat)


def laplacian(f: Field2D) -> Field2D:
    return Field2D(-f.torus.k2 * f.hat)


def divergence(v: VecField2D) -> Field2D:
    t = v.torus
    return Field2D(1j * (t.kx * v.hat[0] + t.ky * v.hat[1]))


def curl(v: VecField2D) -> Field2D:
    """Vorticity density ``d_y u_1 - d_x u_2`` (equal to ``laplacian(psi)``)."""
    t = v.torus
    return Field2D(1j * (t.ky * v.hat[0] - t.kx * v.hat[1]))


def grad(f: Field2D) -> VecField2D:
    t = f.torus
    return VecField2D(np.stack([1j * t.kx * f.hat, 1j * t.ky * f.hat]))


def max_divergence(v: VecField2D) -> float:
    """Largest spectral divergence ``|k . u_k|`` over retained modes."""
    t = v.torus
    return float(np.abs(t.kx * v.hat[0] + t.ky * v.hat[1]).max())


def leray_project(v: VecField2D) -> VecField2D:
    """L2-orthogonal projection onto divergence-free fields; the mean passes through."""
    t = v.torus
    kdotu = (t.kx * v.hat[0] + t.ky * v.hat[1]) * t.inv_k2
    hat = np.stack([v.hat[0] - t.kx * kdotu, v.hat[1] - t.ky * kdotu])
    return VecField2D(hat, v.mean)


def _require_zero_mean(f: Field2D, what):
    scale = max(1.0, float(np.abs(f.hat).max()))
    if abs(f.hat[0, 0]) > _ZERO_MEAN_TOL * scale:
        raise ContractError(f"{what} must have zero mean (mean = {f.mean():.3e})")


def _require_solenoidal(v: VecField2D, what):
    scale = max(1.0, float(np.abs(v.hat).max()) * v.torus.nx)
    if max_divergence(v) > _DIV_TOL * scale:
        raise ContractError(f"{what} must be divergence-free")


def stream_solve(omega: Field2D):
    """Stream function and zero-mean velocity of a zero-mean vorticity."""
    _require_zero_mean(omega, "vorticity")
    t = omega.torus
    psi = -omega.hat * t.inv_k2
    u = VecField2D(np.stack([1j * t.ky * psi, -1j * t.kx * psi]))
    return Field2D(psi), u


def velocity_from_vorticity(omega: Field2D, mean_u=(0.0, 0.0)) -> VecField2D:
    _, u = stream_solve(omega)
    return VecField2D(u.hat, mean_u)


def _grids(t: Torus, *hats):
    return t.to_grid(np.stack(hats))


def jacobian(f: Field2D, g: Field2D) -> Field2D:
    """De-aliased ``f_x g_y - f_y g_x``."""
    t = f.torus
    fx, fy, gx, gy = _grids(t, 1j * t.kx * f.hat, 1j * t.ky * f.hat,
                            1j * t.kx * g.hat, 1j * t.ky * g.hat)
    return Field2D(t.from_grid(fx * gy - fy * gx))


def inner(f: Field2D, g: Field2D) -> float:
    """``int f g`` over the torus by Parseval."""
    t = f.torus
    return float(AREA * np.sum(t.weights * (f.hat * np.conj(g.hat)).real))


def vec_inner(u: VecField2D, v: VecField2D) -> float:
    t = u.torus
    s = np.sum(t.weights * (u.hat * np.conj(v.hat)).real)
    return float(AREA * (s + u.mean @ v.mean))


def moment(f: Field2D, p: int) -> float:
    """``int f^p`` evaluated exactly on a grid fine enough for degree ``p`` products."""
    t = f.torus
    kx, ky = t.kmax
    nx = max(t.nx, 2 * ((p * kx) // 2 + 1))
    ny = max(t.ny, 2 * ((p * ky) // 2 + 1))
    values = resample(f, nx, ny).grid()
    return float(AREA * np.mean(values**p))


def resample(f, nx, ny=None):
    """Zero-pad (or truncate) a field onto another grid; exact for band-limited fields."""
    ny = nx if ny is None else ny
    target = torus(nx, ny)
    src = f.hat
    lead = src.shape[:-2]
    out = np.zeros(lead + target.spectral_shape, dtype=complex)
    kx = min(src.shape[-2], nx) // 2
    kyn = min(src.shape[-1], target.spectral_shape[1])
    out[..., :kx, :kyn] = src[..., :kx, :kyn]
    out[..., -kx + 1 :, :kyn] = src[..., -kx + 1 :, :kyn]
    if isinstance(f, VecField2D):
        return VecField2D(out, f.mean)
    return Field2D(out)


# ---------------------------------------------------------------------------
# vorticity-form models


def _vorticity_pass(omega: Field2D, mean_u, extra=()):
    """Grids shared by the stream-function models.

    Returns ``(psi_hat, jac(omega, psi) grid, lamb mean, [jac(s, psi) grid for s in extra])``.
    """
    _require_zero_mean(omega, "vorticity")
    t = omega.torus
    psi = -omega.hat * t.inv_k2
    ikx, iky = 1j * t.kx, 1j * t.ky
    hats = [iky * psi, -ikx * psi, ikx * omega.hat, iky * omega.hat, omega.hat]
    for s in extra:
        hats += [ikx * s.hat, iky * s.hat]
    g = _grids(t, *hats)
    u1, u2, wx, wy, w = g[:5]
    psix, psiy = -u2, u1
    jac = wx * psiy - wy * psix
    # harmonic part of -(u.grad)u: minus the mean of the Lamb vector
    lamb = np.array([np.mean(w * u2), -np.mean(w * u1)])
    jacs = []
    for i in range(len(extra)):
        sx, sy = g[5 + 2 * i], g[6 + 2 * i]
        jacs.append(sx * psiy - sy * psix)
    return psi, jac, -lamb, jacs


def _mean_advection(t: Torus, hat, mean_u):
    return -1j * (t.kx * mean_u[0] + t.ky * mean_u[1]) * hat


def rhs_euler_vorticity(omega: Field2D, mean_u=(0.0, 0.0), with_mean_rate=False):
    """``d_t omega = -{omega, psi} - U.grad(omega)``.

    With ``with_mean_rate`` also returns the rate of the harmonic velocity ``U``.
    """
    t = omega.torus
    mean_u = np.asarray(mean_u, dtype=float)
    _, jac, dmean, _ = _vorticity_pass(omega, mean_u)
    rate = Field2D(-t.from_grid(jac) + _mean_advection(t, omega.hat, mean_u))
    return (rate, dmean) if with_mean_rate else rate


def rhs_qg(omega: Field2D, beta: float, mean_u=(0.0, 0.0), with_mean_rate=False):
    """Beta-plane quasigeostrophic vorticity rate ``-{omega, psi} - beta psi_x``."""
    t = omega.torus
    mean_u = np.asarray(mean_u, dtype=float)
    psi, jac, dmean, _ = _vorticity_pass(omega, mean_u)
    hat = -t.from_grid(jac) + _mean_advection(t, omega.hat, mean_u) - beta * 1j * t.kx * psi
    # the Coriolis term contributes -mean(psi) * alpha#, and psi has zero mean
    rate = Field2D(hat)
    return (rate, dmean) if with_mean_rate else rate


def rhs_boussinesq(omega: Field2D, xi: Field2D, n_bv: float, mean_u=(0.0, 0.0),
                   with_mean_rate=False):
    """Stratified Boussinesq pair ``(d_t omega, d_t xi)``.

    ``d_t omega = -{omega, psi} - xi_x`` and ``d_t xi = -{xi, psi} + N^2 psi_x``,
    plus transport by the harmonic velocity ``U``.  The buoyancy force
    ``(0, xi)`` feeds ``U`` through the mean of ``xi``, balanced by ``-N^2 U_2``
    in the buoyancy equation so that the energy stays conserved.
    """
    t = omega.torus
    mean_u = np.asarray(mean_u, dtype=float)
    psi, jac, dmean, (jxi,) = _vorticity_pass(omega, mean_u, extra=(xi,))
    ikx = 1j * t.kx
    dw = -t.from_grid(jac) + _mean_advection(t, omega.hat, mean_u) - ikx * xi.hat
    dxi = -t.from_grid(jxi) + _mean_advection(t, xi.hat, mean_u) + n_bv**2 * ikx * psi
    dxi[0, 0] -= n_bv**2 * mean_u[1]
    dmean = dmean + np.array([0.0, xi.mean()])
    if with_mean_rate:
        return Field2D(dw), Field2D(dxi), dmean
    return Field2D(dw), Field2D(dxi)


def rhs_passive_scalar(omega: Field2D, f: Field2D, mean_u=(0.0, 0.0), with_mean_rate=False):
    """Ideal flow carrying a passive scalar: ``(d_t omega, -{f, psi} - U.grad f)``."""
    t = omega.torus
    mean_u = np.asarray(mean_u, dtype=float)
    _, jac, dmean, (jf,) = _vorticity_pass(omega, mean_u, extra=(f,))
    dw = Field2D(-t.from_grid(jac) + _mean_advection(t, omega.hat, mean_u))
    df = Field2D(-t.from_grid(jf) + _mean_advection(t, f.hat, mean_u))
    return (dw, df, dmean) if with_mean_rate else (dw, df)


# ---------------------------------------------------------------------------
# velocity-form models


def _vec_with_gradient(v: VecField2D):
    """Grids of ``v`` and ``grad v``: returns ``(v[2], dv[i, j] = d_j v_i)``."""
    t = v.torus
    ikx, iky = 1j * t.kx, 1j * t.ky
    g = _grids(t, v.hat[0], v.hat[1], ikx * v.hat[0], iky * v.hat[0],
               ikx * v.hat[1], iky * v.hat[1])
    vals = g[:2] + v.mean[:, None, None]
    return vals, g[2:].reshape(2, 2, *t.shape)


def _advect(u, dv):
    """``(u . grad) v`` from grids of ``u`` and ``dv[i, j] = d_j v_i``."""
    return np.stack([u[0] * dv[i, 0] + u[1] * dv[i, 1] for i in range(2)])


def _transpose_grad(dv, w):
    """``(grad v)^T w`` with components ``sum_j d_i v_j w_j``."""
    return np.stack([dv[0, i] * w[0] + dv[1, i] * w[1] for i in range(2)])


def _vec_from_grid(t: Torus, values) -> VecField2D:
    return VecField2D(t.from_grid(values))


def rhs_mhd(u: VecField2D, b: VecField2D):
    """Ideal MHD in the plane: ``(P(-(u.grad)u + (B.grad)B), (B.grad)u - (u.grad)B)``."""
    _require_solenoidal(u, "velocity")
    _require_solenoidal(b, "magnetic field")
    t = u.torus
    uv, du = _vec_with_gradient(u)
    bv, db = _vec_with_gradient(b)
    force = -_advect(uv, du) + _advect(bv, db)
    induction = _advect(bv, du) - _advect(uv, db)
    return leray_project(_vec_from_grid(t, force)), _vec_from_grid(t, induction)


def lorentz_term(u: VecField2D, rho: Field2D, charge: float) -> VecField2D:
    """``rho u x B`` for the area-proportional field ``b dx^dy``: ``b rho (-u_2, u_1)``."""
    t = u.torus
    uv = u.grid()
    r = rho.grid()
    return _vec_from_grid(t, charge * r * np.stack([-uv[1], uv[0]]))


def rhs_charged_fluid(u: VecField2D, rho: Field2D, charge: float):
    """Charged ideal fluid: ``(P(-(u.grad)u - b rho u^perp), -(u.grad)rho)``."""
    _require_solenoidal(u, "velocity")
    t = u.torus
    ikx, iky = 1j * t.kx, 1j * t.ky
    uv, du = _vec_with_gradient(u)
    r, rx, ry = _grids(t, rho.hat, ikx * rho.hat, iky * rho.hat)
    force = -_advect(uv, du) - charge * r * np.stack([-uv[1], uv[0]])
    drho = Field2D(t.from_grid(-(uv[0] * rx + uv[1] * ry)))
    return leray_project(_vec_from_grid(t, force)), drho


def rhs_template_matching(u: VecField2D) -> VecField2D:
    """``-(u.grad)u - (div u) u - grad(|u|^2)/2`` (compressible, no projection)."""
    t = u.torus
    uv, du = _vec_with_gradient(u)
    div = du[0, 0] + du[1, 1]
    rate = -_advect(uv, du) - div * uv - _transpose_grad(du, uv)
    return _vec_from_grid(t, rate)


def momentum_multiplier(t: Torus, alpha2: float):
    return 1.0 + alpha2 * t.k2


def _check_alpha2(alpha2):
    if not alpha2 > 0:
        raise ContractError(f"alpha^2 must be positive, got {alpha2}")


def _momentum(u: VecField2D, alpha2):
    t = u.torus
    return VecField2D(u.hat * momentum_multiplier(t, alpha2), u.mean)


def _invert_momentum(dm: VecField2D, alpha2):
    return VecField2D(dm.hat / momentum_multiplier(dm.torus, alpha2), dm.mean)


def rhs_epdiff(u: VecField2D, alpha2: float) -> VecField2D:
    """EPDiff velocity rate from ``d_t m = -(u.grad)m - (grad u)^T m - (div u) m``."""
    _check_alpha2(alpha2)
    t = u.torus
    uv, du = _vec_with_gradient(u)
    mv, dm = _vec_with_gradient(_momentum(u, alpha2))
    div = du[0, 0] + du[1, 1]
    rate = -_advect(uv, dm) - _transpose_grad(du, mv) - div * mv
    return _invert_momentum(_vec_from_grid(t, rate), alpha2)


def rhs_lae_alpha(u: VecField2D, alpha2: float) -> VecField2D:
    """LAE-alpha velocity rate from ``d_t m = P(-(u.grad)m - (grad u)^T m)``."""
    _check_alpha2(alpha2)
    _require_solenoidal(u, "velocity")
    t = u.torus
    uv, du = _vec_with_gradient(u)
    mv, dm = _vec_with_gradient(_momentum(u, alpha2))
    rate = -_advect(uv, dm) - _transpose_grad(du, mv)
    return _invert_momentum(leray_project(_vec_from_grid(t, rate)), alpha2)
