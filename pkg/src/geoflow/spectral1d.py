"""Truncated Fourier calculus on the circle and the circle model right-hand sides.

A :class:`Spectrum1D` holds ``c_0 .. c_N`` of ``u(x) = sum_{|k|<=N} c_k e^{ikx}``;
negative modes are implied by ``c_{-k} = conj(c_k)``.  Products are evaluated
on a collocation grid of at least ``3N + 1`` points, which is exact for the
quadratic nonlinearities used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from geoflow.errors import ContractError

TWO_PI = 2.0 * np.pi
DEFAULT_N = 85

PAIR_VARIANTS = ("l2", "l2-sigma", "h1", "h1-sigma", "l2-alpha-central")


@lru_cache(maxsize=None)
def collocation_size(n_modes: int) -> int:
    """Smallest power of two ``>= 3N + 1``."""
    m = 1
    while m < 3 * n_modes + 1:
        m *= 2
    return m


@lru_cache(maxsize=None)
def wavenumbers(n_modes: int) -> np.ndarray:
    k = np.arange(n_modes + 1, dtype=float)
    k.setflags(write=False)
    return k


@dataclass(frozen=True, eq=False)
class Spectrum1D:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise ContractError("coeffs must be a non-empty 1-d array")
        c[0] = c[0].real
        object.__setattr__(self, "coeffs", c)

    @property
    def n_modes(self) -> int:
        return self.coeffs.size - 1

    # construction --------------------------------------------------------
    @classmethod
    def zeros(cls, n_modes):
        return cls(np.zeros(n_modes + 1, dtype=complex))

    @classmethod
    def from_grid(cls, values, n_modes):
        values = np.asarray(values, dtype=float)
        c = np.fft.rfft(values) / values.size
        if c.size < n_modes + 1:
            c = np.concatenate([c, np.zeros(n_modes + 1 - c.size)])
        return cls(c[: n_modes + 1])

    @classmethod
    def from_function(cls, func, n_modes):
        m = collocation_size(n_modes)
        return cls.from_grid(func(grid_points(m)), n_modes)

    @classmethod
    def from_modes(cls, n_modes, cos=None, sin=None, const=0.0):
        """Build ``const + sum a_k cos(kx) + b_k sin(kx)`` from ``{k: a_k}`` maps."""
        c = np.zeros(n_modes + 1, dtype=complex)
        c[0] = const
        for k, a in (cos or {}).items():
            c[k] += a / 2
        for k, b in (sin or {}).items():
            c[k] += b / 2j
        return cls(c)

    # evaluation ----------------------------------------------------------
    def grid(self, m=None):
        m = collocation_size(self.n_modes) if m is None else m
        if m < 2 * self.n_modes + 1:
            raise ContractError(f"grid of {m} points cannot resolve N={self.n_modes}")
        padded = np.zeros(m // 2 + 1, dtype=complex)
        padded[: self.n_modes + 1] = self.coeffs
        return np.fft.irfft(padded * m, n=m)

    def full(self):
        """Coefficients for ``k = -N .. N``."""
        c = self.coeffs
        return np.concatenate([np.conj(c[:0:-1]), c])

    def mean(self) -> float:
        return float(self.coeffs[0].real)

    def truncate(self, n_modes):
        out = np.zeros(n_modes + 1, dtype=complex)
        m = min(n_modes, self.n_modes) + 1
        out[:m] = self.coeffs[:m]
        return Spectrum1D(out)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        return Spectrum1D(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return Spectrum1D(self.coeffs - other.coeffs)

    def __neg__(self):
        return Spectrum1D(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, Spectrum1D):
            return NotImplemented
        return Spectrum1D(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Spectrum1D(self.coeffs / scalar)


def grid_points(m):
    return TWO_PI * np.arange(m) / m


@dataclass(frozen=True)
class Metric1D:
    """Diagonal inertia operator: ``l2`` (multiplier 1) or ``h1`` (multiplier ``1 + k^2``)."""

    kind: str = "l2"

    def __post_init__(self):
        if self.kind not in ("l2", "h1"):
            raise ContractError(f"unknown circle metric {self.kind!r}")

    def multiplier(self, n_modes):
        k = wavenumbers(n_modes)
        return np.ones_like(k) if self.kind == "l2" else 1.0 + k * k


L2 = Metric1D("l2")
H1 = Metric1D("h1")


def _weights(n_modes):
    w = np.full(n_modes + 1, 2.0)
    w[0] = 1.0
    return w


def inner(s: Spectrum1D, t: Spectrum1D, metric: Metric1D = L2) -> float:
    """``int_0^{2pi} s A t dx`` by Parseval."""
    n = min(s.n_modes, t.n_modes)
    lam = metric.multiplier(n)
    prod = (s.coeffs[: n + 1] * np.conj(t.coeffs[: n + 1])).real
    return float(TWO_PI * np.sum(_weights(n) * lam * prod))


def deriv(s: Spectrum1D, order: int = 1) -> Spectrum1D:
    if order < 0:
        raise ContractError("derivative order must be non-negative")
    return Spectrum1D(s.coeffs * (1j * wavenumbers(s.n_modes)) ** order)


def multiply(s: Spectrum1D, t: Spectrum1D) -> Spectrum1D:
    """De-aliased product truncated to ``s.n_modes``."""
    n = s.n_modes
    if t.n_modes != n:
        t = t.truncate(n)
    m = collocation_size(n)
    return Spectrum1D.from_grid(s.grid(m) * t.grid(m), n)


def inertia_invert(m: Spectrum1D, metric: Metric1D = H1) -> Spectrum1D:
    return Spectrum1D(m.coeffs / metric.multiplier(m.n_modes))


def inertia_apply(u: Spectrum1D, metric: Metric1D = H1) -> Spectrum1D:
    return Spectrum1D(u.coeffs * metric.multiplier(u.n_modes))


def ad_transpose(x: Spectrum1D, y: Spectrum1D, metric: Metric1D = L2) -> Spectrum1D:
    """``ad(x)^T y`` for the bracket ``[X, Y] = X'Y - XY'``.

    L2: ``2X'Y + XY'``.  H1: ``(1 - d^2)^{-1} (2YX' + Y'X - 2Y''X' - Y'''X)``.
    """
    dx = deriv(x, 1)
    if metric.kind == "l2":
        return 2.0 * multiply(dx, y) + multiply(x, deriv(y, 1))
    my = inertia_apply(y, H1)
    return inertia_invert(2.0 * multiply(dx, my) + multiply(x, deriv(my, 1)), H1)


# ---------------------------------------------------------------------------
# model right-hand sides


def rhs_burgers(u: Spectrum1D) -> Spectrum1D:
    return -3.0 * multiply(u, deriv(u, 1))


def rhs_kdv(u: Spectrum1D, a: float = 0.0) -> Spectrum1D:
    return rhs_burgers(u) - 2.0 * a * deriv(u, 3)


def ch_momentum_rate(u: Spectrum1D, a: float = 0.0) -> Spectrum1D:
    """``dm/dt = -u m' - 2 u' m - 2a u'''`` with ``m = u - u''``."""
    m = inertia_apply(u, H1)
    dm = -1.0 * multiply(u, deriv(m, 1)) - 2.0 * multiply(deriv(u, 1), m)
    if a:
        dm = dm - 2.0 * a * deriv(u, 3)
    return dm


def rhs_camassa_holm(u: Spectrum1D, a: float = 0.0) -> Spectrum1D:
    """Velocity rate of the (extended, when ``a != 0``) Camassa-Holm equation."""
    return inertia_invert(ch_momentum_rate(u, a), H1)


def hunter_saxton_velocity(v: Spectrum1D) -> Spectrum1D:
    """Zero-mean ``u`` with ``u'' = v``."""
    k = wavenumbers(v.n_modes)
    c = np.zeros_like(v.coeffs)
    c[1:] = -v.coeffs[1:] / (k[1:] ** 2)
    return Spectrum1D(c)


def rhs_hunter_saxton(v: Spectrum1D) -> Spectrum1D:
    """Rate of ``v = u''`` for ``v_t = -2u'u'' - u u'''``."""
    scale = max(1.0, float(np.abs(v.coeffs).max()))
    if abs(v.coeffs[0]) > 1e-10 * scale:
        raise ContractError("Hunter-Saxton state u'' must have zero mean")
    u = hunter_saxton_velocity(v)
    return -2.0 * multiply(deriv(u, 1), v) - multiply(u, deriv(v, 1))


def rhs_two_component(u: Spectrum1D, f: Spectrum1D, variant: str, a: float = 0.0):
    """Rates ``(du, df)`` of the two-component circle systems.

    ``l2``/``l2-sigma``/``l2-alpha-central`` use the L2 metric on both factors,
    ``h1``/``h1-sigma`` the H1 metric (rates are returned after inverting
    ``1 - d^2``).  ``a`` only enters ``l2-alpha-central``.
    """
    if variant not in PAIR_VARIANTS:
        raise ContractError(f"unknown two-component variant {variant!r}")
    du1, df1 = deriv(u, 1), deriv(f, 1)
    uu = multiply(u, du1)
    ff = multiply(f, df1)
    transport = -1.0 * (multiply(u, df1) + multiply(du1, f))  # -(uf)'

    if variant == "l2":
        return -3.0 * uu - ff, transport
    if variant == "l2-sigma":
        du = -3.0 * uu + multiply(u, df1) + 2.0 * multiply(du1, f) - ff
        return du, transport
    if variant == "l2-alpha-central":
        du = -3.0 * uu - ff + a * deriv(f, 2)
        df = transport - a * deriv(u, 2)
        return du, df

    du2, du3 = deriv(u, 2), deriv(u, 3)
    df2, df3 = deriv(f, 2), deriv(f, 3)
    mu = -3.0 * uu + 2.0 * multiply(du1, du2) + multiply(u, du3)
    mu = mu - ff + multiply(df1, df2)
    mf = transport + multiply(u, df3) + multiply(du1, df2)
    if variant == "h1-sigma":
        mu = mu - 2.0 * multiply(du1, f) - multiply(u, df1)
        mu = mu + 2.0 * multiply(du1, df2) + multiply(u, df3)
    return inertia_invert(mu, H1), inertia_invert(mf, H1)
