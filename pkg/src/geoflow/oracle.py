"""Brute-force references for the hand-coded operators.

Nothing here reuses the FFT product or the closed-form maps of the solver
modules: circle identities use exact coefficient convolution, extension
equations use full structure constants of the extended algebra, and torus
right-hand sides use second-order centered differences on a fine grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geoflow import algebra as alg_mod
from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.errors import ContractError

TWO_PI = 2.0 * np.pi

# ---------------------------------------------------------------------------
# exact circle calculus on full coefficient arrays (index j <-> mode j - N)


def _full(s: s1.Spectrum1D, n):
    c = np.zeros(2 * n + 1, dtype=complex)
    m = min(n, s.n_modes)
    c[n - m : n + m + 1] = s.truncate(m).full()
    return c


def _modes(n):
    return np.arange(-n, n + 1, dtype=float)


def _d(c, order=1):
    n = (c.size - 1) // 2
    return c * (1j * _modes(n)) ** order


def _prod(a, b):
    """Exact product, cropped back to the input band (callers keep bands small)."""
    n = (a.size - 1) // 2
    full = np.convolve(a, b)
    return full[n : n + 2 * n + 1]


def _pair(a, b, weights):
    return float((TWO_PI * np.sum(weights * a * np.conj(b))).real)


def _metric_weights(kind, n):
    k = _modes(n)
    if kind == "l2":
        return np.ones_like(k)
    if kind == "h1":
        return 1.0 + k * k
    if kind == "h1dot":
        return k * k
    raise ContractError(f"unknown metric {kind!r}")


def _bracket(x, y):
    """``[X, Y] = X'Y - XY'``."""
    return _prod(_d(x), y) - _prod(x, _d(y))


@dataclass(frozen=True)
class BandLimitedTriple:
    x: s1.Spectrum1D
    y: s1.Spectrum1D
    z: s1.Spectrum1D

    def __post_init__(self):
        for f in (self.x, self.y, self.z):
            n = f.n_modes
            band = n // 3
            if np.abs(f.coeffs[band + 1 :]).max(initial=0.0) > 1e-14 * max(1.0, np.abs(f.coeffs).max()):
                raise ContractError(f"field exceeds the band |k| <= N/3 = {band}")


def random_band_limited(rng, n_modes, band=None, decay=1.0):
    """Unit-L2-norm random field with modes ``1 .. band`` (default ``N // 3``)."""
    band = n_modes // 3 if band is None else band
    c = np.zeros(n_modes + 1, dtype=complex)
    k = np.arange(1, band + 1)
    c[1 : band + 1] = (rng.standard_normal(band) + 1j * rng.standard_normal(band)) / k**decay
    c[0] = rng.standard_normal()
    s = s1.Spectrum1D(c)
    return s / np.sqrt(s1.inner(s, s))


def random_triple(rng, n_modes=24):
    return BandLimitedTriple(*(random_band_limited(rng, n_modes) for _ in range(3)))


def adjoint_residual(adT_impl, metric, triple: BandLimitedTriple) -> float:
    """``|<adT(X)Y, Z> - <Y, [X, Z]>|`` with exact Parseval pairings.

    ``adT_impl(x, y)`` returns a :class:`Spectrum1D`; ``metric`` is ``"l2"``,
    ``"h1"`` or a :class:`Metric1D`.
    """
    kind = getattr(metric, "kind", metric)
    n = triple.x.n_modes
    w = _metric_weights(kind, n)
    lhs = _pair(_full(adT_impl(triple.x, triple.y), n), _full(triple.z, n), w)
    xz = _bracket(_full(triple.x, n), _full(triple.z, n))
    rhs = _pair(_full(triple.y, n), xz, w)
    return abs(lhs - rhs)


def wrong_ad_transpose_l2(x, y):
    """Negative control: ``2X'Y - XY'`` (sign flipped on the second term)."""
    return 2.0 * s1.multiply(s1.deriv(x), y) - s1.multiply(x, s1.deriv(y))


def wrong_ad_transpose_h1(x, y):
    """Negative control: the H1 formula with ``2X'm`` replaced by ``X'm``."""
    m = s1.inertia_apply(y, s1.H1)
    return s1.inertia_invert(s1.multiply(s1.deriv(x), m) + s1.multiply(x, s1.deriv(m)), s1.H1)


# ---------------------------------------------------------------------------
# weak form of the circle models


def _circle_setup(model_id):
    """``(metric kind, bracket on (u, f, a) triples)`` of the circle models.

    Elements are ``(X, g, c)`` with ``X`` the vector field, ``g`` the module
    component (or ``None``) and ``c`` the central component.
    """
    def sigma(x, y):
        return _prod(_d(x), y) - _prod(x, _d(y))

    def act(x, f):  # action of vector fields on functions: -X f'
        return -_prod(x, _d(f))

    def gf(x, y):  # Gelfand-Fuchs cocycle, scaled to the KdV normalisation
        return 2.0 * _pair(_d(x), _d(y, 2), 1.0)

    if model_id in ("burgers",):
        return "l2", None
    if model_id == "kdv":
        return "l2", ("central", gf)
    if model_id == "camassa-holm":
        return "h1", ("central", gf)
    if model_id == "hunter-saxton":
        return "h1dot", None
    variants = {
        "pair-l2": ("l2", None),
        "pair-h1": ("h1", None),
        "pair-l2-sigma": ("l2", lambda x, y: -sigma(x, y)),
        "pair-h1-sigma": ("h1", sigma),
        "pair-l2-alpha-central": ("l2", "alpha"),
    }
    if model_id not in variants:
        raise ContractError(f"no weak-form oracle for {model_id!r}")
    kind, cocycle = variants[model_id]
    return kind, ("module", act, cocycle)


def weak_form_residual(model_id, state, params=None, n_tests=6, rng=None) -> float:
    """``max_z |<F(w), z> + <w, [w, z]>|`` over random band-limited directions.

    ``F`` is the catalog right-hand side; ``w`` must be band-limited to ``N/3``.
    The pairing uses the extended metric, so cocycle terms enter through the
    central or module components of the bracket.
    """
    from geoflow.models import ModelSpec

    params = dict(params or {})
    spec = ModelSpec(model_id, params)
    rng = np.random.default_rng(0) if rng is None else rng
    kind, ext = _circle_setup(model_id)
    n = state[0].n_modes
    w = _metric_weights(kind, n)
    rate = spec.rhs(state)
    a = spec.params.get("a", 0.0)

    if model_id == "hunter-saxton":
        u = _full(s1.hunter_saxton_velocity(state[0]), n)
        du = _full(s1.hunter_saxton_velocity(rate[0]), n)
        worst = 0.0
        for _ in range(n_tests):
            z = _full(random_band_limited(rng, n), n)
            lhs = _pair(du, z, w)
            rhs = -_pair(u, _bracket(u, z), w)
            worst = max(worst, abs(lhs - rhs))
        return worst

    u = _full(state[0], n)
    du = _full(rate[0], n)
    f = _full(state[1], n) if len(state) > 1 else None
    df = _full(rate[1], n) if len(state) > 1 else None
    worst = 0.0
    for _ in range(n_tests):
        z = _full(random_band_limited(rng, n), n)
        g = _full(random_band_limited(rng, n), n) if f is not None else None
        lhs = _pair(du, z, w) + (_pair(df, g, w) if f is not None else 0.0)
        br_x = _bracket(u, z)
        rhs = -_pair(u, br_x, w)
        if ext is not None and ext[0] == "central":
            rhs -= a * ext[1](u, z)
        elif ext is not None:
            _, act, cocycle = ext
            br_f = act(u, g) - act(z, f)
            if callable(cocycle):
                br_f = br_f + cocycle(u, z)
            rhs -= _pair(f, br_f, w)
            if cocycle == "alpha":
                central = _pair(_d(u, 2), g, 1.0) - _pair(_d(z, 2), f, 1.0)
                rhs -= a * central
        worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# finite-dimensional extensions


def _bruteforce_rhs(alg_hat: alg_mod.FiniteLieAlgebra):
    c = alg_hat.structure_constants
    gram = alg_hat.gram

    def rhs(w):
        w = np.asarray(w, dtype=float)
        ad = np.einsum("i,ijk->kj", w, c)  # matrix of [w, .]
        return -np.linalg.solve(gram, ad.T @ (gram @ w))

    return rhs


def extension_algebra(ext: alg_mod.ExtensionData) -> alg_mod.FiniteLieAlgebra:
    """The extended algebra ``g + V`` with bracket
    ``[(X1,v1),(X2,v2)] = ([X1,X2], b(X1)v2 - b(X2)v1 + omega(X1,X2) + [v1,v2]_h)``.

    Construction re-checks the Jacobi identity, so invalid data is rejected.
    """
    n, dv = ext.base.dim, ext.dim_V
    d = n + dv
    c = np.zeros((d, d, d))
    c[:n, :n, :n] = ext.base.structure_constants
    c[:n, :n, n:] = ext.cocycle_omega
    for i in range(n):
        c[i, n:, n:] = ext.action_b[i].T
        c[n:, i, n:] = -ext.action_b[i].T
    if ext.h_bracket is not None:
        c[n:, n:, n:] = ext.h_bracket
    gram = np.zeros((d, d))
    gram[:n, :n] = ext.base.gram
    gram[n:, n:] = ext.gram_V
    return alg_mod.FiniteLieAlgebra(c, gram, name="extension")


def central_extension_algebra(alg: alg_mod.FiniteLieAlgebra, omega2) -> alg_mod.FiniteLieAlgebra:
    """``g + R`` with ``[X, Y] = ([X, Y], omega(X, Y))`` and unit metric on ``R``."""
    n = alg.dim
    c = np.zeros((n + 1,) * 3)
    c[:n, :n, :n] = alg.structure_constants
    c[:n, :n, n] = omega2
    gram = np.zeros((n + 1, n + 1))
    gram[:n, :n] = alg.gram
    gram[n, n] = 1.0
    return alg_mod.FiniteLieAlgebra(c, gram, name="central")


def sd_central_algebra(ext: alg_mod.ExtensionData, alpha_map) -> alg_mod.FiniteLieAlgebra:
    """Central extension of ``g x| V`` by ``((X1,v1),(X2,v2)) -> <alpha X1, v2> - <alpha X2, v1>``."""
    n, dv = ext.base.dim, ext.dim_V
    semi = extension_algebra(ext)
    d = n + dv + 1
    c = np.zeros((d, d, d))
    c[:-1, :-1, :-1] = semi.structure_constants
    pairing = ext.gram_V @ np.asarray(alpha_map, dtype=float)  # [a, i] = <eps_a, alpha e_i>
    c[:n, n:-1, -1] = pairing.T
    c[n:-1, :n, -1] = -pairing
    gram = np.zeros((d, d))
    gram[:-1, :-1] = semi.gram
    gram[-1, -1] = 1.0
    return alg_mod.FiniteLieAlgebra(c, gram, name="sd-central")


def extension_bruteforce(alg_hat: alg_mod.FiniteLieAlgebra):
    """``w -> -G^-1 ad(w)^T G w`` on the full extended algebra."""
    return _bruteforce_rhs(alg_hat)


def _spd(rng, n, spread=0.5):
    a = rng.standard_normal((n, n))
    return np.eye(n) + spread * (a @ a.T) / n


def _so3_rep_aff1():
    """aff(1) acting on R^2: ``x -> diag(1, 0)``, ``y -> E_12``."""
    return np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]])


def _coboundary(base, b, phi):
    """``omega(X1, X2) = b(X1) phi X2 - b(X2) phi X1 - phi [X1, X2]``."""
    bp = np.einsum("iab,bj->ija", b, phi)
    return bp - bp.transpose(1, 0, 2) - np.einsum("ijk,ak->ija", base.structure_constants, phi)


def _random5(rng):
    base = alg_mod.direct_sum(alg_mod.so3(), alg_mod.aff1())
    p = np.eye(5) + 0.3 * rng.standard_normal((5, 5))
    return alg_mod.change_basis(alg_mod.with_gram(base, _spd(rng, 5)), p)


def extension_cases(seed=0):
    """Finite-dimensional test extensions (all so(3)-based or small, <= 8 dims).

    Returns a list of ``(kind, name, data)``; ``data`` is a dict with the
    pieces each ``euler_rhs_*`` needs.
    """
    rng = np.random.default_rng(seed)
    cases = []
    so3 = alg_mod.so3
    # central
    for name, base in [
        ("so(3)", so3(_spd(rng, 3))),
        ("so(3)+aff(1) random basis", _random5(rng)),
        ("se(3)", extension_algebra(alg_mod.ExtensionData(
            so3(), alg_mod.adjoint_action(so3()), np.zeros((3, 3, 3)), np.eye(3)))),
        ("R^4", alg_mod.abelian(4, _spd(rng, 4))),
    ]:
        if name == "se(3)":
            base = alg_mod.with_gram(base, _spd(rng, 6))
        if name == "R^4":
            s = rng.standard_normal((4, 4))
            omega2 = s - s.T
        else:
            phi = rng.standard_normal(base.dim)
            omega2 = np.einsum("ijk,k->ij", base.structure_constants, phi)
            if name == "so(3)":
                s = rng.standard_normal((3, 3))
                omega2 = s - s.T  # every skew form on so(3) is a cocycle
        cases.append(("central", name, dict(alg=base, omega2=omega2)))

    # semidirect (omega = 0)
    so3g = so3(_spd(rng, 3))
    aff = alg_mod.aff1(_spd(rng, 2))
    big = alg_mod.direct_sum(so3(), alg_mod.aff1())
    big = alg_mod.with_gram(big, _spd(rng, 5))
    b_big = np.zeros((5, 3, 3))
    b_big[:3] = alg_mod.adjoint_action(so3())
    semis = [
        ("so(3) x| R^3, invariant", so3g, alg_mod.adjoint_action(so3()), np.eye(3)),
        ("so(3) x| R^3, non-invariant", so3g, alg_mod.adjoint_action(so3()), _spd(rng, 3)),
        ("aff(1) x| R^2", aff, _so3_rep_aff1(), _spd(rng, 2)),
        ("(so(3)+aff(1)) x| R^3", big, b_big, _spd(rng, 3)),
    ]
    for name, base, b, gv in semis:
        ext = alg_mod.ExtensionData(base, b, np.zeros((base.dim, base.dim, gv.shape[0])), gv)
        cases.append(("semidirect", name, dict(alg=base, ext=ext)))

    # abelian with a cocycle
    for name, base, b, gv in semis[1:] + [("so(3) on R^3, trivial action", so3g, np.zeros((3, 3, 3)), _spd(rng, 3))]:
        phi = rng.standard_normal((gv.shape[0], base.dim))
        omega = _coboundary(base, b, phi)
        if not np.any(b):
            omega = np.einsum("ijk,ak->ija", base.structure_constants, phi)
        ext = alg_mod.ExtensionData(base, b, omega, gv)
        cases.append(("abelian", name, dict(alg=base, ext=ext)))

    # general: h non-abelian ideal, extension of g by h through a section s(X) = (phi X, X)
    for name, g_alg, h_alg in [
        ("so(3) by so(3)", so3(_spd(rng, 3)), so3()),
        ("aff(1) by so(3)", alg_mod.aff1(_spd(rng, 2)), so3()),
        ("so(3) by aff(1)", so3(_spd(rng, 3)), alg_mod.aff1()),
    ]:
        hb = h_alg.structure_constants
        phi = rng.standard_normal((h_alg.dim, g_alg.dim))
        b = np.einsum("ia,abc->icb", phi.T, hb)  # b(e_i) f = [phi e_i, f]_h
        bracket_phi = np.einsum("ai,bj,abc->ijc", phi, phi, hb)
        omega = bracket_phi - np.einsum("ijk,ck->ijc", g_alg.structure_constants, phi)
        ext = alg_mod.ExtensionData(g_alg, b, omega, _spd(rng, h_alg.dim), h_bracket=hb)
        cases.append(("general", name, dict(alg=g_alg, ext=ext)))

    # central extension of a semidirect product via a 1-cocycle alpha
    v0 = rng.standard_normal(3)
    cross = np.einsum("ijk,j->ki", so3().structure_constants, v0)  # alpha(X) = [X, v0]
    r2 = alg_mod.abelian(2, _spd(rng, 2))
    sdc = [
        ("so(3) x| R^3, alpha = [., v0]", so3(_spd(rng, 3)), alg_mod.adjoint_action(so3()), np.eye(3), cross),
        ("so(3) x| R^3, scaled V metric", so3(_spd(rng, 3)), alg_mod.adjoint_action(so3()), 2.5 * np.eye(3), cross),
        ("R^2 x R^2, trivial action", r2, np.zeros((2, 2, 2)), _spd(rng, 2), rng.standard_normal((2, 2))),
    ]
    for name, base, b, gv, alpha in sdc:
        ext = alg_mod.ExtensionData(base, b, np.zeros((base.dim, base.dim, gv.shape[0])), gv)
        cases.append(("sd_central", name, dict(alg=base, ext=ext, alpha=alpha)))
    return cases


def extension_residual(kind, data, rng) -> float:
    """Sup-norm gap between ``euler_rhs_<kind>`` and the brute-force extended RHS."""
    base = data["alg"]
    n = base.dim
    u = rng.standard_normal(n)
    if kind == "central":
        hat = central_extension_algebra(base, data["omega2"])
        a = rng.standard_normal()
        k = alg_mod.k_from_cocycle(base, data["omega2"])
        du, da = alg_mod.euler_rhs_central(base, k, u, a)
        ref = extension_bruteforce(hat)(np.concatenate([u, [a]]))
        return float(np.abs(np.concatenate([du, [da]]) - ref).max())
    ext = data["ext"]
    f = rng.standard_normal(ext.dim_V)
    if kind == "sd_central":
        hat = sd_central_algebra(ext, data["alpha"])
        a = rng.standard_normal()
        du, df, da = alg_mod.euler_rhs_sd_central(base, ext, data["alpha"], u, f, a)
        ref = extension_bruteforce(hat)(np.concatenate([u, f, [a]]))
        return float(np.abs(np.concatenate([du, df, [da]]) - ref).max())
    func = {
        "semidirect": alg_mod.euler_rhs_semidirect,
        "abelian": alg_mod.euler_rhs_abelian,
        "general": alg_mod.euler_rhs_general,
    }[kind]
    du, df = func(base, ext, u, f)
    ref = extension_bruteforce(extension_algebra(ext))(np.concatenate([u, f]))
    return float(np.abs(np.concatenate([du, df]) - ref).max())


# ---------------------------------------------------------------------------
# finite differences on the torus


class _FD:
    """Second-order centered differences on an ``n x n`` grid of ``[0, 2pi)^2``."""

    def __init__(self, n):
        self.n = n
        self.h = TWO_PI / n
        k = np.fft.fftfreq(n) * n
        kx, ky = np.meshgrid(k, k, indexing="ij")
        self.dx_sym = 1j * np.sin(kx * self.h) / self.h
        self.dy_sym = 1j * np.sin(ky * self.h) / self.h
        self.lap_sym = -(4.0 / self.h**2) * (np.sin(kx * self.h / 2) ** 2 + np.sin(ky * self.h / 2) ** 2)

    def dx(self, f):
        return (np.roll(f, -1, 0) - np.roll(f, 1, 0)) / (2 * self.h)

    def dy(self, f):
        return (np.roll(f, -1, 1) - np.roll(f, 1, 1)) / (2 * self.h)

    def lap(self, f):
        return (np.roll(f, -1, 0) + np.roll(f, 1, 0) + np.roll(f, -1, 1) + np.roll(f, 1, 1)
                - 4 * f) / self.h**2

    def _solve(self, f, symbol):
        hat = np.fft.fft2(f)
        out = np.zeros_like(hat)
        ok = np.abs(symbol) > 1e-12
        out[ok] = hat[ok] / symbol[ok]
        return np.fft.ifft2(out).real

    def poisson(self, w):
        """``psi`` with ``lap(psi) = w`` (five-point Laplacian), zero mean."""
        return self._solve(w, self.lap_sym)

    def helmholtz(self, m, alpha2):
        """``u`` with ``u - alpha2 lap(u) = m``."""
        return self._solve(m, 1.0 - alpha2 * self.lap_sym)

    def project(self, v):
        """Discrete Leray projection built from the centered-difference gradient."""
        h1, h2 = np.fft.fft2(v[0]), np.fft.fft2(v[1])
        dx, dy = self.dx_sym, self.dy_sym
        denom = dx * dx + dy * dy
        ok = np.abs(denom) > 1e-12
        phi = np.zeros_like(h1)
        phi[ok] = (dx[ok] * h1[ok] + dy[ok] * h2[ok]) / denom[ok]
        return np.stack([np.fft.ifft2(h1 - dx * phi).real, np.fft.ifft2(h2 - dy * phi).real])

    def advect(self, u, f):
        return u[0] * self.dx(f) + u[1] * self.dy(f)

    def advect_vec(self, u, v):
        return np.stack([self.advect(u, v[0]), self.advect(u, v[1])])

    def grad_t(self, v, w):
        """``(grad v)^T w``: components ``sum_j d_i v_j w_j``."""
        return np.stack([self.dx(v[0]) * w[0] + self.dx(v[1]) * w[1],
                         self.dy(v[0]) * w[0] + self.dy(v[1]) * w[1]])

    def div(self, v):
        return self.dx(v[0]) + self.dy(v[1])

    def velocity(self, w, mean):
        psi = self.poisson(w - w.mean())
        return np.stack([self.dy(psi) + mean[0], -self.dx(psi) + mean[1]]), psi


def finite_difference_rhs(model_id, grids, params=None):
    """Independent second-order evaluation of a torus model right-hand side.

    ``grids`` maps the model's field names to grid arrays (vector fields as
    ``(2, n, n)`` arrays including their mean; ``mean_u`` as a length-2 array).
    Returns the rates of the spatial fields in the same layout.
    """
    p = dict(params or {})
    first = next(v for v in grids.values() if np.ndim(v) >= 2)
    fd = _FD(np.shape(first)[-1])
    mean = np.asarray(grids.get("mean_u", (0.0, 0.0)), dtype=float)
    if model_id in ("euler-2d", "qg-beta", "boussinesq", "passive-scalar"):
        w = grids["omega"]
        u, psi = fd.velocity(w, mean)
        out = {"omega": -fd.advect(u, w)}
        if model_id == "qg-beta":
            out["omega"] -= p.get("beta", 1.0) * fd.dx(psi)
        if model_id == "boussinesq":
            n2 = p.get("brunt", 1.0) ** 2
            xi = grids["xi"]
            out["omega"] -= fd.dx(xi)
            out["xi"] = -fd.advect(u, xi) + n2 * fd.dx(psi) - n2 * mean[1]
        if model_id == "passive-scalar":
            out["f"] = -fd.advect(u, grids["f"])
        return out
    if model_id == "mhd-2d":
        u, b = grids["u"], grids["B"]
        du = fd.project(-fd.advect_vec(u, u) + fd.advect_vec(b, b))
        db = fd.advect_vec(b, u) - fd.advect_vec(u, b)
        return {"u": du, "B": db}
    if model_id == "charged-fluid":
        u, rho = grids["u"], grids["rho"]
        lorentz = p.get("b", 1.0) * rho * np.stack([-u[1], u[0]])
        return {"u": fd.project(-fd.advect_vec(u, u) - lorentz), "rho": -fd.advect(u, rho)}
    if model_id == "template-matching":
        u = grids["u"]
        rate = -fd.advect_vec(u, u) - fd.div(u) * u - fd.grad_t(u, u)
        return {"u": rate}
    if model_id in ("epdiff", "lae-alpha"):
        u = grids["u"]
        a2 = p.get("alpha2", 0.05)
        m = np.stack([u[0] - a2 * fd.lap(u[0]), u[1] - a2 * fd.lap(u[1])])
        dm = -fd.advect_vec(u, m) - fd.grad_t(u, m)
        if model_id == "epdiff":
            dm = dm - fd.div(u) * m
        else:
            dm = fd.project(dm)
        return {"u": np.stack([fd.helmholtz(dm[0], a2), fd.helmholtz(dm[1], a2)])}
    raise ContractError(f"no finite-difference oracle for {model_id!r}")


def _fine_grid(x, n):
    return s2.resample(x, n).grid()


def fd_crosscheck(spec, state, n_fine=512) -> dict:
    """Max-norm gap between the spectral RHS and the finite-difference RHS at ``n_fine``.

    The spectral rates are computed at the state's own resolution and
    zero-padded onto the fine grid.
    """
    grids = {}
    for name, x in zip(spec.fields, state):
        if isinstance(x, (s2.Field2D, s2.VecField2D)):
            grids[name] = _fine_grid(x, n_fine)
        else:
            grids[name] = np.asarray(x, dtype=float)
    ref = finite_difference_rhs(spec.id, grids, spec.params)
    rates = spec.rhs(state)
    out = {}
    for name, rate in zip(spec.fields, rates):
        if name in ref:
            out[name] = float(np.abs(_fine_grid(rate, n_fine) - ref[name]).max())
    return out
