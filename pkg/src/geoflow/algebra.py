"""Euler-Arnold machinery on finite-dimensional Lie algebras.

Everything here works on real coefficient vectors in a fixed basis, so each
operator is an explicit matrix and can be checked exactly.  Conventions:

* ``structure_constants[i, j, k]`` is the ``e_k`` coefficient of ``[e_i, e_j]``.
* ``gram[i, j] = <e_i, e_j>``.
* The geodesic equation of the right-invariant metric is ``du/dt = -ad(u)^T u``
  where ``<ad(x)^T y, z> = <y, [x, z]>``.
* The coadjoint action is fixed by ``(ad*(x) m, y) = (m, -[x, y])``.

Extension maps ``h``, ``l``, ``b^T``, ``k`` and ``alpha^T`` are never written in
closed form; they are recovered from their defining inner-product relations by
dense solves against the Gram matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from geoflow.errors import ContractError

CONSTRUCTION_TOL = 1e-10


def _as_square_spd(mat, name):
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ContractError(f"{name} must be a square matrix, got shape {mat.shape}")
    if not np.allclose(mat, mat.T, atol=1e-13 * max(1.0, np.abs(mat).max())):
        raise ContractError(f"{name} is not symmetric")
    if np.linalg.eigvalsh(mat).min() <= 0:
        raise ContractError(f"{name} is not positive definite")
    return mat


def _check_vector(x, dim, what="vector"):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise ContractError(f"{what} has shape {x.shape}, expected ({dim},)")
    return x


def jacobi_residual(c):
    """Max entry of the cyclic sum ``[[e_i,e_j],e_k] + cyc``."""
    c = np.asarray(c, dtype=float)
    t = np.einsum("ijl,lkm->ijkm", c, c)
    cyc = t + np.einsum("jkl,lim->ijkm", c, c) + np.einsum("kil,ljm->ijkm", c, c)
    return float(np.abs(cyc).max()) if cyc.size else 0.0


@dataclass(frozen=True, eq=False)
class FiniteLieAlgebra:
    """A finite-dimensional Lie algebra with an inner product.

    Validated on construction: antisymmetry, Jacobi identity and a symmetric
    positive-definite Gram matrix.
    """

    structure_constants: np.ndarray
    gram: np.ndarray
    name: str = "g"

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise ContractError(f"structure constants must be dim x dim x dim, got {c.shape}")
        gram = _as_square_spd(self.gram, "gram")
        if gram.shape[0] != c.shape[0]:
            raise ContractError("gram and structure constants disagree on dimension")
        scale = max(1.0, float(np.abs(c).max()))
        if np.abs(c + c.transpose(1, 0, 2)).max() > CONSTRUCTION_TOL * scale:
            raise ContractError("structure constants are not antisymmetric")
        if jacobi_residual(c) > CONSTRUCTION_TOL * scale**2:
            raise ContractError("structure constants violate the Jacobi identity")
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "gram", gram)

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    def bracket(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants)

    def inner(self, x, y):
        return float(x @ self.gram @ y)


def ad_matrix(alg: FiniteLieAlgebra, x) -> np.ndarray:
    """Matrix of ``y -> [x, y]``."""
    x = _check_vector(x, alg.dim, "x")
    return np.einsum("i,ijk->kj", x, alg.structure_constants)


def ad_transpose_bruteforce(alg: FiniteLieAlgebra, x) -> np.ndarray:
    """Metric adjoint of ``ad(x)``: ``G^-1 ad(x)^T G``."""
    m = ad_matrix(alg, x)
    return np.linalg.solve(alg.gram, m.T @ alg.gram)


def euler_rhs_plain(alg: FiniteLieAlgebra, u) -> np.ndarray:
    u = _check_vector(u, alg.dim, "u")
    return -ad_transpose_bruteforce(alg, u) @ u


def coadjoint_rate(alg: FiniteLieAlgebra, u, m) -> np.ndarray:
    """``ad*(u) m`` with ``(ad*(u) m, y) = (m, -[u, y])``."""
    return -np.einsum("i,ijk,k->j", u, alg.structure_constants, m)


def hamiltonian_residual(alg: FiniteLieAlgebra, u) -> float:
    """Sup-norm gap between ``G * euler_rhs_plain(u)`` and ``ad*(u) (G u)``."""
    u = _check_vector(u, alg.dim, "u")
    lhs = alg.gram @ euler_rhs_plain(alg, u)
    rhs = coadjoint_rate(alg, u, alg.gram @ u)
    return float(np.abs(lhs - rhs).max())


def quadratic_rhs_tensor(alg: FiniteLieAlgebra) -> np.ndarray:
    """Tensor ``T`` with ``euler_rhs_plain(u) == T @ u @ u``.

    Useful for long integrations where per-call validation would dominate.
    """
    q = np.einsum("ijl,lp->jip", alg.structure_constants, alg.gram)
    t = -np.linalg.solve(alg.gram, q.reshape(alg.dim, -1)).reshape(q.shape)
    return t


# ---------------------------------------------------------------------------
# Extensions


@dataclass(frozen=True, eq=False)
class ExtensionData:
    """Data of an extension of ``base`` by a module ``V``.

    ``action_b[i]`` is the matrix of ``b(e_i)`` on ``V``, ``cocycle_omega[i, j]``
    the ``V``-vector ``omega(e_i, e_j)``.  ``h_bracket`` makes ``V`` a Lie algebra
    (general, non-abelian extensions).
    """

    base: FiniteLieAlgebra
    action_b: np.ndarray
    cocycle_omega: np.ndarray
    gram_V: np.ndarray
    h_bracket: Optional[np.ndarray] = None
    residuals: dict = field(default_factory=dict, init=False)

    def __post_init__(self):
        n = self.base.dim
        gram_v = _as_square_spd(self.gram_V, "gram_V")
        dv = gram_v.shape[0]
        b = np.asarray(self.action_b, dtype=float)
        om = np.asarray(self.cocycle_omega, dtype=float)
        if b.shape != (n, dv, dv):
            raise ContractError(f"action_b has shape {b.shape}, expected {(n, dv, dv)}")
        if om.shape != (n, n, dv):
            raise ContractError(f"cocycle_omega has shape {om.shape}, expected {(n, n, dv)}")
        c = self.base.structure_constants
        scale = max(1.0, np.abs(c).max(), np.abs(b).max(), np.abs(om).max())
        tol = CONSTRUCTION_TOL * scale**2
        res = {}
        res["omega_skew"] = float(np.abs(om + om.transpose(1, 0, 2)).max())

        hb = None
        if self.h_bracket is not None:
            hb = np.asarray(self.h_bracket, dtype=float)
            if hb.shape != (dv, dv, dv):
                raise ContractError("h_bracket must be dim_V x dim_V x dim_V")
            res["h_jacobi"] = jacobi_residual(hb)
            # b(X) must be a derivation of h
            lhs = np.einsum("iab,cdb->icda", b, hb)
            rhs = np.einsum("iac,adb->icdb", b, hb) + np.einsum("iad,cab->icdb", b, hb)
            res["b_derivation"] = float(np.abs(lhs - rhs).max())

        # [b(X1), b(X2)] - b([X1, X2]) = ad_h(omega(X1, X2))  (zero when h is abelian)
        comm = np.einsum("iab,jbc->ijac", b, b) - np.einsum("jab,ibc->ijac", b, b)
        comm -= np.einsum("ijk,kac->ijac", c, b)
        if hb is not None:
            comm -= np.einsum("ijd,dca->ijac", om, hb)
        res["b_action"] = float(np.abs(comm).max())

        left = np.einsum("ijl,lkv->ijkv", c, om)
        left = left + left.transpose(1, 2, 0, 3) + left.transpose(2, 0, 1, 3)
        right = np.einsum("iab,jkb->ijka", b, om)
        right = right + right.transpose(1, 2, 0, 3) + right.transpose(2, 0, 1, 3)
        res["cocycle"] = float(np.abs(left - right).max()) if left.size else 0.0

        for key, value in res.items():
            if value > tol:
                raise ContractError(f"extension data fails {key} check (residual {value:.3e})")

        object.__setattr__(self, "gram_V", gram_v)
        object.__setattr__(self, "action_b", b)
        object.__setattr__(self, "cocycle_omega", om)
        object.__setattr__(self, "h_bracket", hb)
        object.__setattr__(self, "residuals", res)

    @property
    def dim_V(self) -> int:
        return self.gram_V.shape[0]

    @property
    def g_invariant(self) -> bool:
        """True when every ``b(e_i)`` is skew-adjoint for ``gram_V``."""
        bt = self.action_b.transpose(0, 2, 1) @ self.gram_V + self.gram_V @ self.action_b
        scale = max(1.0, float(np.abs(self.action_b).max()) * float(np.abs(self.gram_V).max()))
        return bool(np.abs(bt).max() <= CONSTRUCTION_TOL * scale)

    @property
    def has_cocycle(self) -> bool:
        return bool(np.abs(self.cocycle_omega).max() > 0)


def b_matrix(ext: ExtensionData, x) -> np.ndarray:
    return np.einsum("i,iab->ab", x, ext.action_b)


def b_transpose(ext: ExtensionData, x) -> np.ndarray:
    """Adjoint of ``b(x)`` with respect to ``gram_V``."""
    return np.linalg.solve(ext.gram_V, b_matrix(ext, x).T @ ext.gram_V)


def h_map(ext: ExtensionData, v) -> np.ndarray:
    """``h(v)`` defined by ``<h(v) X1, X2>_g = <omega(X1, X2), v>_V``."""
    s = ext.cocycle_omega @ (ext.gram_V @ v)
    return np.linalg.solve(ext.base.gram, s.T)


def l_map(ext: ExtensionData, v1, v2) -> np.ndarray:
    """``l(v1, v2)`` defined by ``<l(v1, v2), X>_g = <b(X) v1, v2>_V``."""
    t = (ext.action_b @ v1) @ (ext.gram_V @ v2)
    return np.linalg.solve(ext.base.gram, t)


def ad_h_transpose(ext: ExtensionData, rho) -> np.ndarray:
    ad = np.einsum("a,abc->cb", rho, ext.h_bracket)
    return np.linalg.solve(ext.gram_V, ad.T @ ext.gram_V)


def k_from_cocycle(alg: FiniteLieAlgebra, omega2) -> np.ndarray:
    """Skew map ``k`` with ``<k(X), Y> = omega(X, Y)`` for a scalar 2-form ``omega``."""
    omega2 = np.asarray(omega2, dtype=float)
    if omega2.shape != (alg.dim, alg.dim):
        raise ContractError("scalar cocycle must be dim x dim")
    return np.linalg.solve(alg.gram, omega2.T)


def _check_base(alg, ext):
    if ext.base is not alg and ext.base.dim != alg.dim:
        raise ContractError("extension data was built over a different algebra")


def euler_rhs_semidirect(alg, ext, u, f):
    """Geodesic equation on the semidirect product ``V x| g`` (``omega = 0``)."""
    _check_base(alg, ext)
    if ext.has_cocycle:
        raise ContractError("semidirect product requires omega = 0; use euler_rhs_abelian")
    u = _check_vector(u, alg.dim, "u")
    f = _check_vector(f, ext.dim_V, "f")
    du = euler_rhs_plain(alg, u)
    if ext.g_invariant:
        return du, b_matrix(ext, u) @ f
    return du + l_map(ext, f, f), -b_transpose(ext, u) @ f


def euler_rhs_central(alg, k_map, u, a):
    """Geodesic equation on a one-dimensional central extension; ``a`` is constant."""
    k_map = np.asarray(k_map, dtype=float)
    if k_map.shape != (alg.dim, alg.dim):
        raise ContractError("k_map must be dim x dim")
    skew = alg.gram @ k_map + k_map.T @ alg.gram
    if np.abs(skew).max() > CONSTRUCTION_TOL * max(1.0, np.abs(k_map).max()):
        raise ContractError("k_map is not skew-adjoint with respect to gram")
    u = _check_vector(u, alg.dim, "u")
    return euler_rhs_plain(alg, u) - a * (k_map @ u), 0.0


def euler_rhs_abelian(alg, ext, u, f):
    _check_base(alg, ext)
    u = _check_vector(u, alg.dim, "u")
    f = _check_vector(f, ext.dim_V, "f")
    du = euler_rhs_plain(alg, u) - h_map(ext, f) @ u + l_map(ext, f, f)
    return du, -b_transpose(ext, u) @ f


def euler_rhs_general(alg, ext, u, rho):
    """Geodesic equation on a (possibly non-abelian) extension by ``h = V``."""
    _check_base(alg, ext)
    if ext.h_bracket is None:
        raise ContractError("general extension needs h_bracket")
    u = _check_vector(u, alg.dim, "u")
    rho = _check_vector(rho, ext.dim_V, "rho")
    du = euler_rhs_plain(alg, u) - h_map(ext, rho) @ u + l_map(ext, rho, rho)
    drho = -ad_h_transpose(ext, rho) @ rho - b_transpose(ext, u) @ rho
    return du, drho


def one_cocycle_residual(ext: ExtensionData, alpha_map) -> float:
    """Max of ``alpha([X1,X2]) - b(X1) alpha(X2) + b(X2) alpha(X1)`` over basis pairs."""
    c = ext.base.structure_constants
    lhs = np.einsum("ijk,ak->ija", c, alpha_map)
    ba = np.einsum("iab,bj->ija", ext.action_b, alpha_map)
    return float(np.abs(lhs - ba + ba.transpose(1, 0, 2)).max())


def alpha_transpose(ext: ExtensionData, alpha_map) -> np.ndarray:
    return np.linalg.solve(ext.base.gram, alpha_map.T @ ext.gram_V)


def euler_rhs_sd_central(alg, ext, alpha_map, u, f, a):
    """Central extension of ``V x| g`` by the 2-cocycle built from a 1-cocycle ``alpha``.

    Requires a ``g``-invariant ``gram_V``.  Returns ``(du, df, da)`` with ``da = 0``.
    """
    _check_base(alg, ext)
    alpha_map = np.asarray(alpha_map, dtype=float)
    if alpha_map.shape != (ext.dim_V, alg.dim):
        raise ContractError("alpha_map must be dim_V x dim_g")
    if ext.has_cocycle:
        raise ContractError("sd_central expects semidirect data (omega = 0)")
    if not ext.g_invariant:
        raise ContractError("sd_central requires a g-invariant scalar product on V")
    scale = max(1.0, np.abs(alpha_map).max() * max(1.0, np.abs(ext.action_b).max()))
    res = one_cocycle_residual(ext, alpha_map)
    if res > CONSTRUCTION_TOL * scale:
        raise ContractError(f"alpha_map is not a 1-cocycle (residual {res:.3e})")
    u = _check_vector(u, alg.dim, "u")
    f = _check_vector(f, ext.dim_V, "f")
    du = euler_rhs_plain(alg, u) + a * (alpha_transpose(ext, alpha_map) @ f)
    df = b_matrix(ext, u) @ f - a * (alpha_map @ u)
    return du, df, 0.0


# ---------------------------------------------------------------------------
# Concrete algebras


def so3(gram=None) -> FiniteLieAlgebra:
    c = np.zeros((3, 3, 3))
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return FiniteLieAlgebra(c, np.eye(3) if gram is None else gram, name="so(3)")


def aff1(gram=None) -> FiniteLieAlgebra:
    """Two-dimensional non-abelian algebra ``[x, y] = y``."""
    c = np.zeros((2, 2, 2))
    c[0, 1, 1] = 1.0
    c[1, 0, 1] = -1.0
    return FiniteLieAlgebra(c, np.eye(2) if gram is None else gram, name="aff(1)")


def abelian(dim, gram=None) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(np.zeros((dim, dim, dim)), np.eye(dim) if gram is None else gram,
                            name=f"R^{dim}")


def direct_sum(a: FiniteLieAlgebra, b: FiniteLieAlgebra) -> FiniteLieAlgebra:
    n, m = a.dim, b.dim
    c = np.zeros((n + m,) * 3)
    c[:n, :n, :n] = a.structure_constants
    c[n:, n:, n:] = b.structure_constants
    gram = np.zeros((n + m, n + m))
    gram[:n, :n] = a.gram
    gram[n:, n:] = b.gram
    return FiniteLieAlgebra(c, gram, name=f"{a.name}+{b.name}")


def with_gram(alg: FiniteLieAlgebra, gram) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(alg.structure_constants, gram, name=alg.name)


def change_basis(alg: FiniteLieAlgebra, p) -> FiniteLieAlgebra:
    """Same algebra and metric in the basis ``e'_i = sum_a p[a, i] e_a``."""
    p = np.asarray(p, dtype=float)
    c = np.einsum("ai,bj,abc->ijc", p, p, alg.structure_constants)
    c = np.linalg.solve(p, c.reshape(-1, alg.dim).T).T.reshape(c.shape)
    return FiniteLieAlgebra(c, p.T @ alg.gram @ p, name=alg.name)


def adjoint_action(alg: FiniteLieAlgebra) -> np.ndarray:
    """``b(e_i) = ad(e_i)`` as an action of ``alg`` on itself."""
    return np.stack([ad_matrix(alg, e) for e in np.eye(alg.dim)])


class AlgebraModel:
    """Euler-Arnold flow on a finite-dimensional algebra, shaped for :func:`integrate`.

    The state is the 1-tuple ``(u,)``.  The right-hand side uses the
    precomputed quadratic tensor, so long runs avoid per-call validation.
    ``casimirs`` maps names to functions of the momentum ``G u``.
    """

    def __init__(self, alg: FiniteLieAlgebra, casimirs=None):
        self.alg = alg
        self._t = quadratic_rhs_tensor(alg)
        self.casimirs = dict(casimirs or {})

    def rhs(self, state):
        u = state[0]
        return (self._t @ u @ u,)

    def energy(self, state) -> float:
        u = state[0]
        return 0.5 * float(u @ self.alg.gram @ u)

    def invariants(self, state) -> dict:
        m = self.alg.gram @ state[0]
        return {name: float(f(m)) for name, f in self.casimirs.items()}


def rigid_body(inertia=(1.0, 2.0, 3.0)) -> AlgebraModel:
    """Free rigid body: so(3) with inertia tensor ``diag(inertia)``; Casimir ``|I u|^2``."""
    return AlgebraModel(so3(np.diag(inertia)), {"casimir": lambda m: m @ m})
