import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoflow import algebra as A
from geoflow import oracle
from geoflow.errors import ContractError

E1, E2, E3 = np.eye(3)
seeds = st.integers(0, 2**32 - 1)


def test_ad_matrix_so3():
    m = A.ad_matrix(A.so3(), E1)
    assert np.allclose(m @ E2, E3)
    assert np.allclose(m @ E3, -E2)
    assert np.allclose(m @ E1, 0)
    assert not A.ad_matrix(A.so3(), np.zeros(3)).any()
    assert not A.ad_matrix(A.abelian(4), np.ones(4)).any()


def test_ad_transpose_identity_gram():
    adt = A.ad_transpose_bruteforce(A.so3(), E1)
    assert np.allclose(adt, -A.ad_matrix(A.so3(), E1))
    assert np.allclose(adt @ E3, E2)
    assert not A.ad_transpose_bruteforce(A.abelian(3), E2).any()


def test_rigid_body_rates():
    alg = A.so3(np.diag([1.0, 2.0, 3.0]))
    u = np.array([0.0, 1.0, 1.0])
    assert np.allclose(A.euler_rhs_plain(alg, u), [1.0, 0.0, 0.0], atol=1e-15)
    assert np.allclose(-A.ad_transpose_bruteforce(alg, u) @ u, [1.0, 0.0, 0.0])
    assert np.allclose(A.euler_rhs_plain(alg, E1), 0.0)
    assert A.hamiltonian_residual(alg, u) <= 1e-14
    assert A.hamiltonian_residual(alg, np.zeros(3)) == 0.0
    assert not A.euler_rhs_plain(A.abelian(3), np.ones(3)).any()


def test_invalid_algebras_rejected():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0  # not antisymmetric
    with pytest.raises(ContractError):
        A.FiniteLieAlgebra(c, np.eye(3))
    with pytest.raises(ContractError):
        A.so3(np.diag([1.0, -1.0, 1.0]))
    # antisymmetric but not Jacobi
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[1, 2, 1], c[2, 1, 1] = 1.0, -1.0
    assert A.jacobi_residual(c) > 1e-3
    with pytest.raises(ContractError):
        A.FiniteLieAlgebra(c, np.eye(3))


def test_semidirect_reductions():
    alg = A.so3(np.diag([1.0, 2.0, 3.0]))
    ext = A.ExtensionData(alg, A.adjoint_action(A.so3()), np.zeros((3, 3, 3)), np.eye(3))
    assert ext.g_invariant
    u = np.array([0.3, -0.2, 0.7])
    du, df = A.euler_rhs_semidirect(alg, ext, u, np.zeros(3))
    assert np.allclose(du, A.euler_rhs_plain(alg, u)) and not df.any()
    f = np.array([1.0, 0.5, -0.4])
    du, df = A.euler_rhs_semidirect(alg, ext, u, f)
    assert np.allclose(du, A.euler_rhs_plain(alg, u))
    assert np.allclose(df, np.cross(u, f))
    # l(f, f) vanishes for the adjoint representation on R^3
    assert np.allclose(A.l_map(ext, f, f), 0.0, atol=1e-15)


def test_central_reductions():
    alg = A.so3(np.diag([1.0, 2.0, 3.0]))
    k = A.k_from_cocycle(alg, np.array([[0, 1.0, 0], [-1.0, 0, 2.0], [0, -2.0, 0]]))
    u = np.array([0.1, 0.2, 0.3])
    assert np.allclose(A.euler_rhs_central(alg, k, u, 0.0)[0], A.euler_rhs_plain(alg, u))
    du, da = A.euler_rhs_central(alg, k, np.zeros(3), 1.5)
    assert not du.any() and da == 0.0
    with pytest.raises(ContractError):
        A.euler_rhs_central(alg, np.eye(3), u, 1.0)


def test_sd_central_zero_velocity():
    cases = [c for c in oracle.extension_cases(3) if c[0] == "sd_central"]
    _, _, d = cases[0]
    f = np.array([0.4, -1.0, 0.25])
    du, df, da = A.euler_rhs_sd_central(d["alg"], d["ext"], d["alpha"], np.zeros(3), f, 2.0)
    assert np.allclose(du, 2.0 * A.alpha_transpose(d["ext"], d["alpha"]) @ f)
    assert np.allclose(df, 0.0) and da == 0.0
    u = np.array([0.2, 0.1, -0.3])
    du, df, _ = A.euler_rhs_sd_central(d["alg"], d["ext"], d["alpha"], u, f, 0.0)
    ref = A.euler_rhs_semidirect(d["alg"], d["ext"], u, f)
    assert np.allclose(du, ref[0], atol=1e-14) and np.allclose(df, ref[1], atol=1e-14)
    with pytest.raises(ContractError):
        A.euler_rhs_sd_central(d["alg"], d["ext"], d["alpha"] + 1.0, u, f, 1.0)


def test_general_with_abelian_h_matches_abelian():
    for kind, _, d in oracle.extension_cases(1):
        if kind != "abelian":
            continue
        ext = d["ext"]
        gen = A.ExtensionData(d["alg"], ext.action_b, ext.cocycle_omega, ext.gram_V,
                              h_bracket=np.zeros((ext.dim_V,) * 3))
        rng = np.random.default_rng(0)
        u, f = rng.standard_normal(d["alg"].dim), rng.standard_normal(ext.dim_V)
        a = A.euler_rhs_abelian(d["alg"], ext, u, f)
        g = A.euler_rhs_general(d["alg"], gen, u, f)
        assert np.abs(a[0] - g[0]).max() <= 1e-13
        assert np.abs(a[1] - g[1]).max() <= 1e-13


def test_semidirect_is_abelian_without_cocycle():
    for kind, _, d in oracle.extension_cases(2):
        if kind != "semidirect":
            continue
        rng = np.random.default_rng(1)
        u, f = rng.standard_normal(d["alg"].dim), rng.standard_normal(d["ext"].dim_V)
        s = A.euler_rhs_semidirect(d["alg"], d["ext"], u, f)
        a = A.euler_rhs_abelian(d["alg"], d["ext"], u, f)
        assert np.abs(s[0] - a[0]).max() <= 1e-13
        assert np.abs(s[1] - a[1]).max() <= 1e-13


def test_rigid_body_model_conserves():
    model = A.rigid_body()
    s = (np.array([0.3, 1.0, -0.5]),)
    rate = model.rhs(s)[0]
    assert abs(rate @ model.alg.gram @ s[0]) <= 1e-14
    m = model.alg.gram @ s[0]
    assert abs(2 * m @ (model.alg.gram @ rate)) <= 1e-14


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_adjoint_identity_random_algebra(seed):
    rng = np.random.default_rng(seed)
    alg = oracle._random5(rng)
    x, y, z = rng.standard_normal((3, 5))
    lhs = alg.inner(A.ad_transpose_bruteforce(alg, x) @ y, z)
    rhs = alg.inner(y, alg.bracket(x, z))
    scale = np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)
    assert abs(lhs - rhs) <= 1e-12 * scale * np.abs(alg.gram).max() * 10


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_hamiltonian_residual_random_algebra(seed):
    rng = np.random.default_rng(seed)
    alg = oracle._random5(rng)
    u = rng.standard_normal(5)
    # random bases can be badly conditioned, so compare against the size of the terms
    scale = np.abs(alg.gram @ A.euler_rhs_plain(alg, u)).max() + np.abs(alg.structure_constants).max()
    assert A.hamiltonian_residual(alg, u) <= 1e-13 * max(1.0, scale) * 10


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_energy_orthogonality_all_extensions(seed):
    rng = np.random.default_rng(seed)
    for kind, _, d in oracle.extension_cases(seed % 7):
        alg = d["alg"]
        u = rng.standard_normal(alg.dim)
        if kind == "central":
            k = A.k_from_cocycle(alg, d["omega2"])
            du, _ = A.euler_rhs_central(alg, k, u, rng.standard_normal())
            assert abs(alg.inner(du, u)) <= 1e-12 * max(1.0, alg.inner(u, u)) * 10
            continue
        ext = d["ext"]
        f = rng.standard_normal(ext.dim_V)
        if kind == "sd_central":
            du, df, _ = A.euler_rhs_sd_central(alg, ext, d["alpha"], u, f, rng.standard_normal())
        else:
            func = {"semidirect": A.euler_rhs_semidirect, "abelian": A.euler_rhs_abelian,
                    "general": A.euler_rhs_general}[kind]
            du, df = func(alg, ext, u, f)
        rate = alg.inner(du, u) + float(df @ ext.gram_V @ f)
        size = alg.inner(u, u) + float(f @ ext.gram_V @ f)
        assert abs(rate) <= 1e-11 * max(1.0, size) ** 1.5


@pytest.mark.parametrize("kind", ["central", "semidirect", "abelian", "general", "sd_central"])
def test_extension_rhs_matches_bruteforce(kind):
    rng = np.random.default_rng(11)
    rows = [d for k, _, d in oracle.extension_cases(4) if k == kind]
    assert len(rows) >= 3
    for d in rows:
        assert oracle.extension_residual(kind, d, rng) <= 1e-12
