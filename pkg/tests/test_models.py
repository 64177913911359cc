import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.errors import ConfigError, ContractError
from geoflow.models import (CATALOG, MODEL_IDS, PRESETS, ModelSpec, check_state, describe,
                            initial_state)

EXPECTED = ("burgers", "kdv", "camassa-holm", "hunter-saxton", "pair-l2", "pair-l2-sigma",
            "pair-h1", "pair-h1-sigma", "pair-l2-alpha-central", "euler-2d", "qg-beta",
            "boussinesq", "passive-scalar", "mhd-2d", "charged-fluid", "template-matching",
            "epdiff", "lae-alpha")


def small(spec):
    return 16 if spec.dim == 1 else 32


def combine(s, r, h):
    return tuple(x + h * y for x, y in zip(s, r))


def test_catalog_complete_and_ordered():
    assert MODEL_IDS == EXPECTED
    assert tuple(CATALOG) == MODEL_IDS
    for mid in MODEL_IDS:
        line = describe(mid)
        assert line.startswith(mid) and CATALOG[mid].anchor in line


def test_param_validation():
    assert ModelSpec("qg-beta").params["beta"] == 1.0
    assert ModelSpec("qg-beta", {"beta": 2}).params["beta"] == 2.0
    with pytest.raises(ConfigError):
        ModelSpec("burgers", {"beta": 1.0})
    with pytest.raises(ConfigError):
        ModelSpec("epdiff", {"alpha2": 0.0})
    with pytest.raises(ConfigError):
        ModelSpec("boussinesq", {"brunt": -1.0})
    with pytest.raises(ConfigError):
        ModelSpec("navier-stokes")


@pytest.mark.parametrize("mid", MODEL_IDS)
def test_initial_state_shapes(mid):
    spec = ModelSpec(mid)
    s = initial_state(spec, small(spec))
    assert len(s) == len(spec.fields)
    check_state(spec, s)
    for name, x in zip(spec.fields, s):
        if name == "mean_u":
            assert np.shape(x) == (2,)
        elif spec.dim == 1:
            assert isinstance(x, s1.Spectrum1D) and x.n_modes == 16
        else:
            assert x.torus.shape == (32, 32)
    assert np.isfinite(spec.energy(s)) and spec.energy(s) > 0
    for i in spec.entry.solenoidal:
        assert s2.max_divergence(s[i]) < 1e-12


def test_initial_state_is_seeded():
    spec = ModelSpec("euler-2d")
    a = initial_state(spec, 32, preset="random-band", seed=3)[0]
    b = initial_state(spec, 32, preset="random-band", seed=3)[0]
    c = initial_state(spec, 32, preset="random-band", seed=4)[0]
    assert np.array_equal(a.hat, b.hat) and not np.array_equal(a.hat, c.hat)


@pytest.mark.parametrize("preset", PRESETS)
def test_presets_build(preset):
    for mid in ("burgers", "euler-2d", "mhd-2d", "epdiff"):
        spec = ModelSpec(mid)
        if spec.dim == 1 and preset in ("taylor-green", "shear"):
            with pytest.raises(ConfigError):
                initial_state(spec, 16, preset=preset)
            continue
        s = initial_state(spec, small(spec), preset=preset)
        assert np.isfinite(spec.energy(s))


def test_explicit_modes():
    spec = ModelSpec("burgers")
    (u,) = initial_state(spec, 16, modes={"u": [[1, 2.0, 0.0]]})
    x = s1.grid_points(s1.collocation_size(16))
    assert np.allclose(u.grid(), 2.0 * np.cos(x))
    spec = ModelSpec("euler-2d")
    w, mean = initial_state(spec, 32, modes={"omega": [[[1, 2], 0.5, 0.0]]})
    x, y = s2.torus(32).points()
    assert np.allclose(w.grid(), 0.5 * np.cos(x + 2 * y)) and not mean.any()
    (u,) = initial_state(ModelSpec("epdiff"), 32, modes={"u": {"1": [[[1, 0], 1.0, 0.0]]}})
    assert np.allclose(u.grid()[0], np.cos(x)) and np.allclose(u.grid()[1], 0.0)
    with pytest.raises(ConfigError):
        initial_state(spec, 32, modes={"psi": []})


def test_non_square_grid():
    spec = ModelSpec("passive-scalar")
    s = initial_state(spec, (32, 64))
    assert s[0].torus.shape == (32, 64)
    assert all(np.isfinite(x.hat).all() for x in s[:2])
    r = spec.rhs(s)
    assert r[0].torus.shape == (32, 64)


def test_check_state_rejects_wrong_arity():
    with pytest.raises(ContractError):
        check_state(ModelSpec("boussinesq"), (s2.Field2D.zeros(8),))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(MODEL_IDS), st.integers(0, 10**6))
def test_energy_rate_vanishes(mid, seed):
    """The energy is quadratic, so dE/dt = (E(s + r) - E(s - r)) / 2 exactly."""
    spec = ModelSpec(mid)
    s = initial_state(spec, small(spec), preset="random-band", seed=seed, amplitude=0.5)
    if spec.dim == 2 and "mean_u" in spec.fields:
        s = s[:-1] + (np.array([0.2, -0.1]),)
    r = spec.rhs(s)
    rate = 0.5 * (spec.energy(combine(s, r, 1.0)) - spec.energy(combine(s, r, -1.0)))
    scale = spec.energy(s) + spec.energy(r)
    assert abs(rate) <= 1e-11 * max(1.0, scale)


@pytest.mark.parametrize("mid", [m for m in MODEL_IDS if CATALOG[m].solenoidal])
def test_projection_restores_incompressibility(mid):
    spec = ModelSpec(mid)
    s = initial_state(spec, 32)
    i = spec.entry.solenoidal[0]
    bumped = list(s)
    bumped[i] = s[i] + s2.grad(s2.Field2D.from_function(lambda x, y: np.sin(x + y), 32))
    out = spec.project(tuple(bumped))
    assert s2.max_divergence(out[i]) < 1e-12
    assert np.abs(out[i].hat - s[i].hat).max() < 1e-13
