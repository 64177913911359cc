"""The model catalog: state layout, right-hand side, energy and invariants per model id.

A model state is a plain tuple.  Circle models hold :class:`Spectrum1D`
components; torus vorticity models hold :class:`Field2D` components followed by
the harmonic (mean) velocity as a length-2 array; torus velocity models hold
:class:`VecField2D` components.  Central charges are parameters, not state,
because they are constant along every trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable

import numpy as np

from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow.errors import ConfigError, ContractError

QUADRATIC_TOL = 1e-8
MOMENT_TOL = 1e-4
SCALAR_MOMENT_TOL = 1e-6
MONITOR_TOL = 1e-11

PRESETS = ("sine", "two-mode", "taylor-green", "shear", "random-band")


@dataclass(frozen=True)
class Invariant:
    """A conserved (or informational, when ``tolerance is None``) quantity.

    Relative invariants are judged by ``|v - v0| / max(|v0|, 1e-14)``,
    absolute ones (means that start at zero) by ``|v - v0|``.
    """

    name: str
    func: Callable
    tolerance: float | None = QUADRATIC_TOL
    absolute: bool = False


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    dim: int
    fields: tuple
    anchor: str
    rhs: Callable
    energy: Callable
    invariants: tuple
    params: dict = field(default_factory=dict)
    speed: Callable | None = None
    linear_rate: Callable | None = None
    monitored: tuple = ()
    solenoidal: tuple = ()
    default_preset: str = "sine"
    amplitude: float = 1.0
    t_final: float = 1.0
    cfl: float = 0.5

    @property
    def state_shape(self):
        return "(" + ", ".join(self.fields) + ")"


# ---------------------------------------------------------------------------
# shared helpers


def _l2sq(s):
    return s1.inner(s, s)


def _h1sq(s):
    return s1.inner(s, s, s1.H1)


def _integral1d(s):
    return s1.TWO_PI * s.mean()


def _max1d(*fields):
    return max(float(np.abs(f.grid()).max()) for f in fields)


def _kmax1d(s):
    return s.n_modes


def _grid_spacing1d(s):
    return s1.TWO_PI / s1.collocation_size(s.n_modes)


def _vort_velocity_sq(omega, mean_u):
    """``int |u|^2`` for ``u = u_psi + U``; ``int |grad psi|^2 = -int psi omega``."""
    t = omega.torus
    psi = s2.Field2D(-omega.hat * t.inv_k2)
    return -s2.inner(psi, omega) + s2.AREA * float(np.dot(mean_u, mean_u))


def _vort_speed(omega, mean_u):
    u = s2.velocity_from_vorticity(omega, mean_u).grid()
    return float(np.sqrt((u**2).sum(axis=0)).max())


def _vec_speed(*vs):
    out = 0.0
    for v in vs:
        g = v.grid()
        out += float(np.sqrt((g**2).sum(axis=0)).max())
    return out


def _vecsq(u):
    return s2.vec_inner(u, u)


def _grad_sq(u):
    t = u.torus
    return float(s2.AREA * np.sum(t.weights * t.k2 * (np.abs(u.hat) ** 2).sum(axis=0)))


def _mean_invariants(index):
    return (
        Invariant("mean_u1", lambda s, p: float(s[index][0]), MONITOR_TOL, absolute=True),
        Invariant("mean_u2", lambda s, p: float(s[index][1]), MONITOR_TOL, absolute=True),
    )


def _vec_mean_invariants(index, prefix="mean_u"):
    return (
        Invariant(prefix + "1", lambda s, p: float(s[index].mean[0]), MONITOR_TOL, absolute=True),
        Invariant(prefix + "2", lambda s, p: float(s[index].mean[1]), MONITOR_TOL, absolute=True),
    )


def _vorticity_moments(index=0):
    return (
        Invariant("enstrophy", lambda s, p: 0.5 * s2.inner(s[index], s[index])),
        Invariant("omega3", lambda s, p: s2.moment(s[index], 3), MOMENT_TOL),
        Invariant("omega4", lambda s, p: s2.moment(s[index], 4), MOMENT_TOL),
    )


def _scalar_moments(index, name):
    return (
        Invariant("int_" + name, lambda s, p: s[index].integral(), MONITOR_TOL, absolute=True),
        Invariant(name + "2", lambda s, p: s2.inner(s[index], s[index]), SCALAR_MOMENT_TOL),
        Invariant(name + "3", lambda s, p: s2.moment(s[index], 3), SCALAR_MOMENT_TOL),
    )


# ---------------------------------------------------------------------------
# circle models


def _rhs_burgers(s, p):
    return (s1.rhs_burgers(s[0]),)


def _rhs_kdv(s, p):
    return (s1.rhs_kdv(s[0], p["a"]),)


def _rhs_ch(s, p):
    return (s1.rhs_camassa_holm(s[0], p["a"]),)


def _rhs_hs(s, p):
    return (s1.rhs_hunter_saxton(s[0]),)


def _pair_rhs(variant):
    def rhs(s, p):
        return s1.rhs_two_component(s[0], s[1], variant, p.get("a", 0.0))

    return rhs


def _mean_u_1d():
    return (Invariant("int_u", lambda s, p: _integral1d(s[0]), MONITOR_TOL, absolute=True),)


def _hs_velocity_grad_sq(s):
    du = s1.deriv(s1.hunter_saxton_velocity(s[0]), 1)
    return _l2sq(du)


def _pair_energy(metric):
    sq = _l2sq if metric == "l2" else _h1sq

    def energy(s, p):
        return 0.5 * (sq(s[0]) + sq(s[1]) + p.get("a", 0.0) ** 2)

    return energy


def _pair_speed(s, p):
    return _max1d(s[0])


# ---------------------------------------------------------------------------
# torus vorticity models


def _rhs_euler(s, p):
    dw, dU = s2.rhs_euler_vorticity(s[0], s[1], with_mean_rate=True)
    return dw, dU


def _rhs_qg(s, p):
    return s2.rhs_qg(s[0], p["beta"], s[1], with_mean_rate=True)


def _rhs_boussinesq(s, p):
    return s2.rhs_boussinesq(s[0], s[1], p["brunt"], s[2], with_mean_rate=True)


def _rhs_passive(s, p):
    return s2.rhs_passive_scalar(s[0], s[1], s[2], with_mean_rate=True)


# ---------------------------------------------------------------------------
# torus velocity models


def _rhs_mhd(s, p):
    return s2.rhs_mhd(s[0], s[1])


def _rhs_charged(s, p):
    return s2.rhs_charged_fluid(s[0], s[1], p["b"])


def _rhs_template(s, p):
    return (s2.rhs_template_matching(s[0]),)


def _rhs_epdiff(s, p):
    return (s2.rhs_epdiff(s[0], p["alpha2"]),)


def _rhs_lae(s, p):
    return (s2.rhs_lae_alpha(s[0], p["alpha2"]),)


def _alpha_energy(s, p):
    return 0.5 * (_vecsq(s[0]) + p["alpha2"] * _grad_sq(s[0]))


def _momentum_invariants(index=0):
    return _vec_mean_invariants(index, prefix="mean_m")


def _build_catalog():
    entries = [
        CatalogEntry(
            "burgers", 1, ("u",), "Diff(S^1), right-invariant L2 metric",
            _rhs_burgers,
            lambda s, p: 0.5 * _l2sq(s[0]),
            _mean_u_1d(),
            speed=lambda s, p: _max1d(s[0]),
            t_final=0.2, cfl=0.2,
        ),
        CatalogEntry(
            "kdv", 1, ("u",), "Virasoro group, L2 metric (central charge a)",
            _rhs_kdv,
            lambda s, p: 0.5 * (_l2sq(s[0]) + p["a"] ** 2),
            _mean_u_1d(),
            params={"a": 0.01},
            speed=lambda s, p: _max1d(s[0]),
            linear_rate=lambda s, p: 2.0 * abs(p["a"]) * _kmax1d(s[0]) ** 3,
            amplitude=0.25, cfl=0.9,
        ),
        CatalogEntry(
            "camassa-holm", 1, ("u",), "Diff(S^1) or Virasoro, H1 metric (extended when a != 0)",
            _rhs_ch,
            lambda s, p: 0.5 * (_h1sq(s[0]) + p["a"] ** 2),
            (Invariant("int_m", lambda s, p: _integral1d(s[0]), MONITOR_TOL, absolute=True),),
            params={"a": 0.0},
            speed=lambda s, p: _max1d(s[0]),
            linear_rate=lambda s, p: 2.0 * abs(p["a"]) * _kmax1d(s[0]),
            amplitude=0.5, cfl=0.5,
        ),
        CatalogEntry(
            "hunter-saxton", 1, ("v",), "Diff(S^1)/S^1, homogeneous H1 metric (state v = u'')",
            _rhs_hs,
            lambda s, p: 0.5 * _hs_velocity_grad_sq(s),
            (Invariant("int_v", lambda s, p: _integral1d(s[0]), MONITOR_TOL, absolute=True),),
            speed=lambda s, p: _max1d(s1.hunter_saxton_velocity(s[0])),
            amplitude=0.25, cfl=0.5,
        ),
    ]
    pair_anchors = {
        "l2": "Diff(S^1) semidirect C(S^1), L2 metric",
        "l2-sigma": "Diff(S^1) extended by C(S^1) via the cocycle -(X'Y - XY'), L2 metric",
        "h1": "Diff(S^1) semidirect C(S^1), H1 metric",
        "h1-sigma": "Diff(S^1) extended by C(S^1) via the cocycle X'Y - XY', H1 metric",
        "l2-alpha-central": "central extension of Diff(S^1) semidirect C(S^1) by alpha(X) = X'', L2 metric",
    }
    for variant in s1.PAIR_VARIANTS:
        metric = "h1" if variant.startswith("h1") else "l2"
        params = {"a": 0.1} if variant == "l2-alpha-central" else {}
        linear = None
        if variant == "l2-alpha-central":
            linear = lambda s, p: abs(p["a"]) * _kmax1d(s[0]) ** 2  # noqa: E731
        entries.append(CatalogEntry(
            "pair-" + variant, 1, ("u", "f"), pair_anchors[variant],
            _pair_rhs(variant),
            _pair_energy(metric),
            (Invariant("int_f", lambda s, p: _integral1d(s[1]), MONITOR_TOL, absolute=True),),
            params=params,
            speed=_pair_speed,
            linear_rate=linear,
            amplitude=0.25, cfl=0.5 if metric == "h1" else 0.25,
        ))

    entries += [
        CatalogEntry(
            "euler-2d", 2, ("omega", "mean_u"), "SDiff(T^2), L2 metric, vorticity form",
            _rhs_euler,
            lambda s, p: 0.5 * _vort_velocity_sq(s[0], s[1]),
            _vorticity_moments() + _mean_invariants(1),
            speed=lambda s, p: _vort_speed(s[0], s[1]),
            monitored=("mean_u1", "mean_u2"),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "qg-beta", 2, ("omega", "mean_u"),
            "SDiff(T^2) extended by the Roger cocycle, beta-plane quasigeostrophy",
            _rhs_qg,
            lambda s, p: 0.5 * _vort_velocity_sq(s[0], s[1]),
            _vorticity_moments() + _mean_invariants(1),
            params={"beta": 1.0},
            speed=lambda s, p: _vort_speed(s[0], s[1]),
            linear_rate=lambda s, p: abs(p["beta"]),
            monitored=("mean_u1", "mean_u2"),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "boussinesq", 2, ("omega", "xi", "mean_u"),
            "SDiff(T^2) semidirect C(T^2) with the cocycle int f dy, stratified Boussinesq",
            _rhs_boussinesq,
            lambda s, p: 0.5 * (_vort_velocity_sq(s[0], s[2])
                                + s2.inner(s[1], s[1]) / p["brunt"] ** 2),
            (Invariant("int_xi", lambda s, p: s[1].integral(), MONITOR_TOL, absolute=True),)
            + _mean_invariants(2),
            params={"brunt": 1.0},
            speed=lambda s, p: _vort_speed(s[0], s[2]),
            linear_rate=lambda s, p: abs(p["brunt"]),
            monitored=("int_xi", "mean_u1", "mean_u2"),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "passive-scalar", 2, ("omega", "f", "mean_u"),
            "SDiff(T^2) semidirect C(T^2), L2 metric, passive scalar",
            _rhs_passive,
            lambda s, p: 0.5 * (_vort_velocity_sq(s[0], s[2]) + s2.inner(s[1], s[1])),
            _vorticity_moments() + _scalar_moments(1, "f")[1:]
            + (Invariant("int_f", lambda s, p: s[1].integral(), MONITOR_TOL, absolute=True),)
            + _mean_invariants(2),
            speed=lambda s, p: _vort_speed(s[0], s[2]),
            monitored=("int_f", "mean_u1", "mean_u2"),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "mhd-2d", 2, ("u", "B"), "SDiff(T^2) semidirect its dual, planar ideal MHD",
            _rhs_mhd,
            lambda s, p: 0.5 * (_vecsq(s[0]) + _vecsq(s[1])),
            (
                Invariant("cross_helicity", lambda s, p: s2.vec_inner(s[0], s[1])),
                Invariant("magnetic_energy", lambda s, p: _vecsq(s[1]), None),
            )
            + _vec_mean_invariants(0)
            + _vec_mean_invariants(1, prefix="mean_B"),
            params={"B0x": 0.0, "B0y": 0.0},
            speed=lambda s, p: _vec_speed(s[0], s[1]),
            solenoidal=(0, 1),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "charged-fluid", 2, ("u", "rho"),
            "SDiff(T^2) extended by C(T^2) with the magnetic form b dx^dy, charged ideal fluid",
            _rhs_charged,
            lambda s, p: 0.5 * (_vecsq(s[0]) + s2.inner(s[1], s[1])),
            _scalar_moments(1, "rho")
            + tuple(Invariant(i.name, i.func, None, True) for i in _vec_mean_invariants(0)),
            params={"b": 1.0},
            speed=lambda s, p: _vec_speed(s[0]),
            linear_rate=lambda s, p: abs(p["b"]) * float(np.abs(s[1].grid()).max()),
            solenoidal=(0,),
            default_preset="random-band", cfl=0.5,
        ),
        CatalogEntry(
            "template-matching", 2, ("u",), "Diff(T^2), right-invariant L2 metric",
            _rhs_template,
            lambda s, p: 0.5 * _vecsq(s[0]),
            _momentum_invariants(),
            speed=lambda s, p: _vec_speed(s[0]),
            default_preset="random-band", amplitude=0.5, t_final=0.2, cfl=0.25,
        ),
        CatalogEntry(
            "epdiff", 2, ("u",), "Diff(T^2), H1-alpha metric (EPDiff)",
            _rhs_epdiff,
            _alpha_energy,
            _momentum_invariants(),
            params={"alpha2": 0.05},
            speed=lambda s, p: _vec_speed(s[0]),
            default_preset="random-band", amplitude=0.25, cfl=0.25,
        ),
        CatalogEntry(
            "lae-alpha", 2, ("u",), "SDiff(T^2), H1-alpha metric (Lagrangian-averaged Euler)",
            _rhs_lae,
            _alpha_energy,
            _momentum_invariants(),
            params={"alpha2": 0.05},
            speed=lambda s, p: _vec_speed(s[0]),
            solenoidal=(0,),
            default_preset="random-band", cfl=0.5,
        ),
    ]
    return MappingProxyType({e.id: e for e in entries})


CATALOG = _build_catalog()
MODEL_IDS = tuple(CATALOG)


def catalog_entry(model_id) -> CatalogEntry:
    try:
        return CATALOG[model_id]
    except KeyError:
        raise ConfigError(f"unknown model {model_id!r}; known: {', '.join(MODEL_IDS)}") from None


@dataclass(frozen=True)
class ModelSpec:
    """A catalog model bound to concrete parameters."""

    id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        entry = catalog_entry(self.id)
        unknown = set(self.params) - set(entry.params)
        if unknown:
            raise ConfigError(f"model {self.id!r} takes no parameter(s) {sorted(unknown)}")
        merged = dict(entry.params)
        merged.update({k: float(v) for k, v in self.params.items()})
        if "alpha2" in merged and not merged["alpha2"] > 0:
            raise ConfigError("alpha2 must be positive")
        if "brunt" in merged and not merged["brunt"] > 0:
            raise ConfigError("brunt (Brunt-Vaisala frequency) must be positive")
        object.__setattr__(self, "params", MappingProxyType(merged))

    @property
    def entry(self) -> CatalogEntry:
        return CATALOG[self.id]

    @property
    def dim(self):
        return self.entry.dim

    @property
    def fields(self):
        return self.entry.fields

    def rhs(self, state):
        return tuple(self.entry.rhs(state, self.params))

    def energy(self, state) -> float:
        return float(self.entry.energy(state, self.params))

    def invariants(self, state) -> dict:
        return {inv.name: float(inv.func(state, self.params)) for inv in self.entry.invariants}

    def invariant_specs(self):
        return self.entry.invariants

    def project(self, state):
        """Re-enforce incompressibility of the solenoidal components."""
        if not self.entry.solenoidal:
            return state
        return tuple(s2.leray_project(x) if i in self.entry.solenoidal else x
                     for i, x in enumerate(state))

    def grid_spacing(self, state) -> float:
        first = state[0]
        if isinstance(first, s1.Spectrum1D):
            return _grid_spacing1d(first)
        t = first.torus
        return min(t.h)

    def speed(self, state) -> float:
        return float(self.entry.speed(state, self.params)) if self.entry.speed else 0.0

    def linear_rate(self, state) -> float:
        if self.entry.linear_rate is None:
            return 0.0
        return float(self.entry.linear_rate(state, self.params))

    def spectral_fields(self, state):
        """``(name, field)`` pairs of the spectral components of a state."""
        return [(name, x) for name, x in zip(self.fields, state)
                if isinstance(x, (s1.Spectrum1D, s2.Field2D, s2.VecField2D))]


# ---------------------------------------------------------------------------
# initial data


def _pattern1d(preset, rng):
    if preset == "sine":
        return lambda x: np.sin(x)
    if preset == "two-mode":
        return lambda x: np.sin(x) + 0.5 * np.cos(2 * x)
    if preset == "random-band":
        amp = rng.standard_normal(4) / np.arange(1, 5) ** 2
        phase = rng.uniform(0, 2 * np.pi, 4)
        raw = lambda x: sum(a * np.cos((k + 1) * x + ph)  # noqa: E731
                            for k, (a, ph) in enumerate(zip(amp, phase)))
        scale = np.abs(raw(s1.grid_points(256))).max()
        return lambda x: raw(x) / scale
    raise ConfigError(f"preset {preset!r} is not defined for circle models")


def _pattern2d(preset, rng):
    if preset == "sine":
        return lambda x, y: np.sin(x)
    if preset == "two-mode":
        return lambda x, y: np.sin(x) + 0.5 * np.cos(2 * y)
    if preset == "taylor-green":
        return lambda x, y: np.cos(x) + np.cos(y)
    if preset == "shear":
        return lambda x, y: np.sin(y)
    if preset == "random-band":
        modes = [(k1, k2) for k1 in range(-3, 4) for k2 in range(0, 4)
                 if (k2 > 0 or k1 > 0) and k1 * k1 + k2 * k2 <= 9]
        amp = rng.standard_normal(len(modes)) / np.array([k1 * k1 + k2 * k2 for k1, k2 in modes])
        phase = rng.uniform(0, 2 * np.pi, len(modes))

        def raw(x, y):
            return sum(a * np.cos(k1 * x + k2 * y + ph)
                       for (k1, k2), a, ph in zip(modes, amp, phase))

        xs = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        scale = np.abs(raw(*np.meshgrid(xs, xs, indexing="ij"))).max()
        return lambda x, y: raw(x, y) / scale
    raise ConfigError(f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")


def _modes1d(entries):
    def f(x):
        out = np.zeros_like(x)
        for k, amp, *rest in entries:
            out += amp * np.cos(k * x + (rest[0] if rest else 0.0))
        return out

    return f


def _modes2d(entries):
    def f(x, y):
        out = np.zeros_like(x)
        for (k1, k2), amp, *rest in entries:
            out += amp * np.cos(k1 * x + k2 * y + (rest[0] if rest else 0.0))
        return out

    return f


def _shift2d(f, dx=0.7, dy=1.3):
    return lambda x, y: f(x + dx, y + dy)


def _shape(n):
    return (n, n) if np.isscalar(n) else tuple(n)


def _scalar2d(func, n):
    return s2.Field2D.from_function(func, *_shape(n))


def _zero_mean(field: s2.Field2D):
    hat = field.hat.copy()
    hat[0, 0] = 0.0
    return s2.Field2D(hat)


def _solenoidal_from(func, n, mean=(0.0, 0.0)):
    """Divergence-free velocity whose vorticity density is ``func``."""
    return s2.velocity_from_vorticity(_zero_mean(_scalar2d(func, n)), mean)


def initial_state(spec: ModelSpec, n, preset=None, amplitude=None, seed=0, modes=None):
    """Build an initial state.

    ``n`` is the cutoff ``N`` for circle models and the grid size for torus models.
    ``modes`` maps field names to explicit ``[k, amplitude, phase]`` lists (with
    ``k = [k1, k2]`` on the torus).  For vector fields the list describes the
    vorticity of an incompressible field, or ``{"1": [...], "2": [...]}``
    components of a compressible one.
    """
    entry = spec.entry
    amp = entry.amplitude if amplitude is None else float(amplitude)
    rng = np.random.default_rng(seed)
    modes = modes or {}
    if modes:
        unknown = set(modes) - set(entry.fields)
        if unknown:
            raise ConfigError(f"model {spec.id!r} has no field(s) {sorted(unknown)}")
    preset = preset or entry.default_preset
    if entry.dim == 1:
        return _initial1d(spec, n, preset, amp, rng, modes)
    return _initial2d(spec, n, preset, amp, rng, modes)


def _initial1d(spec, n, preset, amp, rng, modes):
    pattern = _pattern1d(preset, rng)

    def field_from(name, default):
        func = _modes1d(modes[name]) if name in modes else default
        return s1.Spectrum1D.from_function(func, n)

    if spec.id == "hunter-saxton":
        u = field_from("v", lambda x: amp * pattern(x))
        if "v" in modes:
            c = u.coeffs.copy()
            c[0] = 0.0
            return (s1.Spectrum1D(c),)
        return (s1.deriv(u, 2),)
    u = field_from("u", lambda x: amp * pattern(x))
    if len(spec.fields) == 1:
        return (u,)
    f = field_from("f", lambda x: amp * pattern(x + 1.0))
    return (u, f)


def _initial2d(spec, n, preset, amp, rng, modes):
    for size in _shape(n):
        if size < 8 or size & (size - 1):
            raise ConfigError(f"torus grid sizes must be powers of two >= 8, got {n}")
    pattern = _pattern2d(preset, rng)
    companion = _shift2d(pattern)
    base = lambda x, y: amp * pattern(x, y)  # noqa: E731
    other = lambda x, y: amp * companion(x, y)  # noqa: E731

    def scalar(name, default, zero_mean=False):
        func = _modes2d(modes[name]) if name in modes else default
        f = _scalar2d(func, n)
        return _zero_mean(f) if zero_mean else f

    def solenoidal(name, default, mean=(0.0, 0.0)):
        func = _modes2d(modes[name]) if name in modes else default
        return _solenoidal_from(func, n, mean)

    zero = np.zeros(2)
    sid = spec.id
    if sid in ("euler-2d", "qg-beta"):
        return (scalar("omega", base, True), zero)
    if sid == "boussinesq":
        return (scalar("omega", base, True), scalar("xi", other, True), zero)
    if sid == "passive-scalar":
        return (scalar("omega", base, True), scalar("f", other, True), zero)
    if sid == "mhd-2d":
        b0 = (spec.params["B0x"], spec.params["B0y"])
        return (solenoidal("u", base), solenoidal("B", other, b0))
    if sid == "charged-fluid":
        return (solenoidal("u", base), scalar("rho", other))
    if sid == "lae-alpha":
        return (solenoidal("u", base),)
    # compressible velocity models
    if "u" in modes:
        comps = modes["u"]
        if not isinstance(comps, dict):
            raise ConfigError("compressible velocity modes need components {'1': [...], '2': [...]}")
        f1 = _scalar2d(_modes2d(comps.get("1", comps.get(1, []))), n)
        f2 = _scalar2d(_modes2d(comps.get("2", comps.get(2, []))), n)
        return (s2.VecField2D.from_components(f1, f2),)
    u2 = (lambda x, y: 0.0 * x) if preset == "sine" else (lambda x, y: amp * pattern(y + 0.4, x + 1.1))
    return (s2.VecField2D.from_function(lambda x, y: (base(x, y), u2(x, y)), *_shape(n)),)


def default_resolution(spec: ModelSpec):
    return s1.DEFAULT_N if spec.dim == 1 else s2.DEFAULT_GRID


def describe(model_id) -> str:
    e = catalog_entry(model_id)
    params = ", ".join(f"{k}={v:g}" for k, v in e.params.items()) or "-"
    return f"{e.id:<22} {e.state_shape:<22} {params:<22} {e.anchor}"


def check_state(spec: ModelSpec, state):
    if len(state) != len(spec.fields):
        raise ContractError(f"{spec.id} expects state {spec.entry.state_shape}")
    return state
