"""Run configuration: YAML parsing, validation and normalised dumping.

A complete example (every key except ``model`` is optional)::

    model: qg-beta            # catalog id, see `geoflow list-models`
    grid: {n: 128}            # torus: {n} or {nx, ny}; circle: collocation points, N = (n - 1) // 3
    params: {beta: 1.0}       # only parameters the model declares
    initial:
      preset: random-band     # sine | two-mode | taylor-green | shear | random-band
      amplitude: 1.0
      seed: 0
      # modes: {omega: [[[1, 0], 0.5, 0.0], [[0, 2], 0.25, 1.57]]}   # [k, amplitude, phase]
    time: {t_final: 1.0, cfl: 0.5, stride: 10}                     # or dt instead of cfl
    output: {directory: out, fields: [omega]}
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import yaml

from geoflow import spectral1d as s1
from geoflow.errors import ConfigError
from geoflow.models import PRESETS, ModelSpec, catalog_entry

TOP_KEYS = ("model", "grid", "params", "initial", "time", "output")


@dataclass(frozen=True)
class RunConfig:
    model: str
    grid: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    time: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def spec(self) -> ModelSpec:
        return ModelSpec(self.model, self.params)

    def resolution(self):
        """Cutoff ``N`` for circle models, grid size (or ``(nx, ny)``) for torus models."""
        if catalog_entry(self.model).dim == 1:
            return (self.grid["n"] - 1) // 3
        if "n" in self.grid:
            return self.grid["n"]
        return (self.grid["nx"], self.grid["ny"])

    def to_dict(self):
        return asdict(self)


def _lines(text):
    """Line numbers (1-based) of top-level and second-level keys."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    out = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out[(k.value,)] = k.start_mark.line + 1
            if isinstance(v, yaml.MappingNode):
                for k2, _ in v.value:
                    out[(k.value, k2.value)] = k2.start_mark.line + 1
    return out


def _fail(msg, lines, *path):
    line = None
    for i in range(len(path), 0, -1):
        line = lines.get(tuple(path[:i]))
        if line:
            break
    prefix = f"line {line}: " if line else ""
    raise ConfigError(prefix + msg)


def _power_of_two(n):
    return isinstance(n, int) and n >= 4 and not n & (n - 1)


def _number(value, lines, *path, positive=True):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{'.'.join(path)} must be a number, got {value!r}", lines, *path)
    if positive and not value > 0:
        _fail(f"{'.'.join(path)} must be positive", lines, *path)
    return float(value)


def parse_config(source) -> RunConfig:
    """Parse YAML text (or an already-loaded mapping) into a validated :class:`RunConfig`."""
    if isinstance(source, dict):
        data, lines = source, {}
    else:
        try:
            data = yaml.safe_load(source)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f"line {mark.line + 1}: " if mark else ""
            raise ConfigError(f"{where}malformed YAML ({getattr(exc, 'problem', exc)})") from None
        lines = _lines(source)
    if not isinstance(data, dict):
        raise ConfigError("line 1: configuration must be a mapping")
    for key in data:
        if key not in TOP_KEYS:
            _fail(f"unknown key {key!r}; allowed: {', '.join(TOP_KEYS)}", lines, key)
    if "model" not in data:
        raise ConfigError("line 1: missing required key 'model'")
    model = data["model"]
    try:
        entry = catalog_entry(model)
    except ConfigError as exc:
        _fail(str(exc), lines, "model")

    sections = {}
    for key in ("grid", "params", "initial", "time", "output"):
        value = data.get(key) or {}
        if not isinstance(value, dict):
            _fail(f"{key} must be a mapping", lines, key)
        sections[key] = value

    # grid
    g = sections["grid"]
    unknown = set(g) - {"n", "nx", "ny"}
    if unknown:
        _fail(f"unknown grid key(s) {sorted(unknown)}", lines, "grid")
    if entry.dim == 1:
        if set(g) - {"n"}:
            _fail("circle models take grid {n}", lines, "grid")
        n = g.get("n", s1.collocation_size(s1.DEFAULT_N))
        if not _power_of_two(n):
            _fail(f"grid.n must be a power of two, got {n!r}", lines, "grid", "n")
        grid = {"n": n}
    else:
        if "n" in g and ({"nx", "ny"} & set(g)):
            _fail("give either grid.n or grid.nx/grid.ny", lines, "grid")
        if "nx" in g or "ny" in g:
            grid = {"nx": g.get("nx"), "ny": g.get("ny")}
        else:
            grid = {"n": g.get("n", 128)}
        for k, v in grid.items():
            if not _power_of_two(v) or v < 8:
                _fail(f"grid.{k} must be a power of two >= 8, got {v!r}", lines, "grid", k)
        if "nx" in grid and grid["nx"] == grid["ny"]:
            grid = {"n": grid["nx"]}

    # params
    params = {}
    for k, v in sections["params"].items():
        if k not in entry.params:
            legal = ", ".join(entry.params) or "none"
            _fail(f"model {model!r} takes no parameter {k!r} (legal: {legal})", lines, "params", k)
        params[k] = _number(v, lines, "params", k, positive=False)
    try:
        ModelSpec(model, params)
    except ConfigError as exc:
        _fail(str(exc), lines, "params")

    # initial
    ini = sections["initial"]
    unknown = set(ini) - {"preset", "amplitude", "seed", "modes"}
    if unknown:
        _fail(f"unknown initial key(s) {sorted(unknown)}", lines, "initial")
    initial = {"preset": ini.get("preset", entry.default_preset),
               "amplitude": _number(ini.get("amplitude", entry.amplitude), lines, "initial", "amplitude",
                                    positive=False),
               "seed": ini.get("seed", 0)}
    if initial["preset"] not in PRESETS:
        _fail(f"unknown preset {initial['preset']!r}; known: {', '.join(PRESETS)}", lines,
              "initial", "preset")
    if entry.dim == 1 and initial["preset"] in ("taylor-green", "shear"):
        _fail(f"preset {initial['preset']!r} needs a torus model", lines, "initial", "preset")
    if not isinstance(initial["seed"], int) or isinstance(initial["seed"], bool):
        _fail("initial.seed must be an integer", lines, "initial", "seed")
    if "modes" in ini:
        modes = ini["modes"]
        if not isinstance(modes, dict) or set(modes) - set(entry.fields):
            _fail(f"initial.modes must map field names {list(entry.fields)} to mode lists",
                  lines, "initial", "modes")
        initial["modes"] = modes

    # time
    tm = sections["time"]
    unknown = set(tm) - {"t_final", "dt", "cfl", "stride"}
    if unknown:
        _fail(f"unknown time key(s) {sorted(unknown)}", lines, "time")
    if "dt" in tm and "cfl" in tm:
        _fail("give exactly one of time.dt and time.cfl", lines, "time")
    time = {"t_final": _number(tm.get("t_final", entry.t_final), lines, "time", "t_final",
                               positive=False)}
    if time["t_final"] < 0:
        _fail("time.t_final must be non-negative", lines, "time", "t_final")
    if "dt" in tm:
        time["dt"] = _number(tm["dt"], lines, "time", "dt")
    else:
        time["cfl"] = _number(tm.get("cfl", entry.cfl), lines, "time", "cfl")
        if time["cfl"] > 1:
            _fail("time.cfl must lie in (0, 1]", lines, "time", "cfl")
    stride = tm.get("stride", 10)
    if not isinstance(stride, int) or isinstance(stride, bool) or stride < 1:
        _fail("time.stride must be a positive integer", lines, "time", "stride")
    time["stride"] = stride

    # output
    out = sections["output"]
    unknown = set(out) - {"directory", "fields"}
    if unknown:
        _fail(f"unknown output key(s) {sorted(unknown)}", lines, "output")
    fields = out.get("fields", [])
    if not isinstance(fields, list) or any(f not in entry.fields or f == "mean_u" for f in fields):
        spectral = [f for f in entry.fields if f != "mean_u"]
        _fail(f"output.fields must list spectral fields of {model!r}: {spectral}", lines,
              "output", "fields")
    output = {"directory": str(out.get("directory", "output")), "fields": list(fields)}

    return RunConfig(model=model, grid=grid, params=params, initial=initial, time=time,
                     output=output)


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False, default_flow_style=None)
