"""Conserved quantities, drift reports and totally-geodesic monitors."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from geoflow.errors import ContractError
from geoflow.models import MONITOR_TOL, QUADRATIC_TOL, ModelSpec

EPS = 1e-14


def energy(model: ModelSpec, state) -> float:
    """Half the squared norm of the state in the model's metric."""
    return model.energy(state)


def invariants(model: ModelSpec, state) -> dict:
    return model.invariants(state)


def relative_drift(value, value0, eps=EPS):
    return abs(value - value0) / max(abs(value0), eps)


@dataclass
class InvariantReport:
    """Per-invariant ``(value, value0, drift, tolerance, passed)`` rows."""

    time: float
    rows: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows.values() if r["passed"] is not None)

    def failures(self):
        return [name for name, r in self.rows.items() if r["passed"] is False]

    def table(self) -> str:
        lines = [f"{'invariant':<18} {'value0':>14} {'value':>14} {'drift':>10} {'tol':>8}  verdict"]
        for name, r in self.rows.items():
            tol = "-" if r["tolerance"] is None else f"{r['tolerance']:.0e}"
            verdict = {True: "PASS", False: "FAIL", None: "info"}[r["passed"]]
            kind = " (abs)" if r["absolute"] else ""
            lines.append(f"{name:<18} {r['value0']:>14.6e} {r['value']:>14.6e} "
                         f"{r['drift']:>10.2e} {tol:>8}  {verdict}{kind}")
        return "\n".join(lines)


def drift_report(model: ModelSpec, traj, energy_tol=QUADRATIC_TOL) -> InvariantReport:
    """Worst drift over a trajectory for energy and every catalog invariant."""
    if not traj.diagnostics or not traj.diagnostics[0]:
        series = [dict(energy=model.energy(s), **model.invariants(s)) for s in traj.states]
    else:
        series = traj.diagnostics
    specs = {"energy": (energy_tol, False)}
    specs.update({inv.name: (inv.tolerance, inv.absolute) for inv in model.invariant_specs()})
    first = series[0]
    report = InvariantReport(time=traj.times[-1])
    for name, (tol, absolute) in specs.items():
        v0 = first[name]
        if absolute:
            drifts = [abs(d[name] - v0) for d in series]
        else:
            drifts = [relative_drift(d[name], v0) for d in series]
        worst = max(drifts)
        report.rows[name] = dict(
            value0=v0, value=series[-1][name], drift=worst, tolerance=tol,
            absolute=absolute, passed=None if tol is None else worst <= tol,
        )
    return report


@dataclass
class MonitorReport:
    quantities: dict
    tolerance: float = MONITOR_TOL

    @property
    def worst(self) -> float:
        return max(self.quantities.values()) if self.quantities else 0.0

    @property
    def passed(self) -> bool:
        return self.worst <= self.tolerance


def monitor_totally_geodesic(model: ModelSpec, traj, tolerance=MONITOR_TOL) -> MonitorReport:
    """Largest harmonic velocity components and scalar integrals along a run.

    Starting inside the subalgebra (zero harmonic part, zero-integral scalar),
    geodesics of the constant-coefficient torus models stay there.
    """
    names = model.entry.monitored
    if not names:
        raise ContractError(f"model {model.id!r} carries no totally-geodesic monitor")
    funcs = {inv.name: inv.func for inv in model.invariant_specs()}
    worst = {}
    for name in names:
        worst[name] = max(abs(funcs[name](s, model.params)) for s in traj.states)
    return MonitorReport(worst, tolerance)


def series_rows(traj):
    """``(time, energy, invariants...)`` rows with a header naming every column."""
    names = list(traj.diagnostics[0])
    rows = [["time"] + names]
    for t, d in zip(traj.times, traj.diagnostics):
        rows.append([repr(float(t))] + [repr(float(d[n])) for n in names])
    return rows


def write_series_csv(path, traj):
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(series_rows(traj))


def write_report_csv(path, traj):
    """Long format: ``time, invariant, value``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "invariant", "value"])
        for t, d in zip(traj.times, traj.diagnostics):
            for name, value in d.items():
                w.writerow([repr(float(t)), name, repr(float(value))])
