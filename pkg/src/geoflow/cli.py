"""Command-line entry point: ``geoflow run | verify | list-models``."""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from geoflow import spectral1d as s1
from geoflow import spectral2d as s2
from geoflow import suites
from geoflow.config import dump_config, load_config
from geoflow.diagnostics import drift_report, write_series_csv
from geoflow.errors import ConfigError, ContractError, IntegrationDiverged
from geoflow.integrators import StepperConfig, integrate
from geoflow.models import MODEL_IDS, describe, initial_state

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP = 0, 1, 2
THREADS_ENV = "GEOFLOW_THREADS"


def _mode_rows(name, t, x):
    if isinstance(x, s1.Spectrum1D):
        for k, c in enumerate(x.coeffs):
            yield [name, repr(t), k, 0, repr(float(c.real)), repr(float(c.imag))]
        return
    if isinstance(x, s2.VecField2D):
        for i in (0, 1):
            yield from _mode_rows(f"{name}{i + 1}", t, x.component(i))
        return
    tor = x.torus
    ix, iy = np.nonzero(tor.mask)
    for a, b in zip(ix, iy):
        c = x.hat[a, b]
        yield [name, repr(t), int(tor.kx[a, 0]), int(tor.ky[0, b]),
               repr(float(c.real)), repr(float(c.imag))]


def write_snapshot(directory, name, t, x):
    """One row per retained mode; vector fields list both components."""
    path = Path(directory) / f"snapshot_t{t:g}_{name}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["field", "t", "k1", "k2", "re", "im"])
        w.writerows(_mode_rows(name, float(t), x))
    return path


def _snapshots(cfg, spec, traj, out):
    wanted = set(cfg.output["fields"])
    if not wanted:
        return []
    paths = []
    picks = [0] if len(traj) == 1 else [0, len(traj) - 1]
    for i in picks:
        for name, x in spec.spectral_fields(traj.states[i]):
            if name in wanted:
                paths.append(write_snapshot(out, name, traj.times[i], x))
    return paths


def cmd_run(path, dump=False, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    try:
        cfg = load_config(path)
    except ConfigError as exc:
        print(f"{path}: {exc}", file=stderr)
        return EXIT_CONFIG
    if dump:
        stdout.write(dump_config(cfg))
        return EXIT_OK
    spec = cfg.spec()
    ini = cfg.initial
    try:
        s0 = initial_state(spec, cfg.resolution(), preset=ini["preset"], amplitude=ini["amplitude"],
                           seed=ini["seed"], modes=ini.get("modes"))
    except (ConfigError, ContractError, ValueError, TypeError) as exc:
        print(f"{path}: initial: {exc}", file=stderr)
        return EXIT_CONFIG
    tm = cfg.time
    stepper = StepperConfig(t_final=tm["t_final"], dt=tm.get("dt"), cfl=tm.get("cfl"),
                            record_stride=tm["stride"])
    out = Path(cfg.output["directory"])
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    try:
        traj = integrate(spec, s0, stepper)
    except IntegrationDiverged as exc:
        traj = exc.trajectory
        print(f"{spec.id}: {exc} (partial output up to t = {traj.times[-1]:g})", file=stderr)
        code = EXIT_BLOWUP
    write_series_csv(out / "series.csv", traj)
    _snapshots(cfg, spec, traj, out)
    if code == EXIT_OK:
        print(drift_report(spec, traj).table(), file=stdout)
    return code


def _threads():
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_verify(suite, stdout=None, stderr=None) -> int:
    stdout, stderr = stdout or sys.stdout, stderr or sys.stderr
    if suite not in suites.SUITES:
        print(f"unknown suite {suite!r}; choose from {', '.join(suites.SUITES)}", file=stderr)
        return EXIT_CONFIG
    criteria = suites.SUITES[suite]
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda c: suites.CRITERIA[c](), criteria))
    checks = [row for rows in results for row in rows]
    for row in checks:
        print(row.line(), file=stdout)
    failed = sum(not row.passed for row in checks)
    print(f"{suite}: {len(checks) - failed}/{len(checks)} checks passed "
          f"in {time.perf_counter() - start:.1f} s", file=stdout)
    return EXIT_OK if failed == 0 else EXIT_CONFIG


def cmd_list_models(stdout=None) -> int:
    stdout = stdout or sys.stdout
    print(f"{'id':<22} {'state':<22} {'params':<22} anchor", file=stdout)
    for model_id in MODEL_IDS:
        print(describe(model_id), file=stdout)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="geoflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="integrate the model described by a YAML config")
    run.add_argument("config")
    run.add_argument("--dump-config", action="store_true",
                     help="print the normalised config and exit")
    verify = sub.add_parser("verify", help="run an acceptance suite")
    verify.add_argument("suite", help=", ".join(suites.SUITES))
    sub.add_parser("list-models", help="print the model catalog")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, dump=args.dump_config)
    if args.command == "verify":
        return cmd_verify(args.suite)
    return cmd_list_models()


if __name__ == "__main__":
    sys.exit(main())
