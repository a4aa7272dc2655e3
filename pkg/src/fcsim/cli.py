"""Command-line front end: run experiment presets, emit CSV + SVG artifacts,
or verify the package against its built-in acceptance checks.

Precedence for settings: CLI flags > --config JSON file > built-in defaults.
Exit codes: 0 success, 1 configuration/validation error, 2 numerical guard
(resonant denominator, branch-cut ambiguity, failed calibration bracket).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from importlib import resources

import numpy as np

from . import experiments, floquet, svgplot
from .device import DeviceError, load_device
from .dynamics import IntegratorError
from .experiments import CalibrationError, ExperimentError
from .floquet import ResonanceError
from .qcore import QcoreError

EXPERIMENTS = ("scan_dphi", "scan_delta_single", "chiral_single",
               "chiral_double", "calibrate", "heff_report")

CONFIG_ERRORS = (DeviceError, ExperimentError, IntegratorError, QcoreError)
NUMERIC_ERRORS = (ResonanceError, CalibrationError)


def _resolve_device(name: str):
    if name == "table_s1" or name is None:
        return load_device(
            resources.files("fcsim.data").joinpath("table_s1.json").read_text())
    return load_device(name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fcsim",
        description="Floquet-engineered spin-chirality simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment preset")
    run.add_argument("--experiment", required=True)
    run.add_argument("--device", default="table_s1",
                     help="device JSON path or the bundled 'table_s1'")
    run.add_argument("--config", help="JSON file with default overrides")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--seed", type=int)
    run.add_argument("--shots", help="shot count or 'exact'")
    run.add_argument("--noise", choices=("on", "off"))
    run.add_argument("--nu", type=float, help="modulation frequency, MHz")
    run.add_argument("--delta", type=float, help="modulation amplitude, MHz")
    run.add_argument("--dphi", type=float, help="relative drive phase, rad")
    run.add_argument("--g", type=float, help="coupling for analytic reports, MHz")
    run.add_argument("--levels", type=int, choices=(2, 3))
    run.add_argument("--exact", action="store_true",
                     help="shorthand for --shots exact --noise off")

    verify = sub.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--filter", help="run only criteria with this tag")
    return parser


def _settings(args) -> dict:
    cfg = {"seed": 0, "shots": None, "noise": "none", "nu": 100.0,
           "delta": 138.0, "dphi": None, "g": None, "levels": None}
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.exact:
        cfg["shots"], cfg["noise"] = None, "none"
    if args.shots is not None:
        cfg["shots"] = None if args.shots == "exact" else int(args.shots)
    if args.noise is not None:
        cfg["noise"] = "lindblad" if args.noise == "on" else "none"
    for key in ("nu", "delta", "dphi", "g", "levels"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if cfg["shots"] is not None and cfg["shots"] <= 0:
        raise ExperimentError("shots must be positive or 'exact'")
    return cfg


def _run_scan_dphi(device, cfg, out):
    grid = np.linspace(1e-6, 2.0 * math.pi, 25)
    scan = experiments.scan_dphi(device, cfg["delta"], cfg["nu"], grid,
                                 noise=cfg["noise"], shots=cfg["shots"],
                                 seed=cfg["seed"])
    g = scan.metadata["g_mhz"]
    analytic = [abs(floquet.pairwise_geff(g, cfg["delta"], cfg["nu"], x))
                for x in grid]
    experiments.write_csv(
        os.path.join(out, "scan_dphi.csv"), scan.metadata,
        {"dphi_rad": grid, "geff_mhz": scan.geff, "analytic_mhz": analytic})
    svgplot.plot_lines(
        os.path.join(out, "scan_dphi.svg"), grid,
        {"extracted": scan.geff, "analytic": analytic},
        xlabel="relative phase (rad)", ylabel="|g_eff| (MHz)",
        title="pairwise decoupling scan")


def _run_scan_delta(device, cfg, out):
    nu = cfg["nu"]
    grid = np.linspace(1.8 * nu, 3.0 * nu, 25)
    scan = experiments.scan_delta_single(device, nu, grid, noise=cfg["noise"],
                                         shots=cfg["shots"], seed=cfg["seed"])
    g = scan.metadata["g_mhz"]
    analytic = [abs(floquet.single_mod_geff(g, d, nu)) for d in grid]
    experiments.write_csv(
        os.path.join(out, "scan_delta_single.csv"), scan.metadata,
        {"delta_mhz": grid, "geff_mhz": scan.geff, "analytic_mhz": analytic})
    svgplot.plot_lines(
        os.path.join(out, "scan_delta_single.svg"), grid,
        {"extracted": scan.geff, "analytic": analytic},
        xlabel="modulation amplitude (MHz)", ylabel="|g_eff| (MHz)",
        title="single-modulation decoupling scan")


def _run_chiral(device, cfg, out, excitations):
    kwargs = {}
    if cfg["levels"] is not None:
        kwargs["levels"] = cfg["levels"]
    series = experiments.chiral_experiment(
        device, excitations, nu=cfg["nu"], noise=cfg["noise"],
        shots=cfg["shots"], seed=cfg["seed"], **kwargs)
    name = f"chiral_{excitations}"
    meta = {"experiment": name, "nu_mhz": cfg["nu"], "noise": cfg["noise"],
            "shots": cfg["shots"] or 0, "seed": cfg["seed"]}
    experiments.series_to_csv(os.path.join(out, f"{name}.csv"), series, meta)
    shown = ("100", "010", "001") if excitations == "single" else ("011", "101", "110")
    curves = {f"p_{l}": series.column(l) for l in shown if l in series.labels}
    svgplot.plot_lines(os.path.join(out, f"{name}.svg"), series.times, curves,
                       xlabel="t (us)", ylabel="population",
                       title=f"{excitations}-excitation chiral dynamics")


def _run_calibrate(device, cfg, out):
    result = experiments.calibrate(device, nu=cfg["nu"], steps="ABC",
                                   seed=cfg["seed"])
    meta = {"experiment": "calibrate", "nu_mhz": cfg["nu"], "seed": cfg["seed"]}
    cols = {"delta_mhz": [result["delta"]], "dphi_rad": [result["dphi"]]}
    for i, off in enumerate(result.get("offsets", ())):
        cols[f"offset{i}_mhz"] = [off]
    experiments.write_csv(os.path.join(out, "calibrate.csv"), meta, cols)
    nu = cfg["nu"]
    grid = np.linspace(1.8 * nu, 3.0 * nu, 121)
    g = device.couplings.g(device.qubits[0].id, device.qubits[1].id)
    curve = [abs(floquet.single_mod_geff(g, d, nu)) for d in grid]
    svgplot.plot_lines(
        os.path.join(out, "calibrate.svg"), grid,
        {"analytic |g_eff|": curve,
         "calibrated": [0.02 if abs(d - result["delta"]) < nu * 0.01 else np.nan
                        for d in grid]},
        xlabel="modulation amplitude (MHz)", ylabel="|g_eff| (MHz)",
        title=f"step A zero at {result['delta']:.1f} MHz, "
              f"step B at {result['dphi']:.4f} rad")
    print(f"delta = {result['delta']:.2f} MHz, dphi = {result['dphi']:.4f} rad, "
          f"offsets = {result.get('offsets')}")


def _run_heff_report(device, cfg, out):
    g = cfg["g"]
    if g is None:
        g = device.couplings.g(device.qubits[0].id, device.qubits[1].id)
    nu, delta = cfg["nu"], cfg["delta"]
    f = delta / nu
    eta = device.qubits[0].anharmonicity_eta
    report = floquet.effective_hamiltonian_anharmonic(g, f, nu, eta)
    two_level = floquet.effective_hamiltonian(
        floquet.harmonic_components(g, delta, nu))
    print(f"g = {g} MHz, delta = {delta} MHz, nu = {nu} MHz, eta = {eta} MHz")
    print(f"beta              = {report.beta:.5f}")
    print(f"kappa             = {report.kappa:.5f} MHz")
    print(f"kappa' = alpha+il = {report.kappa_prime.real:.5f} + "
          f"{report.kappa_prime.imag:.5f}i MHz")
    print(f"kappa + lambda/2  = {report.kappa_double:.5f} MHz")
    print(f"chi residual      = {two_level.chi_projection_residual:.3e}")
    experiments.write_csv(
        os.path.join(out, "heff_report.csv"),
        {"experiment": "heff_report", "g_mhz": g, "delta_mhz": delta,
         "nu_mhz": nu, "eta_mhz": eta},
        {"beta": [report.beta], "kappa_mhz": [report.kappa],
         "alpha_mhz": [report.kappa_prime.real],
         "lambda_mhz": [report.kappa_prime.imag],
         "kappa_double_mhz": [report.kappa_double],
         "chi_residual": [two_level.chi_projection_residual]})
    fs = np.linspace(0.2, 2.5, 120)
    svgplot.plot_lines(
        os.path.join(out, "heff_report.svg"), fs,
        {"beta(f)": [floquet.beta_series(x) for x in fs]},
        xlabel="f = delta/nu", ylabel="beta",
        title=f"second-order chirality series; operating point f = {f:.3f}")


def cmd_run(args) -> int:
    if args.experiment not in EXPERIMENTS:
        print(f"unknown experiment {args.experiment!r}; valid names: "
              f"{', '.join(EXPERIMENTS)}", file=sys.stderr)
        return 1
    cfg = _settings(args)
    device = _resolve_device(args.device)
    os.makedirs(args.out, exist_ok=True)
    if args.experiment == "scan_dphi":
        _run_scan_dphi(device, cfg, args.out)
    elif args.experiment == "scan_delta_single":
        _run_scan_delta(device, cfg, args.out)
    elif args.experiment == "chiral_single":
        _run_chiral(device, cfg, args.out, "single")
    elif args.experiment == "chiral_double":
        _run_chiral(device, cfg, args.out, "double")
    elif args.experiment == "calibrate":
        _run_calibrate(device, cfg, args.out)
    else:
        _run_heff_report(device, cfg, args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            from .acceptance import run_criteria
            return 0 if run_criteria(args.filter) else 1
        return cmd_run(args)
    except NUMERIC_ERRORS as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return 2
    except CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
