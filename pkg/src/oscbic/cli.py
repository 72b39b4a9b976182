"""Command-line surface: design reports, spectra, evolutions, confined-state
recipes, waveguide plans, and parallel parameter sweeps.

All computation runs in units of J = 1 unless the experiment command converts
to physical couplings. Exit codes: 0 success, 2 invalid parameters, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AnalysisError, ConfigurationError, NumericalError
from .lattice import classify_states, diagonalize, build_hamiltonian, uniform_lattice_config
from .spectral import (
    continuous_waveguide_comparison,
    design_oscillating_bic,
    emitter_probability_bic,
    non_markovianity,
    predict_boc,
)
from .dynamics import evolve, initial_atom_excited
from .bic_states import build_p_state
from .experiment import waveguide_parameters, with_imperfections
from .export import write_csv, write_json

SWEEP_OBSERVABLES = ("bic_prob", "boc_prob", "boc_energy", "nm_ratio")

# continuum states on a finite chain carry emitter weight up to ~2e-2 each at
# desk scale, so the CLI classifies BICs with a threshold above that floor
CLI_EPS_BIC = 0.05


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file of defaults; explicit flags win")
    parser.add_argument("--out", type=Path, default=Path("."), help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format (reports are always JSON)")
    parser.add_argument("--seedless", action="store_true",
                        help="reserved; every command is deterministic already")


def _add_design_args(parser: argparse.ArgumentParser) -> None:
    # required values are checked after config-file merging, not by argparse
    parser.add_argument("--M", type=int, default=None, help="number of coupling points")
    parser.add_argument("--n0", type=int, default=None, help="spacing between coupling points")
    parser.add_argument("--J", type=float, default=1.0, help="chain hopping strength")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscbic",
        description="Oscillating bound states in the continuum on a 1D photonic lattice",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = {}

    p = parser.subcommands["design"] = sub.add_parser(
        "design", help="analytic design report for a BIC pair"
    )
    _add_design_args(p)
    _add_common(p)

    p = parser.subcommands["spectrum"] = sub.add_parser("spectrum", help="diagonalize and classify the finite lattice")
    _add_design_args(p)
    p.add_argument("--N", type=int, default=2001, help="chain length")
    p.add_argument("--omega-a", type=float, default=0.0, help="atom detuning")
    p.add_argument("--rho0", type=float, default=None,
                   help="coupling strength; defaults to the designed value")
    p.add_argument("--eps-bic", type=float, default=CLI_EPS_BIC,
                   help="emitter-probability threshold for the BIC label")
    p.add_argument("--eps-boc", type=float, default=1e-9,
                   help="relative band-edge margin for the BOC label")
    _add_common(p)

    p = parser.subcommands["evolve"] = sub.add_parser("evolve", help="exact time evolution of the coupled system")
    _add_design_args(p)
    p.add_argument("--N", type=int, default=None, help="chain length (default: auto)")
    p.add_argument("--initial", choices=("atom", "p_state"), default="atom",
                   help="initial condition")
    p.add_argument("--tmax", type=float, default=15.0, help="final time in 1/J units")
    p.add_argument("--samples", type=int, default=2000, help="number of time samples")
    p.add_argument("--imperfection-ratio", type=float, default=0.0,
                   help="next-nearest imperfection ratio rho1/rho0 = J'/J")
    p.add_argument("--sites", choices=("coupling", "all", "none"), default="coupling",
                   help="which per-site probabilities to record")
    _add_common(p)

    p = parser.subcommands["bicstate"] = sub.add_parser("bicstate", help="confined-state initialization recipe")
    _add_design_args(p)
    p.add_argument("--N", type=int, default=None, help="chain length (default: auto)")
    _add_common(p)

    p = parser.subcommands["experiment"] = sub.add_parser("experiment", help="waveguide-array realization of a design")
    _add_design_args(p)
    p.add_argument("--zmax-mm", type=float, default=100.0, help="available waveguide length")
    p.add_argument("--periods", type=int, default=5, help="oscillation periods to fit")
    p.add_argument("--imperfection-ratio", type=float, default=0.0286,
                   help="measured next-nearest coupling ratio")
    _add_common(p)

    p = parser.subcommands["sweep"] = sub.add_parser("sweep", help="sweep the coupling-point spacing n0")
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--n0", type=str, default=None, metavar="START:STOP:STEP",
                   help="inclusive n0 range, e.g. 8:80:8")
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--observable", choices=SWEEP_OBSERVABLES, default=None)
    p.add_argument("--threads", type=int, default=1, help="parallel worker count")
    _add_common(p)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    try:
        file_values = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file {args.config}: {exc}")
    if not isinstance(file_values, dict):
        parser.error(f"config file {args.config} must hold a JSON object")
    known = set(vars(args))
    unknown = [k for k in file_values if k.replace("-", "_") not in known]
    if unknown:
        parser.error(f"config file has unknown keys: {unknown}")
    # re-parse with the file values as defaults so explicit flags keep priority
    fresh = build_parser()
    defaults = {k.replace("-", "_"): v for k, v in file_values.items()}
    fresh.subcommands[args.command].set_defaults(**defaults)
    reparsed = fresh.parse_args(argv)
    if isinstance(reparsed.out, str):
        reparsed.out = Path(reparsed.out)
    return reparsed


def _resolved(args: argparse.Namespace) -> dict:
    skip = {"config", "out"}
    out = {}
    for key, val in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = str(val) if isinstance(val, Path) else val
    return out


def _design_report(M: int, n0: int, J: float) -> dict:
    design = design_oscillating_bic(M, n0, J)
    report = dataclasses.asdict(design)
    report["period"] = design.period
    report["rho0_over_J"] = design.rho0 / J
    report["omega_bic_over_J"] = design.omega_bic / J
    if design.branch == "0 mod 4":
        report["nm_ratio_closed_form"] = non_markovianity(M, n0)
        report["boc"] = dataclasses.asdict(predict_boc(M, n0, J))
        report["continuous_waveguide"] = dataclasses.asdict(
            continuous_waveguide_comparison(M, n0, J)
        )
    return report


def _cmd_design(args) -> list[Path]:
    report = _design_report(args.M, args.n0, args.J)
    return [write_json(args.out / "design.json", report, _resolved(args))]


def _cmd_spectrum(args) -> list[Path]:
    rho0 = args.rho0
    if rho0 is None:
        rho0 = design_oscillating_bic(args.M, args.n0, args.J).rho0
    config, _ = uniform_lattice_config(
        args.M, args.n0, rho0, N=args.N, J=args.J, omega_a=args.omega_a
    )
    spectrum = diagonalize(build_hamiltonian(config))
    records = classify_states(spectrum, config, eps_boc=args.eps_boc, eps_bic=args.eps_bic)
    rows = [
        (i, r.energy, r.emitter_probability, r.kind)
        for i, r in enumerate(records)
    ]
    columns = ["index", "energy", "emitter_prob", "kind"]
    meta = _resolved(args) | {"rho0": rho0}
    if args.format == "json":
        data = [dict(zip(columns, row)) for row in rows]
        return [write_json(args.out / "spectrum.json", data, meta)]
    return [write_csv(args.out / "spectrum.csv", columns, rows, meta)]


def _cmd_evolve(args) -> list[Path]:
    design = design_oscillating_bic(args.M, args.n0, args.J)
    config, layout = uniform_lattice_config(
        args.M, args.n0, design.rho0, N=args.N, J=args.J, t_max=args.tmax
    )
    if args.imperfection_ratio:
        config = with_imperfections(config, args.imperfection_ratio)
    if args.initial == "atom":
        psi0 = initial_atom_excited(config)
    else:
        psi0, _ = build_p_state(design, config)
    if args.sites == "none":
        site_indices = None
    elif args.sites == "coupling":
        site_indices = np.arange(layout.sites[0], layout.sites[-1] + 1)
    else:
        site_indices = np.arange(1, config.N + 1)
    spectrum = diagonalize(build_hamiltonian(config))
    times = np.linspace(0.0, args.tmax, max(args.samples, 2))
    series = evolve(spectrum, psi0, times, config=config, site_indices=site_indices)
    columns = ["t", "prob_atom", "leakage"]
    if site_indices is not None:
        columns += [f"prob_site_{s}" for s in site_indices]
    rows = []
    for i, t in enumerate(series.times):
        row = [t, series.prob_atom[i], series.leakage[i]]
        if series.prob_sites is not None:
            row.extend(series.prob_sites[i])
        rows.append(row)
    meta = _resolved(args) | {"rho0": design.rho0, "N": config.N}
    if args.format == "json":
        data = [dict(zip(columns, row)) for row in rows]
        return [write_json(args.out / "timeseries.json", data, meta)]
    return [write_csv(args.out / "timeseries.csv", columns, rows, meta)]


def _cmd_bicstate(args) -> list[Path]:
    design = design_oscillating_bic(args.M, args.n0, args.J)
    config, _ = uniform_lattice_config(args.M, args.n0, design.rho0, N=args.N, J=args.J)
    _, table = build_p_state(design, config)
    columns = ["site", "re", "im", "amplitude", "phase"]
    rows = [(e.site, e.re, e.im, e.amplitude, e.phase) for e in table]
    meta = _resolved(args) | {"rho0": design.rho0, "N": config.N}
    if args.format == "json":
        data = [dict(zip(columns, row)) for row in rows]
        return [write_json(args.out / "pstate.json", data, meta)]
    return [write_csv(args.out / "pstate.csv", columns, rows, meta)]


def _cmd_experiment(args) -> list[Path]:
    design = design_oscillating_bic(args.M, args.n0, args.J)
    plan = waveguide_parameters(
        design, args.zmax_mm, n_periods=args.periods,
        imperfection_ratio=args.imperfection_ratio,
    )
    data = dataclasses.asdict(plan)
    data["jz_horizon"] = plan.jz_horizon
    data["design"] = dataclasses.asdict(design)
    return [write_json(args.out / "plan.json", data, _resolved(args))]


def _parse_range(spec: str) -> list[int]:
    try:
        start, stop, step = (int(tok) for tok in spec.split(":"))
    except ValueError as exc:
        raise ConfigurationError(
            f"range must look like START:STOP:STEP, got {spec!r}"
        ) from exc
    if step <= 0 or stop < start:
        raise ConfigurationError(f"bad range {spec!r}")
    return list(range(start, stop + 1, step))


def sweep_point(observable: str, M: int, n0: int, J: float) -> float:
    """Observable value at one sweep point; used by the parallel runner."""
    if observable == "bic_prob":
        return emitter_probability_bic(M, n0)
    if observable == "boc_prob":
        return predict_boc(M, n0, J).emitter_probability
    if observable == "boc_energy":
        return predict_boc(M, n0, J).energies[0]
    if observable == "nm_ratio":
        return non_markovianity(M, n0)
    raise ConfigurationError(f"unknown observable {observable!r}")


def _cmd_sweep(args) -> list[Path]:
    points = _parse_range(args.n0)
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            values = list(pool.map(sweep_point, [args.observable] * len(points),
                                   [args.M] * len(points), points,
                                   [args.J] * len(points)))
    else:
        values = [sweep_point(args.observable, args.M, n0, args.J) for n0 in points]
    rows = sorted(zip(points, values))
    columns = ["n0", args.observable]
    meta = _resolved(args)
    if args.format == "json":
        data = [dict(zip(columns, row)) for row in rows]
        return [write_json(args.out / "sweep.json", data, meta)]
    return [write_csv(args.out / "sweep.csv", columns, rows, meta)]


_COMMANDS = {
    "design": _cmd_design,
    "spectrum": _cmd_spectrum,
    "evolve": _cmd_evolve,
    "bicstate": _cmd_bicstate,
    "experiment": _cmd_experiment,
    "sweep": _cmd_sweep,
}


_REQUIRED = {
    "design": ("M", "n0"),
    "spectrum": ("M", "n0"),
    "evolve": ("M", "n0"),
    "bicstate": ("M", "n0"),
    "experiment": ("M", "n0"),
    "sweep": ("M", "n0", "observable"),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _apply_config_file(parser, list(sys.argv[1:] if argv is None else argv))
    missing = [name for name in _REQUIRED[args.command] if getattr(args, name) is None]
    if missing:
        print(f"oscbic {args.command}: missing required parameters: "
              + ", ".join(f"--{m}" for m in missing), file=sys.stderr)
        return 2
    args.out.mkdir(parents=True, exist_ok=True)
    try:
        paths = _COMMANDS[args.command](args)
    except (ConfigurationError, ValueError) as exc:
        print(f"oscbic: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, AnalysisError) as exc:
        print(f"oscbic: numerical failure: {exc}", file=sys.stderr)
        return 3
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
