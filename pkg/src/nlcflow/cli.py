"""Command-line front end.

Subcommands: run, audit, perturb, absorb, smooth, equilibrate, mms.
Common flags: --config <path>, --out <dir>, --seed <int>, --quiet.
Exit statuses: 0 success/PASS, 1 error/FAIL, 2 inconclusive, 3 blow-up.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, RunConfig, experiment_section, parse_config
from .experiments import (
    PerturbationSpec,
    continuous_dependence,
    dissipativity_ensemble,
    energy_audit,
    equilibrate,
    mms_convergence,
    smoothing_ratio,
)
from .integrator import StepperConfig, TimeStepError, simulate
from .io import (
    write_report_csv,
    write_separation_csv,
    write_snapshot,
    write_trajectory_csv,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_BLOWUP = 3


def _say(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg)


def _summary(report) -> str:
    judged = [f for f in report.findings if f.passed is not None]
    ok = sum(1 for f in judged if f.passed)
    verdict = "PASS" if report.passed else "FAIL"
    line = f"{verdict}: {report.name} ({ok}/{len(judged)} judged findings ok)"
    if not report.passed:
        for f in judged:
            if not f.passed:
                line += f"; first failure: {f.name}={f.value:g} wanted {f.tolerance}"
                break
    return line


def _finish(report, out_dir: Path, quiet: bool) -> int:
    path = out_dir / f"{report.name}_report.csv"
    write_report_csv(report, path)
    report.artifacts.append(str(path))
    print(_summary(report))
    _say(quiet, f"report: {path}")
    return EXIT_OK if report.passed else EXIT_ERROR


def cmd_run(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    params = config.model_params()
    state = config.build_initial_state()
    stepper = StepperConfig(
        dt=config.dt,
        t_end=config.t_end,
        cfl_safety=config.cfl_safety,
        sample_every=config.output.sample_every,
        snapshot_every=config.output.snapshot_every,
    )
    traj = simulate(state, params, stepper)
    csv_path = out_dir / config.output.csv_path
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(traj, csv_path)
    _say(quiet, f"wrote {len(traj.rows)} rows to {csv_path}")
    if config.output.snapshot_every > 0:
        snap_dir = out_dir / config.output.snapshot_dir
        snap_dir.mkdir(parents=True, exist_ok=True)
        for i, (t, snap_state) in enumerate(traj.snapshots):
            step_index = i * config.output.snapshot_every
            write_snapshot(snap_state, snap_dir / f"snapshot_{step_index:08d}.nlc")
        _say(quiet, f"wrote {len(traj.snapshots)} snapshots to {snap_dir}")
    for event in traj.events:
        _say(quiet, f"event: {event}")
    if traj.blown_up:
        print(f"blow-up: fields became non-finite near t={traj.rows[-1].t:g}")
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_audit(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(
        config,
        "audit",
        {"max_residual_tol": 1e-4, "reduction_factor": 3.0, "monotonicity_scale": 1e-8},
    )
    params = config.model_params()
    state = config.build_initial_state()

    def run(dt):
        stepper = StepperConfig(
            dt=dt,
            t_end=config.t_end,
            cfl_safety=config.cfl_safety,
            sample_every=config.output.sample_every,
        )
        return simulate(state, params, stepper)

    base = run(config.dt)
    halved = run(config.dt / 2.0)
    if base.blown_up or halved.blown_up:
        print("blow-up during audit run")
        return EXIT_BLOWUP
    report = energy_audit(
        base,
        params,
        halved=halved,
        max_residual_tol=section["max_residual_tol"],
        reduction_factor=section["reduction_factor"],
        monotonicity_scale=section["monotonicity_scale"],
    )
    write_trajectory_csv(base, out_dir / "audit_run.csv")
    write_trajectory_csv(halved, out_dir / "audit_run_halved_dt.csv")
    report.artifacts += [str(out_dir / "audit_run.csv"), str(out_dir / "audit_run_halved_dt.csv")]
    return _finish(report, out_dir, quiet)


def cmd_perturb(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(
        config,
        "perturb",
        {
            "epsilon": 1e-5,
            "epsilon_alt": 1e-6,
            "band": 1,
            "target": "both",
            "pert_seed": 7,
            "horizon": 2.0,
            "samples": 60,
        },
    )
    params = config.model_params()
    base = config.build_initial_state()
    pert = PerturbationSpec(
        seed=int(section["pert_seed"]),
        amplitude=float(section["epsilon"]),
        band=int(section["band"]),
        target=section["target"],
    )
    trace: dict = {}
    try:
        report = continuous_dependence(
            base, pert, params, section["horizon"], samples=int(section["samples"]), trace_out=trace
        )
        if section["epsilon_alt"] and section["epsilon"]:
            alt = continuous_dependence(
                base,
                replace(pert, amplitude=float(section["epsilon_alt"])),
                params,
                section["horizon"],
                samples=int(section["samples"]),
            )
            slope = report.finding("log_separation_slope").value
            slope_alt = alt.finding("log_separation_slope").value
            dev = abs(slope - slope_alt) / max(abs(slope), 1e-300)
            report.add("slope_deviation_across_eps", dev, "<= 0.1", dev <= 0.10)
            report.finalize()
    except RuntimeError as exc:
        print(f"blow-up: {exc}")
        return EXIT_BLOWUP
    if trace:
        sep_path = out_dir / "separation.csv"
        write_separation_csv(sep_path, trace["t"], trace["s"])
        report.artifacts.append(str(sep_path))
        _say(quiet, f"separation trace: {sep_path}")
    return _finish(report, out_dir, quiet)


def cmd_absorb(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(
        config,
        "absorb",
        {
            "radii": [1.0, 10.0, 100.0],
            "horizon": 20.0,
            "band": None,
            "tail_fraction": 0.2,
            "spread_limit": 2.0,
            "seg_len": 0.25,
        },
    )
    params = config.model_params()
    report = dissipativity_ensemble(
        [float(r) for r in section["radii"]],
        params,
        float(section["horizon"]),
        grid_n=config.grid_n,
        seed=config.seed,
        band=None if section["band"] is None else int(section["band"]),
        tail_fraction=float(section["tail_fraction"]),
        spread_limit=float(section["spread_limit"]),
        seg_len=float(section["seg_len"]),
    )
    return _finish(report, out_dir, quiet)


def cmd_smooth(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(
        config,
        "smooth",
        {
            "epsilons": [1e-6, 1e-5, 1e-4],
            "band": 2,
            "target": "director",
            "pert_seed": 3,
            "equil_time": 10.0,
            "equil_threshold": 1e-3,
            "window": 1.0,
            "spread_limit": 2.0,
        },
    )
    params = config.model_params()
    pairs = [
        PerturbationSpec(
            seed=int(section["pert_seed"]),
            amplitude=float(eps),
            band=int(section["band"]),
            target=section["target"],
        )
        for eps in section["epsilons"]
    ]
    try:
        report = smoothing_ratio(
            pairs,
            params,
            grid_n=config.grid_n,
            equil_time=float(section["equil_time"]),
            equil_threshold=float(section["equil_threshold"]),
            window=float(section["window"]),
            spread_limit=float(section["spread_limit"]),
        )
    except RuntimeError as exc:
        print(f"error: {exc}")
        return EXIT_ERROR
    return _finish(report, out_dir, quiet)


def cmd_equilibrate(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(config, "equilibrate", {"tol": 1e-6, "t_max": 50.0})
    params = config.model_params()
    state = config.build_initial_state()
    report = equilibrate(state, params, tol=float(section["tol"]), t_max=float(section["t_max"]))
    path = out_dir / f"{report.name}_report.csv"
    write_report_csv(report, path)
    report.artifacts.append(str(path))
    try:
        blown = report.finding("blown_up").value == 1.0
    except KeyError:
        blown = False
    if blown:
        print(f"blow-up: {report.name}")
        return EXIT_BLOWUP
    converged = report.finding("converged").value == 1.0
    verdict = "PASS" if converged else "INCONCLUSIVE"
    print(
        f"{verdict}: equilibrate (t_converged={report.finding('t_converged').value:g}, "
        f"stationarity residual={report.finding('final_stationarity_residual').value:g})"
    )
    _say(quiet, f"report: {path}")
    return EXIT_OK if converged else EXIT_INCONCLUSIVE


def cmd_mms(config: RunConfig, out_dir: Path, quiet: bool) -> int:
    section = experiment_section(
        config,
        "mms",
        {"dt_list": [1e-3, 5e-4], "n_list": [32, 64], "t_end": 0.5, "amplitude": 0.1},
    )
    params = config.model_params()
    report = mms_convergence(
        params,
        [float(dt) for dt in section["dt_list"]],
        [int(n) for n in section["n_list"]],
        t_end=float(section["t_end"]),
        amplitude=float(section["amplitude"]),
    )
    return _finish(report, out_dir, quiet)


COMMANDS = {
    "run": cmd_run,
    "audit": cmd_audit,
    "perturb": cmd_perturb,
    "absorb": cmd_absorb,
    "smooth": cmd_smooth,
    "equilibrate": cmd_equilibrate,
    "mms": cmd_mms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlcflow",
        description="Pseudo-spectral simulator for the 2D periodic nematic liquid-crystal flow system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress informational output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](config, out_dir, args.quiet)
    except (ConfigError, TimeStepError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
