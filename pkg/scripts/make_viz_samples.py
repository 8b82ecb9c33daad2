#!/usr/bin/env python3
"""Regenerate the sample outputs bundled with the viz scripts.

Produces, under viz/samples/:
  tg_run.csv               decaying Taylor-Green run (energy-decay figure)
  separation.csv           perturbation separation trace (separation figure)
  snapshots/...nlc         Taylor-Green and winding-director snapshots
Everything is produced through the CLI so the samples exercise the exact
interchange formats.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from nlcflow.cli import main as cli_main  # noqa: E402

SAMPLES = ROOT / "viz" / "samples"

TG_RUN = {
    "grid_n": 32,
    "dt": 2e-4,
    "t_end": 0.2,
    "alpha": 0.5,
    "eta": 1.0,
    "nu": 0.05,
    "lambda": 0.0,
    "init": {"type": "taylor_green", "amplitude": 1.0},
    "output": {
        "csv_path": "tg_run.csv",
        "sample_every": 20,
        "snapshot_every": 500,
        "snapshot_dir": "snapshots",
    },
}

PERTURB = {
    "grid_n": 32,
    "dt": 1e-3,
    "t_end": 0.0,
    "alpha": 0.0,
    "eta": 1.0,
    "nu": 0.1,
    "lambda": 0.01,
    "gamma": 0.1,
    "init": {"type": "zero"},
    "perturb": {"epsilon": 1e-5, "epsilon_alt": 0.0, "band": 1, "horizon": 2.0},
}

MODE_DIRECTOR = {
    "grid_n": 32,
    "dt": 1e-3,
    "t_end": 0.0,
    "alpha": 0.5,
    "eta": 1.0,
    "init": {"type": "mode_director", "m": 1, "n": 0},
    "output": {
        "csv_path": "mode_run.csv",
        "snapshot_every": 1,
        "snapshot_dir": "mode_snapshots",
    },
}


def run(config: dict, command: str, out_dir: Path) -> None:
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(config, fh)
        cfg_path = fh.name
    status = cli_main([command, "--config", cfg_path, "--out", str(out_dir), "--quiet"])
    if status != 0:
        raise SystemExit(f"{command} failed with exit status {status}")


def main():
    SAMPLES.mkdir(parents=True, exist_ok=True)
    run(TG_RUN, "run", SAMPLES)
    (SAMPLES / "snapshots" / "snapshot_00000000.nlc").rename(SAMPLES / "tg_snapshot.nlc")
    shutil.rmtree(SAMPLES / "snapshots")

    run(MODE_DIRECTOR, "run", SAMPLES)
    (SAMPLES / "mode_snapshots" / "snapshot_00000000.nlc").rename(
        SAMPLES / "mode_director_snapshot.nlc"
    )
    shutil.rmtree(SAMPLES / "mode_snapshots")
    (SAMPLES / "mode_run.csv").unlink()

    run(PERTURB, "perturb", SAMPLES)
    (SAMPLES / "continuous_dependence_report.csv").unlink()

    print(f"samples written to {SAMPLES}")


if __name__ == "__main__":
    main()
