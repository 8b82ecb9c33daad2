#!/usr/bin/env python3
"""Drive every CLI experiment with the bundled configs.

Usage: run_all_experiments.py [OUT_DIR]

Runs the Taylor-Green reference run plus all six experiment subcommands,
collecting artifacts under OUT_DIR (default ./experiment_output). The full
sweep takes a few minutes; the absorbing-set ensemble dominates.
"""

import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from nlcflow.cli import main as cli_main  # noqa: E402

JOBS = [
    ("run", "taylor_green.json"),
    ("audit", "audit.json"),
    ("perturb", "perturb.json"),
    ("absorb", "absorb.json"),
    ("smooth", "smooth.json"),
    ("equilibrate", "equilibrate.json"),
    ("mms", "mms.json"),
]


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("experiment_output")
    failures = 0
    for command, config in JOBS:
        cfg = ROOT / "configs" / config
        print(f"== nlcflow {command} --config {cfg.name}")
        start = time.perf_counter()
        status = cli_main([command, "--config", str(cfg), "--out", str(out_dir / command)])
        print(f"   exit {status} in {time.perf_counter() - start:.1f}s")
        failures += status not in (0,)
    print(f"done: {len(JOBS) - failures}/{len(JOBS)} commands succeeded")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
