#!/usr/bin/env python
from __future__ import annotations

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import pandas as pd

PRESET = os.environ.get("SMOKE_PRESET", "quasistatic-eff")


def run_cli(args: list[str], env: dict[str, str]) -> str:
    result = subprocess.run(
        [sys.executable, "-m", "spin_otto.cli", *args],
        check=True,
        env=env,
        capture_output=True,
        text=True,
    )
    return result.stdout


def main() -> None:
    with tempfile.TemporaryDirectory() as workdir:
        env = os.environ.copy()
        env["SPIN_OTTO_OUTPUT_DIR"] = workdir
        env.setdefault("SPIN_OTTO_THREADS", "1")

        cycle = json.loads(run_cli(["cycle", "--set", "tau=1"], env))
        if cycle["regime"] != "Engine" or abs(cycle["W"] + cycle["Q_H"] + cycle["Q_L"]) > 1e-8:
            raise RuntimeError(f"Smoke test failed: unexpected cycle {cycle}")

        summary = json.loads(run_cli(["preset", PRESET], env))
        csv_path = Path(summary["csv"])
        frame = pd.read_csv(csv_path)
        if frame.empty or summary["failed_points"]:
            raise RuntimeError(f"Smoke test failed: {csv_path} has {summary['failed_points']} failed points")
        if not Path(f"{csv_path}.json").is_file():
            raise RuntimeError("Smoke test failed: sidecar metadata missing")

        print("SMOKE OK")


if __name__ == "__main__":
    main()
