"""Readers for the simulator's interchange formats.

Deliberately independent of the simulator package: these scripts consume
only the documented file formats.

Trajectory CSV header (exact):
    t,E_kin,E_elastic,E_penalty,E_total,D_visc,D_rot,A,norm_v_H1,norm_d_H2,residual
Separation CSV header (exact): t,S
Snapshot: magic "NLC1", uint32-le grid n, float64-le time, then four n x n
row-major float64-le arrays (v_x, v_y, d_x, d_y).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = [
    "t",
    "E_kin",
    "E_elastic",
    "E_penalty",
    "E_total",
    "D_visc",
    "D_rot",
    "A",
    "norm_v_H1",
    "norm_d_H2",
    "residual",
]
SEPARATION_COLUMNS = ["t", "S"]
SNAPSHOT_MAGIC = b"NLC1"


def _read_csv(path, required):
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].split(",")
    for name in required:
        if name not in header:
            raise ValueError(f"{path}: missing column {name!r}")
    if header != required:
        raise ValueError(f"{path}: unexpected column order {header}")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if data.ndim != 2 or data.shape[1] != len(required):
        raise ValueError(f"{path}: wrong column count")
    return {name: data[:, i] for i, name in enumerate(required)}


def read_trajectory(path) -> dict[str, np.ndarray]:
    return _read_csv(path, TRAJECTORY_COLUMNS)


def read_separation(path) -> dict[str, np.ndarray]:
    return _read_csv(path, SEPARATION_COLUMNS)


def read_snapshot(path):
    """Returns (n, t, v_x, v_y, d_x, d_y)."""
    raw = Path(path).read_bytes()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: bad snapshot magic {raw[:4]!r}")
    (n,) = struct.unpack("<I", raw[4:8])
    (t,) = struct.unpack("<d", raw[8:16])
    expected = 16 + 4 * n * n * 8
    if len(raw) != expected:
        raise ValueError(f"{path}: wrong size {len(raw)}, expected {expected}")
    fields = np.frombuffer(raw[16:], dtype="<f8").reshape(4, n, n)
    return int(n), float(t), fields[0], fields[1], fields[2], fields[3]
