"""Bit-exact persistence: trajectory CSV, binary field snapshots, report CSV.

Trajectory CSV schema (header exactly, full double precision):
    t,E_kin,E_elastic,E_penalty,E_total,D_visc,D_rot,A,norm_v_H1,norm_d_H2,residual

Snapshot layout: magic "NLC1", unsigned 32-bit little-endian grid n, 64-bit
float time, then four n x n row-major little-endian float64 arrays in the
order v_x, v_y, d_x, d_y.

Separation traces (continuous-dependence artifact) use the two-column
schema: t,S
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .integrator import Trajectory
from .model import State
from .spectral import GridSpec, VectorField2

CSV_HEADER = "t,E_kin,E_elastic,E_penalty,E_total,D_visc,D_rot,A,norm_v_H1,norm_d_H2,residual"
SNAPSHOT_MAGIC = b"NLC1"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def trajectory_csv_lines(traj: Trajectory) -> list[str]:
    lines = [CSV_HEADER]
    for r in traj.rows:
        e = r.energy
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.t,
                    e.kinetic,
                    e.elastic,
                    e.penalty,
                    e.total,
                    e.visc_dissipation,
                    e.rot_dissipation,
                    e.quantity_a,
                    r.norm_v_h1,
                    r.norm_d_h2,
                    r.residual,
                )
            )
        )
    return lines


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    Path(path).write_text("\n".join(trajectory_csv_lines(traj)) + "\n")


def read_trajectory_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Columns keyed by header name; raises on schema mismatch."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: not a trajectory CSV (bad header)")
    names = CSV_HEADER.split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    if data.size == 0:
        data = data.reshape(0, len(names))
    if data.shape[1] != len(names):
        raise ValueError(f"{path}: wrong column count")
    return {name: data[:, i] for i, name in enumerate(names)}


def write_snapshot(state: State, path: str | Path) -> None:
    n = state.grid.n
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<I", n))
        fh.write(struct.pack("<d", state.t))
        for arr in (state.v.x.values, state.v.y.values, state.d.x.values, state.d.y.values):
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_snapshot(path: str | Path) -> State:
    raw = Path(path).read_bytes()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: bad snapshot magic")
    (n,) = struct.unpack("<I", raw[4:8])
    (t,) = struct.unpack("<d", raw[8:16])
    expected = 16 + 4 * n * n * 8
    if len(raw) != expected:
        raise ValueError(f"{path}: truncated snapshot ({len(raw)} bytes, expected {expected})")
    fields = np.frombuffer(raw[16:], dtype="<f8").reshape(4, n, n).astype(np.float64)
    grid = GridSpec(int(n))
    return State(
        VectorField2.from_arrays(grid, fields[0], fields[1]),
        VectorField2.from_arrays(grid, fields[2], fields[3]),
        t,
    )


def write_report_csv(report, path: str | Path) -> None:
    lines = ["experiment,digest,finding,value,tolerance,passed"]
    for f in report.findings:
        passed = "" if f.passed is None else str(f.passed).lower()
        tol = f.tolerance.replace(",", ";")
        lines.append(f"{report.name},{report.digest},{f.name},{_fmt(f.value)},{tol},{passed}")
    lines.append(f"{report.name},{report.digest},overall,{1.0 if report.passed else 0.0:.0f},PASS iff all judged findings pass,{str(report.passed).lower()}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_separation_csv(path: str | Path, t: np.ndarray, s: np.ndarray) -> None:
    lines = ["t,S"]
    for ti, si in zip(t, s):
        lines.append(f"{_fmt(ti)},{_fmt(si)}")
    Path(path).write_text("\n".join(lines) + "\n")
