"""Bit-stable output writers for 1D profiles and 2D fields.

CSV carries 17-significant-digit decimal text so identical runs produce
byte-identical files.  2D fields can also be written as a legacy structured-
points text file readable by common visualization tools, or as raw
little-endian float64 arrays with a JSON sidecar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class OutputFrame:
    time: float
    coords: tuple  # (x,) for 1D; (x, y) for 2D
    names: tuple  # variable names
    values: tuple  # arrays matching names; 1D: (n,), 2D: (nx, ny)

    def __post_init__(self):
        for v in self.values:
            if not np.all(np.isfinite(v)):
                raise ValueError("output frame holds non-finite values")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_frame_1d(frame: OutputFrame, path) -> Path:
    path = Path(path)
    x = frame.coords[0]
    cols = [x, *frame.values]
    lines = ["x," + ",".join(frame.names)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_frame_2d(frame: OutputFrame, path, fmt: str = "grid-text") -> Path:
    path = Path(path)
    x, y = frame.coords
    nx, ny = len(x), len(y)
    if fmt == "csv":
        lines = ["x,y," + ",".join(frame.names)]
        for j in range(ny):
            for i in range(nx):
                vals = ",".join(_fmt(v[i, j]) for v in frame.values)
                lines.append(f"{_fmt(x[i])},{_fmt(y[j])},{vals}")
        path.write_text("\n".join(lines) + "\n")
        return path
    if fmt == "grid-text":
        dx = x[1] - x[0] if nx > 1 else 1.0
        dy = y[1] - y[0] if ny > 1 else 1.0
        lines = [
            "# vtk DataFile Version 3.0",
            f"wenokit frame t={_fmt(frame.time)}",
            "ASCII",
            "DATASET STRUCTURED_POINTS",
            f"DIMENSIONS {nx} {ny} 1",
            f"ORIGIN {_fmt(x[0])} {_fmt(y[0])} 0",
            f"SPACING {_fmt(dx)} {_fmt(dy)} 1",
            f"POINT_DATA {nx * ny}",
        ]
        for name, vals in zip(frame.names, frame.values):
            lines.append(f"SCALARS {name} double")
            lines.append("LOOKUP_TABLE default")
            # x varies fastest, per structured-points convention
            lines.extend(_fmt(vals[i, j]) for j in range(ny) for i in range(nx))
        path.write_text("\n".join(lines) + "\n")
        return path
    if fmt == "grid-bin":
        sidecar = {
            "time": frame.time,
            "dims": [nx, ny],
            "bounds": [float(x[0]), float(x[-1]), float(y[0]), float(y[-1])],
            "variables": list(frame.names),
            "dtype": "<f8",
            "order": "C (nx, ny) per variable, variables concatenated",
        }
        blob = b"".join(np.ascontiguousarray(v, dtype="<f8").tobytes() for v in frame.values)
        path.write_bytes(blob)
        Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=1) + "\n")
        return path
    raise ValueError(f"unknown 2D format {fmt!r}")


def read_frame_2d_bin(path):
    """Round-trip reader for the raw binary format; returns (sidecar, arrays)."""
    sidecar = json.loads(Path(str(path) + ".json").read_text())
    nx, ny = sidecar["dims"]
    raw = np.frombuffer(Path(path).read_bytes(), dtype="<f8")
    per = nx * ny
    arrays = [
        raw[k * per : (k + 1) * per].reshape(nx, ny).copy()
        for k in range(len(sidecar["variables"]))
    ]
    return sidecar, arrays
