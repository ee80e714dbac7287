"""Writing and reading phase-space fields.

Two formats:

* CSV with header ``re_alpha,im_alpha,value``, one row per sample, rows
  ordered with ``Re(alpha)`` outermost, values printed with 17 significant
  digits so doubles round-trip exactly.
* PSF1 binary, little-endian: magic ``b"PSF1"``, ``u32 nx``, ``u32 ny``,
  ``f64 R``, ``f64 order``, then ``nx * ny`` ``f64`` samples in C order.
"""

from __future__ import annotations

import io
import struct
from pathlib import Path

import numpy as np

from .engine import PhaseGrid, PhaseSpaceField
from .errors import ConfigError

__all__ = ["write_csv", "read_csv", "write_binary", "read_binary", "CSV_HEADER", "MAGIC"]

CSV_HEADER = "re_alpha,im_alpha,value"
MAGIC = b"PSF1"
_HEADER = struct.Struct("<4sIIdd")


def _real_values(field: PhaseSpaceField) -> np.ndarray:
    v = np.asarray(field.values)
    if np.iscomplexobj(v):
        v = v.real
    return np.ascontiguousarray(v, dtype="<f8")


def write_csv(field: PhaseSpaceField, path) -> Path:
    path = Path(path)
    x = field.grid.axis
    re, im = np.meshgrid(x, x, indexing="ij")
    table = np.column_stack([re.ravel(), im.ravel(), _real_values(field).ravel()])
    buf = io.StringIO()
    np.savetxt(buf, table, fmt="%.17g", delimiter=",", header=CSV_HEADER, comments="")
    path.write_text(buf.getvalue())
    return path


def read_csv(path, order: float = 0.0, state_tag: str = "") -> PhaseSpaceField:
    """Load a CSV field; the ordering is not stored in the file and is passed in."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ConfigError(f"{path}: expected header {CSV_HEADER!r}, got {header!r}")
        table = np.loadtxt(fh, delimiter=",", ndmin=2)
    n = int(round(np.sqrt(len(table))))
    if n * n != len(table):
        raise ConfigError(f"{path}: {len(table)} rows do not form a square grid")
    axis = table[::n, 0]
    grid = PhaseGrid(float(axis[-1] + (axis[1] - axis[0]) / 2), n)
    return PhaseSpaceField(grid, table[:, 2].reshape(n, n), order, state_tag, {"source": str(path)})


def write_binary(field: PhaseSpaceField, path) -> Path:
    path = Path(path)
    n = field.grid.points
    with path.open("wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, n, field.grid.half_extent, float(field.order)))
        fh.write(_real_values(field).tobytes(order="C"))
    return path


def read_binary(path, state_tag: str = "") -> PhaseSpaceField:
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise ConfigError(f"{path}: file too short for a PSF1 header")
    magic, nx, ny, half_extent, order = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ConfigError(f"{path}: bad magic {magic!r}")
    if nx != ny:
        raise ConfigError(f"{path}: only square grids are supported, got {nx}x{ny}")
    payload = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if payload.size != nx * ny:
        raise ConfigError(f"{path}: expected {nx * ny} samples, found {payload.size}")
    values = payload.reshape(nx, ny).astype(float)
    return PhaseSpaceField(PhaseGrid(half_extent, nx), values, order, state_tag, {"source": str(path)})
