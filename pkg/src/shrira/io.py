"""Bit-exact field persistence: JSON header line + raw little-endian payload.

Layout: the first line of the file is a one-line UTF-8 JSON header
{format_version, nx, ny, lx, ly, c, m, created, producer} terminated by a
newline; the remaining 8*nx*ny bytes are IEEE-754 float64 little-endian
samples, row-major with x fastest, in physical order (x from -lx/2, y from
-ly/2).  See docs/formats.md.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

import numpy as np

from .grid import Field, Grid
from .errors import CorruptFieldFileError

FORMAT_VERSION = 1
_HEADER_KEYS = ("format_version", "nx", "ny", "lx", "ly", "c", "m", "created", "producer")


def write_field(path, field: Field, meta: dict) -> None:
    """Write a field; meta must carry c and m, may override created/producer."""
    g = field.grid
    header = {
        "format_version": FORMAT_VERSION,
        "nx": g.nx,
        "ny": g.ny,
        "lx": g.lx,
        "ly": g.ly,
        "c": float(meta["c"]),
        "m": float(meta["m"]),
        "created": meta.get("created") or datetime.now(timezone.utc).isoformat(),
        "producer": meta.get("producer", "shrira"),
    }
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(json.dumps(header).encode("utf-8"))
        fh.write(b"\n")
        fh.write(payload)


def read_field(path):
    """Read a field file; returns (Field, header dict)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    nl = raw.find(b"\n")
    if nl < 0:
        raise CorruptFieldFileError(f"{path}: missing header line")
    try:
        header = json.loads(raw[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFieldFileError(f"{path}: unreadable header ({exc})") from exc
    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise CorruptFieldFileError(f"{path}: header lacks keys {missing}")
    if header["format_version"] != FORMAT_VERSION:
        raise CorruptFieldFileError(
            f"{path}: unsupported format_version {header['format_version']}"
        )
    nx, ny = int(header["nx"]), int(header["ny"])
    payload = raw[nl + 1 :]
    if len(payload) != 8 * nx * ny:
        raise CorruptFieldFileError(
            f"{path}: payload is {len(payload)} bytes, header implies {8 * nx * ny}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(ny, nx).astype(np.float64)
    grid = Grid(nx=nx, ny=ny, lx=float(header["lx"]), ly=float(header["ly"]))
    return Field(grid, values), header
