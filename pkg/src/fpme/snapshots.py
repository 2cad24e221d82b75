"""FPM1 snapshot files.

One ASCII header line

    FPM1 dim=<d> n=<N> L=<decimal> t=<decimal>

terminated by a newline, followed by N**d float64 values, little-endian,
row-major over the axes.  Writing and re-reading is bit-exact.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import ParseError
from .grid import Grid, RealField

__all__ = ["write_snapshot", "read_snapshot"]

_MAGIC = "FPM1"


def write_snapshot(path: str | os.PathLike, field: RealField, t: float) -> None:
    g = field.grid
    header = f"{_MAGIC} dim={g.dim} n={g.n_points} L={g.side_length!r} t={float(t)!r}\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(field.values).astype("<f8").tobytes())


def read_snapshot(path: str | os.PathLike) -> tuple[RealField, float]:
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii").rstrip("\n")
        parts = header.split()
        if not parts or parts[0] != _MAGIC:
            raise ParseError(f"not an {_MAGIC} file: {path}")
        kv = dict(p.split("=", 1) for p in parts[1:])
        try:
            dim = int(kv["dim"])
            n = int(kv["n"])
            L = float(kv["L"])
            t = float(kv["t"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"malformed {_MAGIC} header: {header!r}") from exc
        grid = Grid(dim, n, L)
        raw = fh.read(grid.size * 8)
        if len(raw) != grid.size * 8:
            raise ParseError(f"truncated {_MAGIC} payload in {path}")
        values = np.frombuffer(raw, dtype="<f8").reshape(grid.shape)
    return RealField(grid, values), t
