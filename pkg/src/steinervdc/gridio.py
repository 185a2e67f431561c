"""Flat-file formats for grids: the text grid format, 8-bit PGM and profile CSV.

Text grid format::

    n L
    v_00 v_01 ... v_0,n-1      <- row 0, lowest y
    ...
    # key=value                <- optional trailing comment lines

Values are written with ``repr`` so a write/read round trip is bit-exact.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .grid import GridFunction, radial_profile


def format_grid(f: GridFunction, stanza: dict | None = None) -> str:
    lines = [f"{f.resolution} {f.half_width!r}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in f.values)
    for key, value in (stanza or {}).items():
        lines.append(f"# {key}={value}")
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> GridFunction:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty grid file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n L'")
    try:
        n, half_width = int(head[0]), float(head[1])
    except ValueError:
        raise ValueError(f"bad grid header {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:]):
        parts = ln.split()
        if len(parts) != n:
            raise ValueError(f"row {i} has {len(parts)} values, expected {n}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ValueError(f"row {i} holds a non-numeric value") from None
    return GridFunction(np.array(rows, dtype=np.float64), half_width)


def write_grid(path, f: GridFunction, stanza: dict | None = None):
    Path(path).write_text(format_grid(f, stanza))


def read_grid(path) -> GridFunction:
    return parse_grid(Path(path).read_text())


def format_pgm(f: GridFunction, stanza: dict | None = None) -> str:
    """ASCII PGM (P2), 8 bit, scaled so the grid maximum maps to 255.

    Image rows run top to bottom, so the highest ``y`` row comes first.
    """
    vmax = float(f.values.max())
    scale = 255.0 / vmax if vmax > 0 else 0.0
    pix = np.rint(f.values[::-1] * scale).astype(int)
    n = f.resolution
    out = ["P2", f"# scale: pixel = value * {scale!r} (max value {vmax!r} -> 255)"]
    out.extend(f"# {k}={v}" for k, v in (stanza or {}).items())
    out.append(f"{n} {n}")
    out.append("255")
    out.extend(" ".join(str(p) for p in row) for row in pix)
    return "\n".join(out) + "\n"


def write_pgm(path, f: GridFunction, stanza: dict | None = None):
    Path(path).write_text(format_pgm(f, stanza))


def format_profile_csv(f: GridFunction, stanza: dict | None = None) -> str:
    """Values along the radial fill order with their distance to the origin."""
    prof = radial_profile(f)
    out = [f"# {k}={v}" for k, v in (stanza or {}).items()]
    out.append("rank,distance,value")
    out.extend(f"{k},{r!r},{v!r}" for k, (r, v) in enumerate(zip(prof.distance.tolist(), prof.values.tolist())))
    return "\n".join(out) + "\n"
