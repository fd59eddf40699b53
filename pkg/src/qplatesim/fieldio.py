"""Binary field dumps (``.qpsf``).

Little-endian layout::

    b"QPSF"            magic
    u32                n
    f64                half_width
    f64[n*n*2]         vx, row-major, interleaved (re, im)
    f64[n*n*2]         vy, same
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import Grid, VectorField

MAGIC = b"QPSF"
_HEADER = struct.Struct("<4sId")


def dumps(field: VectorField) -> bytes:
    g = field.grid
    head = _HEADER.pack(MAGIC, g.n, g.half_width)
    body = b"".join(np.ascontiguousarray(c, dtype="<c16").tobytes() for c in field.components)
    return head + body


def loads(data: bytes) -> VectorField:
    if len(data) < _HEADER.size:
        raise ValueError("truncated QPSF header")
    magic, n, half_width = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}, expected {MAGIC!r}")
    count = n * n
    need = _HEADER.size + 2 * count * 16
    if len(data) != need:
        raise ValueError(f"QPSF payload has {len(data)} bytes, expected {need}")
    comps = np.frombuffer(data, dtype="<c16", count=2 * count, offset=_HEADER.size)
    vx = comps[:count].reshape(n, n)
    vy = comps[count:].reshape(n, n)
    return VectorField(Grid(n, half_width), vx, vy)


def write_field(path, field: VectorField) -> None:
    Path(path).write_bytes(dumps(field))


def read_field(path) -> VectorField:
    return loads(Path(path).read_bytes())
