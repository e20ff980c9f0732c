"""Field and increment lattices with their on-disk formats.

Binary layout (little-endian)::

    8 bytes   magic  b"FRACPVG1"
    4 bytes   uint32 d
    4 bytes   uint32 n
    4 bytes   uint32 kind   (0 = field on {0..n}^d, 1 = increments on {0..n-1}^d)
    4 bytes   uint32 length of the JSON meta block
    ...       UTF-8 JSON meta
    ...       float64 values, row-major (C order)
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = ["FieldGrid", "IncrementGrid", "read_grid", "coarsen_increments"]

MAGIC = b"FRACPVG1"
_HEADER = struct.Struct("<8sIIII")


def _jsonable(meta):
    out = {}
    for k, v in meta.items():
        if isinstance(v, np.generic):
            v = v.item()
        elif isinstance(v, np.ndarray):
            v = v.tolist()
        out[k] = v
    return out


@dataclass(frozen=True)
class _Grid:
    d: int
    n: int
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    kind_code = -1
    extent = 0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        expected = (self.n + self.extent,) * self.d
        if vals.shape != expected:
            raise ParameterError(f"expected grid shape {expected}, got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ParameterError("grid values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def scaled(self, c):
        return type(self)(self.d, self.n, c * self.values, dict(self.meta))

    def __add__(self, other):
        if (self.d, self.n) != (other.d, other.n):
            raise ParameterError("grids of different geometry")
        return type(self)(self.d, self.n, self.values + other.values, dict(self.meta))

    def to_bytes(self):
        meta = json.dumps(_jsonable(self.meta), sort_keys=True).encode()
        head = _HEADER.pack(MAGIC, self.d, self.n, self.kind_code, len(meta))
        body = np.ascontiguousarray(self.values, dtype="<f8").tobytes()
        return head + meta + body

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    def to_csv(self, path=None, max_entries=1_000_000):
        """Rows of (index_1, ..., index_d, value)."""
        if self.values.size > max_entries:
            raise ParameterError("grid too large for CSV; use the binary format")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"i{j + 1}" for j in range(self.d)] + ["value"])
        for idx in itertools.product(*[range(s) for s in self.values.shape]):
            w.writerow(list(idx) + [repr(float(self.values[idx]))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


class FieldGrid(_Grid):
    """Samples X(i/n), i in {0..n}^d."""

    kind_code = 0
    extent = 1


class IncrementGrid(_Grid):
    """Rectangular increments Delta_{1/n} X(i/n), i in {0..n-1}^d."""

    kind_code = 1
    extent = 0


def read_grid(data):
    """Decode bytes (or a path) written by ``to_bytes``/``save``."""
    if not isinstance(data, (bytes, bytearray, memoryview)):
        with open(data, "rb") as fh:
            data = fh.read()
    magic, d, n, kind, mlen = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise ParameterError("not a grid file")
    off = _HEADER.size
    meta = json.loads(data[off:off + mlen].decode())
    off += mlen
    cls = FieldGrid if kind == 0 else IncrementGrid
    shape = (n + cls.extent,) * d
    vals = np.frombuffer(data, dtype="<f8", count=int(np.prod(shape)), offset=off).reshape(shape)
    return cls(d, n, vals.astype(float), meta)


def coarsen_increments(inc, factor):
    """Increments at mesh ``factor/n`` by summing blocks of fine increments.

    Rectangular increments are additive over a partition of a rectangle, so
    the coarse lattice of the same path is exact.
    """
    if inc.n % factor:
        raise ParameterError("factor must divide n")
    m = inc.n // factor
    v = inc.values
    shape = []
    for _ in range(inc.d):
        shape += [m, factor]
    v = v.reshape(shape).sum(axis=tuple(range(1, 2 * inc.d, 2)))
    meta = dict(inc.meta)
    meta["coarsened_from"] = inc.n
    return IncrementGrid(inc.d, m, v, meta)
