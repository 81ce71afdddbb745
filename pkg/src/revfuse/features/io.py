"""RFE1 binary feature files and CSV export.

Layout: ``b"RFE1"``, u8 kind code, u32 LE frame count, u32 LE dim, then a
frame-major float32 LE payload.
"""

import struct

import numpy as np

from ..exceptions import FileFormatError
from ._base import FeatureKind, FeatureMatrix

MAGIC = b"RFE1"
_HEADER = struct.Struct("<4sBII")


def write_rfe1(path, features):
    rows = np.ascontiguousarray(features.rows, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, int(features.kind), rows.shape[0], rows.shape[1]))
        fh.write(rows.tobytes())


def read_rfe1(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise FileFormatError(f"{path}: truncated RFE1 header")
    magic, code, n_frames, dim = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FileFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    try:
        kind = FeatureKind(code)
    except ValueError:
        raise FileFormatError(f"{path}: unknown feature kind code {code}") from None
    expected = _HEADER.size + 4 * n_frames * dim
    if len(blob) != expected:
        raise FileFormatError(f"{path}: payload size {len(blob)} bytes, expected {expected}")
    rows = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size).reshape(n_frames, dim)
    return FeatureMatrix(rows.astype(np.float64), kind)


def write_csv(path, features):
    np.savetxt(path, features.rows, delimiter=",", fmt="%.8g")
