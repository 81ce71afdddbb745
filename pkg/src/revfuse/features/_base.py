from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from ..exceptions import RevfuseError
from ..signal import DEFAULT_FRAME_SPEC, FrameSpec

LOG_FLOOR = 1e-10


class FeatureKind(IntEnum):
    """Feature kinds; the integer value is the RFE1 kind code."""

    MELFB = 1
    RPLP = 2
    LNFB = 3
    PNCC = 4

    @property
    def label(self):
        return self.name.lower()

    @property
    def dim(self):
        return FEATURE_DIMS[self]

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            try:
                return cls[value.upper()]
            except KeyError:
                raise RevfuseError(f"unknown feature kind {value!r}") from None
        try:
            return cls(value)
        except ValueError:
            raise RevfuseError(f"unknown feature kind code {value!r}") from None


FEATURE_DIMS = {FeatureKind.MELFB: 40, FeatureKind.LNFB: 40, FeatureKind.PNCC: 13, FeatureKind.RPLP: 13}


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    rows: np.ndarray
    kind: FeatureKind
    frame_spec: FrameSpec = field(default=DEFAULT_FRAME_SPEC)
    sample_rate_hz: int = 16000

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        kind = FeatureKind.parse(self.kind)
        if rows.ndim != 2:
            raise RevfuseError(f"feature rows must be 2-D, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise RevfuseError("feature matrix contains non-finite values")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "kind", kind)

    @property
    def dim(self):
        return self.rows.shape[1]

    @property
    def num_frames(self):
        return self.rows.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.rows if dtype is None else self.rows.astype(dtype)


def log_floor(x, floor=LOG_FLOOR):
    return np.log(np.maximum(x, floor))
