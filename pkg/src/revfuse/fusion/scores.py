"""Frame-level score matrices and their weighted linear combination."""

import struct
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..exceptions import ConfigurationError, DimensionMismatchError, EmptyInputError, FileFormatError


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Per-frame, per-state log-likelihood scores of one system."""

    scores: np.ndarray
    system_id: str = "system"

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 2:
            raise DimensionMismatchError(f"scores must be frames x states, got shape {scores.shape}")
        if not np.all(np.isfinite(scores)):
            raise ConfigurationError(f"scores of {self.system_id!r} contain non-finite values")
        object.__setattr__(self, "scores", scores)

    @property
    def num_frames(self):
        return self.scores.shape[0]

    @property
    def num_states(self):
        return self.scores.shape[1]


@dataclass(frozen=True, eq=False)
class FusionWeights:
    """Combination weights.

    ``mode`` is ``"uniform"`` (scalar 1/R), ``"per_system"`` (length-R
    vector) or ``"per_state_frame"`` (R x N x S tensor). Weights need not
    sum to one.
    """

    mode: str
    values: object

    def __post_init__(self):
        if self.mode not in ("uniform", "per_system", "per_state_frame"):
            raise ConfigurationError(f"unknown fusion weight mode {self.mode!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("fusion weights must be finite")
        expected_ndim = {"uniform": 0, "per_system": 1, "per_state_frame": 3}[self.mode]
        if values.ndim != expected_ndim:
            raise ConfigurationError(
                f"{self.mode} weights must be {expected_ndim}-dimensional, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    def for_systems(self, num_systems, num_frames, num_states):
        """Broadcastable weight array of shape (R, N|1, S|1)."""
        if self.mode == "uniform":
            return np.full((num_systems, 1, 1), float(self.values))
        if self.mode == "per_system":
            if self.values.shape[0] != num_systems:
                raise DimensionMismatchError(
                    f"{self.values.shape[0]} weights given for {num_systems} systems"
                )
            return self.values[:, None, None]
        if self.values.shape != (num_systems, num_frames, num_states):
            raise DimensionMismatchError(
                f"weight tensor shape {self.values.shape} does not match "
                f"({num_systems}, {num_frames}, {num_states})"
            )
        return self.values


def uniform_weights(num_systems):
    if isinstance(num_systems, bool) or int(num_systems) != num_systems or num_systems < 1:
        raise EmptyInputError(f"need at least one system, got {num_systems}")
    return FusionWeights("uniform", 1.0 / int(num_systems))


def check_score_systems(systems):
    systems = list(systems)
    if not systems:
        raise EmptyInputError("no score matrices to combine")
    shape = systems[0].scores.shape
    for i, s in enumerate(systems[1:], start=1):
        if s.scores.shape != shape:
            raise DimensionMismatchError(
                f"system {i} ({s.system_id!r}) has shape {s.scores.shape}, "
                f"expected {shape} from {systems[0].system_id!r}"
            )
    return systems


def _compensated_sum(terms):
    """Neumaier summation over axis 0.

    Accurate to about one rounding of the result even where the terms nearly
    cancel, so the outcome barely depends on the order of the systems.
    """
    total = terms[0].copy()
    carry = np.zeros_like(total)
    for x in terms[1:]:
        t = total + x
        carry += np.where(np.abs(total) >= np.abs(x), (total - t) + x, (x - t) + total)
        total = t
    return total + carry


def fuse_scores(systems, weights=None, system_id="fused"):
    """``fused(n, s) = sum_r w[r, n, s] * m_r(n, s)``; uniform 1/R by default."""
    systems = check_score_systems(systems)
    if weights is None:
        weights = uniform_weights(len(systems))
    n, s = systems[0].scores.shape
    stacked = np.stack([m.scores for m in systems])
    if weights.mode == "uniform":
        # a shared scalar is applied once, after the sum
        w = float(weights.values)
        total = _compensated_sum(stacked)
        fused = total / len(systems) if w * len(systems) == 1.0 else total * w
    else:
        fused = _compensated_sum(weights.for_systems(len(systems), n, s) * stacked)
    return ScoreMatrix(fused, system_id)


class ScoreFusion(TransformerMixin, BaseEstimator):
    """Estimator form of :func:`fuse_scores`.

    ``weights`` is ``"uniform"`` or a sequence of per-system weights.
    ``transform`` takes the list of per-system ScoreMatrix for one utterance.
    """

    def __init__(self, weights="uniform"):
        self.weights = weights

    def _weights(self, num_systems):
        if isinstance(self.weights, str):
            if self.weights != "uniform":
                raise ConfigurationError(f"unknown weights {self.weights!r}")
            return uniform_weights(num_systems)
        return FusionWeights("per_system", self.weights)

    def fit(self, X=None, y=None):
        if not isinstance(self.weights, str):
            self.n_systems_ = len(self.weights)
        self.is_fitted_ = True
        return self

    def transform(self, X):
        systems = check_score_systems(X)
        return fuse_scores(systems, self._weights(len(systems)))


MAGIC = b"RSC1"
_HEADER = struct.Struct("<4sII")


def write_rsc1(path, matrix):
    data = np.ascontiguousarray(matrix.scores, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, data.shape[0], data.shape[1]))
        fh.write(data.tobytes())


def read_rsc1(path, system_id=None):
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise FileFormatError(f"{path}: truncated RSC1 header")
    magic, n_frames, n_states = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FileFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    expected = _HEADER.size + 4 * n_frames * n_states
    if len(blob) != expected:
        raise FileFormatError(f"{path}: payload size {len(blob)} bytes, expected {expected}")
    scores = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size).reshape(n_frames, n_states)
    return ScoreMatrix(scores.astype(np.float64), system_id or str(path))
