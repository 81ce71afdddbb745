"""Randomized room/placement protocol for building a training RIR catalog."""

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np

from ..exceptions import ConfigurationError, RevfuseError
from .room import SOUND_SPEED, RoomConfig

MAX_ATTEMPTS = 10_000


def rng_for(seed, index, purpose):
    """Independent Philox stream keyed by ``(seed, index, purpose)``.

    Philox is counter-based, so catalog entry ``index`` is reproducible on its
    own without replaying the entries before it.
    """
    tag = int.from_bytes(hashlib.sha256(purpose.encode()).digest()[:8], "little")
    key = np.random.SeedSequence([int(seed) & (2**64 - 1), int(index), tag])
    return np.random.Generator(np.random.Philox(key))


@dataclass(frozen=True)
class SamplingProtocol:
    rt_range_s: tuple = (0.4, 1.99)
    nominal_dims_m: tuple = (7.95, 5.68, 4.5)
    dim_jitter: float = 0.2
    distance_range_m: tuple = (0.144, 2.816)
    wall_margin_m: float = 1.0
    height_range_m: tuple = (1.0, 2.0)
    rirs_per_utterance: int = 3
    catalog_size: int = 30_000
    seed: int = 0
    sample_rate_hz: int = 16000
    sound_speed_mps: float = SOUND_SPEED

    def __post_init__(self):
        for name in ("rt_range_s", "nominal_dims_m", "distance_range_m", "height_range_m"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not 0 <= self.dim_jitter < 1:
            raise ConfigurationError("dim_jitter must lie in [0, 1)")
        if self.catalog_size <= 0 or self.rirs_per_utterance <= 0:
            raise ConfigurationError("catalog_size and rirs_per_utterance must be positive")
        if self.rirs_per_utterance > self.catalog_size:
            raise ConfigurationError("rirs_per_utterance exceeds catalog_size")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigurationError(f"unknown sampling protocol fields: {unknown}")
        return cls(**known)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _random_direction(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def _placement_bounds(dims, protocol):
    lo = np.array([protocol.wall_margin_m] * 3)
    hi = np.asarray(dims) - protocol.wall_margin_m
    lo[2] = max(lo[2], protocol.height_range_m[0])
    hi[2] = min(hi[2], protocol.height_range_m[1])
    if np.any(hi < lo):
        raise RevfuseError(f"room {tuple(dims)} leaves no admissible placement region")
    return lo, hi


def sample_room(protocol: SamplingProtocol, index: int) -> RoomConfig:
    """Draw catalog entry ``index``: jittered room, RT60, source and mic.

    The source is uniform over the admissible region (wall margin and height
    band); the mic sits at a uniform distance in a uniformly random direction,
    re-drawing the direction until it lands inside the region. If that fails
    ``MAX_ATTEMPTS`` times the distance is re-drawn once before giving up.
    """
    if not 0 <= index < protocol.catalog_size:
        raise RevfuseError(f"index {index} outside catalog of {protocol.catalog_size}")
    rng = rng_for(protocol.seed, index, "room")
    nominal = np.asarray(protocol.nominal_dims_m)
    j = protocol.dim_jitter
    dims = rng.uniform(nominal * (1 - j), nominal * (1 + j))
    rt60 = rng.uniform(*protocol.rt_range_s)
    lo, hi = _placement_bounds(dims, protocol)
    source = rng.uniform(lo, hi)

    for _ in range(2):
        distance = rng.uniform(*protocol.distance_range_m)
        for _ in range(MAX_ATTEMPTS):
            mic = source + distance * _random_direction(rng)
            if np.all(mic >= lo) and np.all(mic <= hi):
                return RoomConfig(tuple(dims), tuple(source), tuple(mic), rt60,
                                  protocol.sample_rate_hz, protocol.sound_speed_mps)
    raise RevfuseError(
        f"could not place microphone for catalog index {index}: dims={tuple(dims)}, "
        f"source={tuple(source)}, distance={distance:.3f} m"
    )


def pick_rirs(protocol: SamplingProtocol, utterance_index: int):
    """Distinct catalog indices assigned to one utterance."""
    rng = rng_for(protocol.seed, utterance_index, "rir-pick")
    picks = rng.choice(protocol.catalog_size, size=protocol.rirs_per_utterance, replace=False)
    return [int(p) for p in picks]
