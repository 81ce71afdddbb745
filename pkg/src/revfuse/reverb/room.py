from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConfigurationError

SOUND_SPEED = 343.0


@dataclass(frozen=True)
class RoomConfig:
    """Shoebox geometry plus the acoustics requested from it.

    Positions are metres from the room corner at the origin.
    """

    dims_m: tuple
    source_pos_m: tuple
    mic_pos_m: tuple
    target_rt60_s: float
    sample_rate_hz: int = 16000
    sound_speed_mps: float = SOUND_SPEED

    def __post_init__(self):
        for name in ("dims_m", "source_pos_m", "mic_pos_m"):
            value = tuple(float(v) for v in getattr(self, name))
            if len(value) != 3 or not all(np.isfinite(value)):
                raise ConfigurationError(f"{name} must be three finite numbers")
            object.__setattr__(self, name, value)
        dims = np.array(self.dims_m)
        if np.any(dims <= 0):
            raise ConfigurationError("room dimensions must be positive")
        for name in ("source_pos_m", "mic_pos_m"):
            pos = np.array(getattr(self, name))
            if np.any(pos <= 0) or np.any(pos >= dims):
                raise ConfigurationError(f"{name} {getattr(self, name)} lies outside the room")
        if not 0.1 <= self.target_rt60_s <= 5.0:
            raise ConfigurationError(
                f"target_rt60_s must lie in [0.1, 5.0] s, got {self.target_rt60_s}"
            )
        if self.distance_m <= 0:
            raise ConfigurationError("source and microphone must not coincide")
        if self.sample_rate_hz <= 0 or self.sound_speed_mps <= 0:
            raise ConfigurationError("sample rate and sound speed must be positive")

    @property
    def distance_m(self):
        return float(np.linalg.norm(np.subtract(self.source_pos_m, self.mic_pos_m)))

    @property
    def volume_m3(self):
        return float(np.prod(self.dims_m))

    @property
    def surface_m2(self):
        lx, ly, lz = self.dims_m
        return 2.0 * (lx * ly + lx * lz + ly * lz)

    @property
    def direct_delay_samples(self):
        return int(round(self.sample_rate_hz * self.distance_m / self.sound_speed_mps))


@dataclass(frozen=True, eq=False)
class Rir:
    taps: np.ndarray
    sample_rate_hz: int
    config: RoomConfig = None
    achieved_rt60_s: float = float("nan")
    direct_delay_samples: int = 0
    absorption: float = field(default=float("nan"))

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        if taps.ndim != 1 or not np.all(np.isfinite(taps)):
            raise ConfigurationError("RIR taps must be a finite 1-D array")
        if not np.any(taps):
            raise ConfigurationError("RIR must contain at least one nonzero tap")
        object.__setattr__(self, "taps", taps)

    def __len__(self):
        return self.taps.shape[0]
