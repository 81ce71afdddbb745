"""Room impulse response simulation and reverberant augmentation."""

from .augment import (
    MANIFEST_COLUMNS, ManifestRow, ReverbAugmenter, augment, build_augmented_manifest,
    read_manifest, render_manifest, write_manifest,
)
from .io import read_rir_wav, write_rir_wav
from .rir import (
    allen_berkley_highpass, measured_direct_delay, rt60_estimate, sabine_absorption,
    schroeder_curve, synthesize_rir,
)
from .room import SOUND_SPEED, Rir, RoomConfig
from .sampling import SamplingProtocol, pick_rirs, rng_for, sample_room

__all__ = [
    "MANIFEST_COLUMNS", "ManifestRow", "ReverbAugmenter", "augment", "build_augmented_manifest",
    "read_manifest", "render_manifest", "write_manifest", "read_rir_wav", "write_rir_wav",
    "allen_berkley_highpass", "measured_direct_delay", "rt60_estimate", "sabine_absorption",
    "schroeder_curve", "synthesize_rir", "SOUND_SPEED", "Rir", "RoomConfig",
    "SamplingProtocol", "pick_rirs", "rng_for", "sample_room",
]
