"""revfuse: reverberation-robust ASR front ends and system combination."""

__version__ = "0.1.0"

from .exceptions import RevfuseError  # noqa: E402
from .signal import AudioBuffer, FrameSpec, frame_signal, power_spectrum, read_wav, write_wav  # noqa: E402

__all__ = [
    "__version__", "RevfuseError", "AudioBuffer", "FrameSpec", "frame_signal",
    "power_spectrum", "read_wav", "write_wav",
]
