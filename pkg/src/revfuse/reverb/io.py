"""RIR files: mono 32-bit float WAV."""

import numpy as np
from scipy.io import wavfile

from ..exceptions import AudioFormatError
from .room import Rir


def write_rir_wav(path, rir):
    wavfile.write(path, rir.sample_rate_hz, rir.taps.astype(np.float32))


def read_rir_wav(path):
    rate, data = wavfile.read(path)
    if data.dtype != np.float32 or data.ndim != 1:
        raise AudioFormatError(f"{path}: expected mono 32-bit float WAV")
    return Rir(data.astype(np.float64), rate)
