"""Waveform containers, framing, windowing and power spectra.

Everything here is a pure function of its inputs.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.io import wavfile

from ._validation import check_finite_array, check_positive_int
from .exceptions import AudioFormatError, ConfigurationError, InputTooShortError, RevfuseError

FEATURE_SAMPLE_RATE = 16000


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono waveform with linear, dimensionless amplitude."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        rate = check_positive_int(self.sample_rate_hz, "sample_rate_hz")
        samples = check_finite_array(self.samples, "samples", ndim=1)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", rate)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def duration_s(self):
        return len(self) / self.sample_rate_hz


@dataclass(frozen=True)
class FrameSpec:
    window_len_samples: int = 400
    hop_samples: int = 160
    window_kind: str = "hamming"

    def __post_init__(self):
        check_positive_int(self.window_len_samples, "window_len_samples")
        check_positive_int(self.hop_samples, "hop_samples")
        if self.hop_samples > self.window_len_samples:
            raise ConfigurationError("hop_samples must not exceed window_len_samples")
        if self.window_kind != "hamming":
            raise ConfigurationError(f"unsupported window kind {self.window_kind!r}")

    def window(self):
        # numpy's hamming is the symmetric form 0.54 - 0.46 cos(2 pi k / (L - 1))
        return np.hamming(self.window_len_samples)

    def num_frames(self, num_samples):
        if num_samples < self.window_len_samples:
            return 0
        return (num_samples - self.window_len_samples) // self.hop_samples + 1

    def hop_ms(self, sample_rate_hz):
        return 1000.0 * self.hop_samples / sample_rate_hz


DEFAULT_FRAME_SPEC = FrameSpec()


@dataclass(frozen=True, eq=False)
class SpectralFrameSet:
    power_rows: np.ndarray
    fft_size: int
    frame_spec: FrameSpec = field(default=DEFAULT_FRAME_SPEC)

    def __post_init__(self):
        if self.power_rows.ndim != 2 or self.power_rows.shape[1] != self.fft_size // 2 + 1:
            raise RevfuseError("power_rows must have fft_size/2 + 1 columns")
        if np.any(self.power_rows < 0) or not np.all(np.isfinite(self.power_rows)):
            raise RevfuseError("power_rows must be finite and non-negative")

    @property
    def num_frames(self):
        return self.power_rows.shape[0]


def frame_signal(audio, spec=DEFAULT_FRAME_SPEC):
    """Cut ``audio`` into overlapping Hamming-weighted frames.

    Returns an array of shape ``(n_frames, window_len)``; frame ``i`` covers
    samples ``[i * hop, i * hop + window_len)``.
    """
    x = audio.samples if isinstance(audio, AudioBuffer) else np.asarray(audio, dtype=float)
    L = spec.window_len_samples
    if x.shape[0] < L:
        raise InputTooShortError(
            f"input too short: {x.shape[0]} samples, need at least {L} (one window)"
        )
    frames = sliding_window_view(x, L)[:: spec.hop_samples]
    return frames * spec.window()


def next_pow2(n):
    return 1 << (int(n) - 1).bit_length()


def power_spectrum(frames, fft_size=512, frame_spec=DEFAULT_FRAME_SPEC):
    """One-sided power spectrum ``|DFT|^2`` of each (already windowed) frame.

    Frames are zero-padded to ``fft_size``; bins ``0 .. fft_size/2`` are kept.
    """
    frames = np.atleast_2d(np.asarray(frames, dtype=float))
    fft_size = check_positive_int(fft_size, "fft_size")
    if fft_size & (fft_size - 1):
        raise ConfigurationError(f"fft_size must be a power of two, got {fft_size}")
    if fft_size < frames.shape[1]:
        raise ConfigurationError(
            f"fft_size {fft_size} is smaller than the window length {frames.shape[1]}"
        )
    spec = np.fft.rfft(frames, n=fft_size, axis=1)
    power = spec.real**2 + spec.imag**2
    return SpectralFrameSet(power, fft_size, frame_spec)


def read_wav(path):
    """Read a 16 kHz mono 16-bit PCM WAV file, scaled to [-1, 1)."""
    try:
        rate, data = wavfile.read(path)
    except ValueError as exc:
        raise AudioFormatError(f"{path}: not a readable RIFF/WAV file ({exc})") from exc
    if data.dtype != np.int16:
        raise AudioFormatError(f"{path}: expected 16-bit signed PCM, got {data.dtype}")
    if data.ndim != 1:
        raise AudioFormatError(f"{path}: expected mono audio, got {data.shape[1]} channels")
    if rate != FEATURE_SAMPLE_RATE:
        raise AudioFormatError(
            f"{path}: expected {FEATURE_SAMPLE_RATE} Hz, got {rate} Hz (no resampling is done)"
        )
    return AudioBuffer(data.astype(np.float64) / 32768.0, rate)


def write_wav(path, audio):
    """Write ``audio`` as 16-bit PCM, clipping to the representable range."""
    pcm = np.clip(np.round(audio.samples * 32768.0), -32768, 32767).astype(np.int16)
    wavfile.write(path, audio.sample_rate_hz, pcm)
