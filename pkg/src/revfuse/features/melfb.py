"""Log mel filterbank energies and their locally normalized variant."""

from functools import lru_cache

import numpy as np

from .._validation import check_audio, check_positive_int
from ..signal import DEFAULT_FRAME_SPEC, FEATURE_SAMPLE_RATE, frame_signal, next_pow2, power_spectrum
from ._base import LOG_FLOOR, FeatureKind, FeatureMatrix, log_floor
from .filterbanks import mel_filterbank


@lru_cache(maxsize=16)
def _mel_weights(num_filters, fft_size, sample_rate_hz):
    weights = mel_filterbank(num_filters, fft_size, sample_rate_hz).weights
    weights.setflags(write=False)
    return weights


def mel_log_energies(audio, spec=DEFAULT_FRAME_SPEC, fft_size=None, num_filters=40,
                     floor=LOG_FLOOR):
    audio = check_audio(audio, require_rate=FEATURE_SAMPLE_RATE)
    fft_size = fft_size or next_pow2(spec.window_len_samples)
    power = power_spectrum(frame_signal(audio, spec), fft_size, spec).power_rows
    energies = power @ _mel_weights(num_filters, fft_size, audio.sample_rate_hz).T
    return log_floor(energies, floor)


def extract_melfb(audio, spec=DEFAULT_FRAME_SPEC, fft_size=None, num_filters=40,
                  floor=LOG_FLOOR):
    """Natural-log energies of 40 mel triangles spanning 0-8 kHz."""
    rows = mel_log_energies(audio, spec, fft_size, num_filters, floor)
    return FeatureMatrix(rows, FeatureKind.MELFB, spec, FEATURE_SAMPLE_RATE)


def local_normalize(log_energies, width=5):
    """Subtract from every band the mean over a window of ``width`` bands
    centred on it. The window is clipped at the band edges and the mean is
    taken over the bands actually inside it.
    """
    width = check_positive_int(width, "width")
    x = np.asarray(log_energies, dtype=float)
    n_bands = x.shape[-1]
    half = width // 2
    idx = np.arange(n_bands)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half, n_bands - 1) + 1
    csum = np.concatenate([np.zeros(x.shape[:-1] + (1,)), np.cumsum(x, axis=-1)], axis=-1)
    means = (csum[..., hi] - csum[..., lo]) / (hi - lo)
    return x - means


def extract_lnfb(audio, spec=DEFAULT_FRAME_SPEC, fft_size=None, num_filters=40,
                 width=5, floor=LOG_FLOOR):
    log_e = mel_log_energies(audio, spec, fft_size, num_filters, floor)
    return FeatureMatrix(local_normalize(log_e, width), FeatureKind.LNFB, spec,
                         FEATURE_SAMPLE_RATE)
