"""Frequency-domain weighting matrices: mel triangles, Bark critical bands
and gammatone channel responses.

All matrices have shape ``(num_filters, fft_size // 2 + 1)``.
"""

from dataclasses import dataclass

import numpy as np


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=float) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=float) / 2595.0) - 1.0)


def hz_to_bark(f):
    return 6.0 * np.arcsinh(np.asarray(f, dtype=float) / 600.0)


def bark_to_hz(z):
    return 600.0 * np.sinh(np.asarray(z, dtype=float) / 6.0)


def hz_to_erb_rate(f):
    return 21.4 * np.log10(1.0 + 0.00437 * np.asarray(f, dtype=float))


def erb_rate_to_hz(e):
    return (10.0 ** (np.asarray(e, dtype=float) / 21.4) - 1.0) / 0.00437


def bin_frequencies(fft_size, sample_rate_hz):
    return np.arange(fft_size // 2 + 1) * (sample_rate_hz / fft_size)


@dataclass(frozen=True, eq=False)
class MelFilterbank:
    num_filters: int
    weights: np.ndarray
    center_hz: np.ndarray
    f_low_hz: float
    f_high_hz: float


def mel_filterbank(num_filters=40, fft_size=512, sample_rate_hz=16000,
                   f_low_hz=0.0, f_high_hz=None):
    """Triangular filters equally spaced on the mel scale.

    Each triangle rises from the previous filter's center to its own center
    and falls to the next one's; weights are evaluated at the exact bin
    frequencies, so every bin strictly between the first and last center
    receives positive total weight.
    """
    if f_high_hz is None:
        f_high_hz = sample_rate_hz / 2.0
    edges = mel_to_hz(np.linspace(hz_to_mel(f_low_hz), hz_to_mel(f_high_hz), num_filters + 2))
    freqs = bin_frequencies(fft_size, sample_rate_hz)
    lo, mid, hi = edges[:-2, None], edges[1:-1, None], edges[2:, None]
    rising = (freqs - lo) / (mid - lo)
    falling = (hi - freqs) / (hi - mid)
    weights = np.maximum(0.0, np.minimum(rising, falling))
    return MelFilterbank(num_filters, weights, edges[1:-1].copy(), float(f_low_hz), float(f_high_hz))


def bark_filterbank(fft_size=512, sample_rate_hz=16000, f_low_hz=0.0, f_high_hz=None,
                    num_filters=None, width=1.0):
    """Hermansky's trapezoidal critical-band curves on the Bark axis.

    Returns ``(weights, center_hz)``. With the defaults at 16 kHz this gives
    21 bands spaced about one Bark apart.
    """
    if f_high_hz is None:
        f_high_hz = sample_rate_hz / 2.0
    min_bark = hz_to_bark(f_low_hz)
    span = hz_to_bark(f_high_hz) - min_bark
    if num_filters is None:
        num_filters = int(np.ceil(span)) + 1
    step = span / (num_filters - 1)
    bin_bark = hz_to_bark(bin_frequencies(fft_size, sample_rate_hz))
    centers = min_bark + step * np.arange(num_filters)
    lof = bin_bark[None, :] - centers[:, None] - 0.5
    hif = bin_bark[None, :] - centers[:, None] + 0.5
    weights = 10.0 ** np.minimum(0.0, np.minimum(hif, -2.5 * lof) / width)
    return weights, bark_to_hz(centers)


def equal_loudness(center_hz):
    """Hermansky's 40 dB equal-loudness approximation."""
    fsq = np.asarray(center_hz, dtype=float) ** 2
    ftmp = fsq + 1.6e5
    return (fsq / ftmp) ** 2 * ((fsq + 1.44e6) / (fsq + 9.61e6))


def gammatone_filterbank(num_channels=40, fft_size=512, sample_rate_hz=16000,
                         f_low_hz=200.0, f_high_hz=8000.0, order=4):
    """Squared magnitude responses of ERB-spaced gammatone channels.

    Uses the closed-form approximation ``|H(f)| = (1 + ((f - fc)/b)^2)^(-order/2)``
    with ``b = 1.019 * ERB(fc)``, each channel normalized to unit peak.
    Returns ``(weights, center_hz)``.
    """
    centers = erb_rate_to_hz(
        np.linspace(hz_to_erb_rate(f_low_hz), hz_to_erb_rate(f_high_hz), num_channels)
    )
    erb = 24.7 * (4.37e-3 * centers + 1.0)
    b = 1.019 * erb
    freqs = bin_frequencies(fft_size, sample_rate_hz)
    ratio = (freqs[None, :] - centers[:, None]) / b[:, None]
    mag = (1.0 + ratio**2) ** (-order / 2.0)
    weights = mag**2
    weights /= weights.max(axis=1, keepdims=True)
    return weights, centers
