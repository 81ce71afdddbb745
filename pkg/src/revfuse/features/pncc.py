"""Power-normalized cepstral coefficients.

The processing chain follows Kim and Stern's published defaults: gammatone
integration, medium-time power, asymmetric noise suppression with temporal
masking, channel weight smoothing, mean-power normalization and a 1/15
power-law nonlinearity. Every stage is homogeneous in signal power, so the
output does not depend on input gain; the only non-homogeneous guards are
divide-by-zero protections.
"""

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct
from scipy.signal import lfilter

from .._validation import check_audio
from ..signal import DEFAULT_FRAME_SPEC, FEATURE_SAMPLE_RATE, AudioBuffer, frame_signal, next_pow2, power_spectrum
from ._base import FeatureKind, FeatureMatrix
from .filterbanks import gammatone_filterbank


@dataclass(frozen=True)
class PNCCConfig:
    num_channels: int = 40
    f_low_hz: float = 200.0
    f_high_hz: float = 8000.0
    medium_time_frames: int = 2
    lambda_a: float = 0.999
    lambda_b: float = 0.5
    ans_init_factor: float = 0.9
    excitation_threshold: float = 2.0
    lambda_t: float = 0.85
    mu_t: float = 0.2
    smoothing_channels: int = 4
    lambda_mu: float = 0.999
    power_exponent: float = 1.0 / 15.0
    n_ceps: int = 13
    preemphasis: float = 0.97


def medium_time_power(power, m):
    """Average of each channel over frames ``[n - m, n + m]`` (clipped)."""
    n = power.shape[0]
    csum = np.vstack([np.zeros((1, power.shape[1])), np.cumsum(power, axis=0)])
    idx = np.arange(n)
    lo = np.maximum(idx - m, 0)
    hi = np.minimum(idx + m, n - 1) + 1
    return (csum[hi] - csum[lo]) / (hi - lo)[:, None]


def asymmetric_lowpass(x, lambda_a, lambda_b, init_factor):
    """Slow-rise / fast-fall first-order tracker run along axis 0."""
    out = np.empty_like(x)
    prev = init_factor * x[0]
    for i in range(x.shape[0]):
        rising = x[i] >= prev
        prev = np.where(rising, lambda_a * prev + (1 - lambda_a) * x[i],
                        lambda_b * prev + (1 - lambda_b) * x[i])
        out[i] = prev
    return out


def temporal_masking(x, lambda_t, mu_t):
    out = np.empty_like(x)
    peak = np.zeros(x.shape[1])
    for i in range(x.shape[0]):
        decayed = lambda_t * peak
        out[i] = np.where(x[i] >= decayed, x[i], mu_t * peak)
        peak = np.maximum(decayed, x[i])
    return out


def _safe_ratio(num, den):
    out = np.zeros(np.broadcast(num, den).shape)
    np.divide(num, den, out=out, where=den > 0)
    return out


def suppression_weights(medium_power, cfg):
    """Per-frame, per-channel gains from asymmetric noise suppression and
    temporal masking, smoothed across neighbouring channels."""
    lower_env = asymmetric_lowpass(medium_power, cfg.lambda_a, cfg.lambda_b, cfg.ans_init_factor)
    rectified = np.maximum(medium_power - lower_env, 0.0)
    floor_level = asymmetric_lowpass(rectified, cfg.lambda_a, cfg.lambda_b, cfg.ans_init_factor)
    masked = np.maximum(temporal_masking(rectified, cfg.lambda_t, cfg.mu_t), floor_level)
    excitation = medium_power >= cfg.excitation_threshold * lower_env
    processed = np.where(excitation, masked, floor_level)

    ratio = _safe_ratio(processed, medium_power)
    n_ch = ratio.shape[1]
    csum = np.hstack([np.zeros((ratio.shape[0], 1)), np.cumsum(ratio, axis=1)])
    idx = np.arange(n_ch)
    lo = np.maximum(idx - cfg.smoothing_channels, 0)
    hi = np.minimum(idx + cfg.smoothing_channels, n_ch - 1) + 1
    return (csum[:, hi] - csum[:, lo]) / (hi - lo)


def mean_power_normalize(power, lambda_mu):
    """Divide by a running mean of the across-channel average power.

    The running mean starts at the first frame's own average so that the
    result is exactly gain-invariant from the first frame on.
    """
    frame_mean = power.mean(axis=1)
    running = lfilter([1 - lambda_mu], [1.0, -lambda_mu], frame_mean,
                      zi=[lambda_mu * frame_mean[0]])[0]
    return _safe_ratio(power, running[:, None])


def power_law(x, exponent=1.0 / 15.0):
    return np.power(x, exponent)


def cepstra(channel_values, n_ceps):
    return dct(channel_values, type=2, norm="ortho", axis=-1)[..., :n_ceps]


def extract_pncc(audio, spec=DEFAULT_FRAME_SPEC, fft_size=None, config=PNCCConfig()):
    audio = check_audio(audio, require_rate=FEATURE_SAMPLE_RATE)
    cfg = config
    x = audio.samples
    if cfg.preemphasis:
        x = lfilter([1.0, -cfg.preemphasis], [1.0], x)
    fft_size = fft_size or next_pow2(spec.window_len_samples)
    frames = frame_signal(AudioBuffer(x, audio.sample_rate_hz), spec)
    power = power_spectrum(frames, fft_size, spec).power_rows
    weights, _ = gammatone_filterbank(cfg.num_channels, fft_size, audio.sample_rate_hz,
                                      cfg.f_low_hz, cfg.f_high_hz)
    channel_power = power @ weights.T

    medium = medium_time_power(channel_power, cfg.medium_time_frames)
    gains = suppression_weights(medium, cfg)
    normalized = mean_power_normalize(channel_power * gains, cfg.lambda_mu)
    rows = cepstra(power_law(normalized, cfg.power_exponent), cfg.n_ceps)
    return FeatureMatrix(rows, FeatureKind.PNCC, spec, FEATURE_SAMPLE_RATE)
