"""RASTA-PLP cepstra."""

import numpy as np
from scipy.signal import lfilter

from .._validation import check_audio
from ..signal import DEFAULT_FRAME_SPEC, FEATURE_SAMPLE_RATE, frame_signal, next_pow2, power_spectrum
from ._base import LOG_FLOOR, FeatureKind, FeatureMatrix, log_floor
from .filterbanks import bark_filterbank, equal_loudness

RASTA_NUMERATOR = 0.1 * np.array([2.0, 1.0, 0.0, -1.0, -2.0])
RASTA_POLE = 0.98


def rasta_filter(log_bands, pole=RASTA_POLE):
    """Band-pass filter every column of ``log_bands`` along time.

    H(z) = 0.1 (2 + z^-1 - z^-3 - 2 z^-4) / (1 - pole z^-1), zero initial
    state, no frames trimmed.
    """
    x = np.asarray(log_bands, dtype=float)
    return lfilter(RASTA_NUMERATOR, [1.0, -pole], x, axis=0)


def levinson_durbin(r, order):
    """Solve the autocorrelation normal equations.

    Returns ``(a, err)`` with ``a = [1, a_1, ..., a_p]`` the prediction-error
    filter and ``err`` the final prediction error power. Raises
    ``FloatingPointError`` when the recursion hits a non-positive error.
    """
    r = np.asarray(r, dtype=float)
    a = np.zeros(order + 1)
    a[0] = 1.0
    err = r[0]
    if not err > 0.0:
        raise FloatingPointError("zero-energy autocorrelation")
    for i in range(1, order + 1):
        k = -(r[i] + a[1:i] @ r[i - 1:0:-1]) / err
        a[1:i] = a[1:i] + k * a[i - 1:0:-1]
        a[i] = k
        err *= 1.0 - k * k
        if not err > 0.0:
            raise FloatingPointError("non-positive prediction error")
    return a, err


def lpc_to_cepstrum(a, err, n_ceps):
    """Cepstrum of the all-pole model ``err / |A(e^jw)|^2``.

    c_0 = ln(err); c_n = -a_n - sum_{k=1}^{n-1} (k/n) c_k a_{n-k}, with
    a_n = 0 beyond the model order.
    """
    order = len(a) - 1
    c = np.zeros(n_ceps)
    c[0] = np.log(err)
    for n in range(1, n_ceps):
        acc = a[n] if n <= order else 0.0
        for k in range(1, n):
            if n - k <= order:
                acc += (k / n) * c[k] * a[n - k]
        c[n] = -acc
    return c


def _autocorrelation(spectrum, order):
    # real, even auditory spectrum sampled on [0, pi]; mirror it and invert
    full = np.concatenate([spectrum, spectrum[..., -2:0:-1]], axis=-1)
    return np.fft.ifft(full, axis=-1).real[..., : order + 1]


def extract_rplp(audio, spec=DEFAULT_FRAME_SPEC, fft_size=None, order=12, n_ceps=13,
                 floor=LOG_FLOOR):
    audio = check_audio(audio, require_rate=FEATURE_SAMPLE_RATE)
    fft_size = fft_size or next_pow2(spec.window_len_samples)
    power = power_spectrum(frame_signal(audio, spec), fft_size, spec).power_rows
    weights, centers = bark_filterbank(fft_size, audio.sample_rate_hz)
    bands = rasta_filter(log_floor(power @ weights.T, floor))
    auditory = np.exp(bands) * equal_loudness(centers)
    auditory = auditory ** (1.0 / 3.0)
    # edge bands sit at 0 Hz and Nyquist where the loudness curve is unreliable
    auditory[:, 0] = auditory[:, 1]
    auditory[:, -1] = auditory[:, -2]

    r = _autocorrelation(auditory, order)
    silence = np.zeros(n_ceps)
    silence[0] = np.log(floor)
    out = np.empty((auditory.shape[0], n_ceps))
    for i, row in enumerate(r):
        try:
            a, err = levinson_durbin(row, order)
            out[i] = lpc_to_cepstrum(a, err, n_ceps)
        except FloatingPointError:
            out[i] = silence
        if not np.all(np.isfinite(out[i])):
            out[i] = silence
    return FeatureMatrix(out, FeatureKind.RPLP, spec, FEATURE_SAMPLE_RATE)
