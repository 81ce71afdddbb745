"""Input validation helpers used by the estimators and functional API."""

import numbers

import numpy as np

from .exceptions import ConfigurationError, RevfuseError


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value <= 0:
        raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_finite_array(x, name, ndim=None, dtype=np.float64):
    arr = np.asarray(x, dtype=dtype)
    if ndim is not None and arr.ndim != ndim:
        raise RevfuseError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise RevfuseError(f"{name} contains non-finite values")
    return arr


def check_audio(x, sample_rate_hz=None, require_rate=None):
    """Coerce ``x`` to an :class:`~revfuse.signal.AudioBuffer`.

    ``x`` may already be an AudioBuffer, or a 1-D array in which case
    ``sample_rate_hz`` must be given. ``require_rate`` enforces a fixed rate.
    """
    from .signal import AudioBuffer

    if isinstance(x, AudioBuffer):
        audio = x
    else:
        if sample_rate_hz is None:
            raise ConfigurationError("sample_rate_hz is required for raw sample arrays")
        audio = AudioBuffer(x, sample_rate_hz)
    if require_rate is not None and audio.sample_rate_hz != require_rate:
        raise RevfuseError(
            f"expected {require_rate} Hz audio, got {audio.sample_rate_hz} Hz"
        )
    return audio


def check_utterances(X, sample_rate_hz=None, require_rate=None):
    """Accept a single utterance or a sequence of them; always return a list."""
    from .signal import AudioBuffer

    if isinstance(X, AudioBuffer):
        return [check_audio(X, require_rate=require_rate)]
    if isinstance(X, np.ndarray) and X.ndim == 1:
        return [check_audio(X, sample_rate_hz, require_rate)]
    return [check_audio(x, sample_rate_hz, require_rate) for x in X]
