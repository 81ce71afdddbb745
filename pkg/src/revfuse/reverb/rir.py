"""Image-method room impulse responses and Schroeder RT60 estimation."""

import logging
import math

import numba
import numpy as np
from scipy.signal import lfilter

from ..exceptions import InfeasibleRoomError, InsufficientDecayError, RevfuseError
from .room import Rir, RoomConfig

logger = logging.getLogger(__name__)

SABINE_CONSTANT = 0.161
FRACTIONAL_DELAY_TAPS = 81
LENGTH_FACTOR = 1.25
HIGHPASS_HZ = 100.0


def sabine_absorption(cfg):
    """Uniform absorption coefficient giving ``cfg.target_rt60_s`` by Sabine."""
    alpha = SABINE_CONSTANT * cfg.volume_m3 / (cfg.target_rt60_s * cfg.surface_m2)
    if alpha > 1.0 + 1e-12:
        raise InfeasibleRoomError(
            f"infeasible RT for geometry: RT60 {cfg.target_rt60_s:.3f} s in a "
            f"{cfg.dims_m} m room needs absorption {alpha:.3f} > 1 "
            f"(shortest achievable is {cfg.target_rt60_s * alpha:.3f} s)"
        )
    return min(alpha, 1.0)


@numba.njit(cache=True, nogil=True)
def _image_source_kernel(src, mic, dims, beta, fs, c, n_taps, half):
    h = np.zeros(n_taps)
    max_d = n_taps / fs * c
    nx = int(math.ceil(max_d / (2.0 * dims[0]))) + 1
    ny = int(math.ceil(max_d / (2.0 * dims[1]))) + 1
    nz = int(math.ceil(max_d / (2.0 * dims[2]))) + 1
    step = math.pi / (half + 1)
    cos_step = math.cos(step)
    sin_step = math.sin(step)
    start_sign = 1.0 if half % 2 == 0 else -1.0
    for a in range(-nx, nx + 1):
        for qa in range(2):
            dx = (1 - 2 * qa) * src[0] + 2 * a * dims[0] - mic[0]
            ex = abs(a - qa) + abs(a)
            for b in range(-ny, ny + 1):
                for qb in range(2):
                    dy = (1 - 2 * qb) * src[1] + 2 * b * dims[1] - mic[1]
                    ey = abs(b - qb) + abs(b)
                    dxy2 = dx * dx + dy * dy
                    if dxy2 > max_d * max_d:
                        continue
                    for m in range(-nz, nz + 1):
                        for qm in range(2):
                            dz = (1 - 2 * qm) * src[2] + 2 * m * dims[2] - mic[2]
                            d = math.sqrt(dxy2 + dz * dz)
                            t = d / c * fs
                            if t >= n_taps:
                                continue
                            e = ex + ey + abs(m - qm) + abs(m)
                            amp = beta**e / (4.0 * math.pi * d)
                            if amp == 0.0:
                                continue
                            center = int(math.floor(t + 0.5))
                            delta = center - t
                            # sin(pi (j + delta)) = (-1)^j sin(pi delta); the Hann
                            # phase advances by a fixed step per tap
                            sin_delta = math.sin(math.pi * delta)
                            phase = (delta - half) * step
                            cw = math.cos(phase)
                            sw = math.sin(phase)
                            sign = start_sign
                            for j in range(-half, half + 1):
                                k = center + j
                                x = j + delta
                                if 0 <= k < n_taps:
                                    if abs(x) < 1e-12:
                                        s = 1.0
                                    else:
                                        s = sign * sin_delta / (math.pi * x)
                                    h[k] += amp * 0.5 * (1.0 + cw) * s
                                sign = -sign
                                cw, sw = cw * cos_step - sw * sin_step, sw * cos_step + cw * sin_step
    return h


def allen_berkley_highpass(taps, sample_rate_hz, cutoff_hz=HIGHPASS_HZ):
    """Second-order DC-blocking high-pass from Allen and Berkley's image method.

    Image sources all carry positive amplitude, so without it the low-frequency
    content piles up coherently and stretches the apparent decay.
    """
    w = 2.0 * math.pi * cutoff_hz / sample_rate_hz
    r1 = math.exp(-w)
    b1 = 2.0 * r1 * math.cos(w)
    b2 = -r1 * r1
    a1 = -(1.0 + r1)
    return lfilter([1.0, a1, r1], [1.0, -b1, -b2], taps)


def rir_length(cfg):
    return int(math.ceil(LENGTH_FACTOR * cfg.target_rt60_s * cfg.sample_rate_hz))


def synthesize_rir(cfg: RoomConfig, highpass=True, estimate_rt60=True) -> Rir:
    """Image-method RIR for ``cfg`` with Sabine-derived uniform absorption.

    Every image source whose arrival falls inside ``1.25 * target_rt60_s`` is
    rendered with an 81-tap Hann-windowed sinc fractional delay.
    """
    alpha = sabine_absorption(cfg)
    beta = math.sqrt(max(0.0, 1.0 - alpha))
    n_taps = rir_length(cfg)
    delay = cfg.direct_delay_samples
    n_taps = max(n_taps, delay + FRACTIONAL_DELAY_TAPS)
    taps = _image_source_kernel(
        np.asarray(cfg.source_pos_m, dtype=np.float64),
        np.asarray(cfg.mic_pos_m, dtype=np.float64),
        np.asarray(cfg.dims_m, dtype=np.float64),
        beta, float(cfg.sample_rate_hz), float(cfg.sound_speed_mps), n_taps,
        FRACTIONAL_DELAY_TAPS // 2,
    )
    if highpass:
        taps = allen_berkley_highpass(taps, cfg.sample_rate_hz)
    achieved = float("nan")
    rir = Rir(taps, cfg.sample_rate_hz, cfg, achieved, delay, alpha)
    if estimate_rt60:
        try:
            achieved = rt60_estimate(rir)
        except InsufficientDecayError as exc:
            logger.warning("RT60 of synthesized RIR not measurable: %s", exc)
        rir = Rir(taps, cfg.sample_rate_hz, cfg, achieved, delay, alpha)
    return rir


def schroeder_curve(taps):
    """Backward-integrated energy decay in dB relative to total energy."""
    energy = np.cumsum(np.asarray(taps, dtype=float)[::-1] ** 2)[::-1]
    if energy[0] <= 0:
        raise RevfuseError("RIR has no energy")
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(energy / energy[0])


def rt60_estimate(rir, sample_rate_hz=None, start_db=-5.0, stop_db=-35.0):
    """T30 reverberation time: fit the Schroeder curve between -5 and -35 dB
    and extrapolate the slope to 60 dB of decay."""
    if isinstance(rir, Rir):
        taps, fs = rir.taps, rir.sample_rate_hz
    else:
        taps, fs = np.asarray(rir, dtype=float), sample_rate_hz
        if fs is None:
            raise RevfuseError("sample_rate_hz is required for raw taps")
    edc = schroeder_curve(taps)
    finite = edc[np.isfinite(edc)]
    reached = finite.min()
    if reached > stop_db:
        raise InsufficientDecayError(reached)
    i_start = int(np.argmax(edc <= start_db))
    i_stop = int(np.argmax(edc <= stop_db))
    if i_stop - i_start < 2:
        raise InsufficientDecayError(reached)
    t = np.arange(i_start, i_stop + 1) / fs
    slope, _ = np.polyfit(t, edc[i_start:i_stop + 1], 1)
    if slope >= 0:
        raise InsufficientDecayError(reached)
    return float(-60.0 / slope)


def measured_direct_delay(rir):
    """Index of the strongest tap, i.e. the direct-path arrival."""
    return int(np.argmax(np.abs(rir.taps)))
