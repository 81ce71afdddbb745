import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import toeplitz
from sklearn.base import clone

from revfuse.exceptions import FileFormatError
from revfuse.features import (
    FeatureKind, FeatureMatrix, LNFBExtractor, MelFBExtractor, PNCCConfig, PNCCExtractor,
    RPLPExtractor, extract, extract_lnfb, extract_melfb, extract_pncc, extract_rplp,
    local_normalize, make_extractor, mel_filterbank, read_rfe1, write_csv, write_rfe1,
)
from revfuse.features.filterbanks import (
    bark_filterbank, bin_frequencies, equal_loudness, gammatone_filterbank, hz_to_mel, mel_to_hz,
)
from revfuse.features.pncc import cepstra, power_law
from revfuse.features.rplp import _autocorrelation, levinson_durbin, lpc_to_cepstrum, rasta_filter
from revfuse.signal import DEFAULT_FRAME_SPEC, AudioBuffer, frame_signal, power_spectrum

FS = 16000
FLOOR = np.log(1e-10)
ALL = (extract_melfb, extract_lnfb, extract_pncc, extract_rplp)


def tone(freq, seconds=0.5, amp=1.0):
    t = np.arange(int(seconds * FS)) / FS
    return AudioBuffer(amp * np.sin(2 * np.pi * freq * t), FS)


# --- filterbanks -----------------------------------------------------------

def test_mel_roundtrip():
    f = np.linspace(0, 8000, 50)
    np.testing.assert_allclose(mel_to_hz(hz_to_mel(f)), f, atol=1e-9)


def test_mel_filterbank_shape_and_coverage():
    fb = mel_filterbank()
    assert fb.weights.shape == (40, 257)
    assert np.all(fb.weights >= 0)
    freqs = bin_frequencies(512, FS)
    interior = (freqs > fb.center_hz[0]) & (freqs < fb.center_hz[-1])
    assert np.all(fb.weights[:, interior].sum(axis=0) > 0)
    assert np.all(np.diff(fb.center_hz) > 0)
    # each filter peaks at its own center and is triangular on the mel axis
    assert np.all(fb.weights.max(axis=1) <= 1.0 + 1e-12)


def test_bark_and_gammatone_shapes():
    w, c = bark_filterbank()
    assert w.shape == (21, 257) and np.all(w >= 0) and np.all(np.diff(c) > 0)
    assert np.all(equal_loudness(c) >= 0)
    g, gc = gammatone_filterbank()
    assert g.shape == (40, 257)
    assert gc[0] == pytest.approx(200.0) and gc[-1] == pytest.approx(8000.0)
    np.testing.assert_allclose(g.max(axis=1), 1.0, atol=0.05)


# --- MelFB / LNFB ---------------------------------------------------------

def test_melfb_silence_is_floor():
    out = extract_melfb(AudioBuffer(np.zeros(4000), FS))
    assert out.rows.shape == (23, 40)
    np.testing.assert_array_equal(out.rows, FLOOR)


def test_melfb_doubling_adds_ln4(speechlike):
    a = extract_melfb(speechlike).rows
    b = extract_melfb(AudioBuffer(2 * speechlike.samples, FS)).rows
    above = a > FLOOR + 1
    assert above.mean() > 0.9
    np.testing.assert_allclose((b - a)[above], np.log(4.0), atol=1e-9)


def test_melfb_1khz_argmax_nearest_center():
    fb = mel_filterbank()
    nearest = np.argmin(np.abs(fb.center_hz - 1000.0))
    rows = extract_melfb(tone(1000.0)).rows
    assert np.all(rows.argmax(axis=1) == nearest)


def test_lnfb_flat_is_zero():
    np.testing.assert_allclose(local_normalize(np.full((3, 40), 7.5)), 0.0, atol=1e-12)


def test_lnfb_single_peak_hand_computed():
    x = np.zeros(40)
    x[20] = 5.0
    y = local_normalize(x)
    assert y[20] == pytest.approx(5.0 - 1.0)
    for k in (18, 19, 21, 22):
        assert y[k] == pytest.approx(-1.0)
    assert y[17] == 0.0 and y[23] == 0.0
    # an interior window centered on the peak sums to zero
    assert y[18:23].sum() == pytest.approx(0.0, abs=1e-12)


def test_lnfb_edges_clip_window():
    x = np.arange(40, dtype=float)
    y = local_normalize(x)
    assert y[0] == pytest.approx(0 - np.mean([0, 1, 2]))
    assert y[39] == pytest.approx(39 - np.mean([37, 38, 39]))


@pytest.mark.parametrize("gain", [0.5, 2.0, 10.0])
def test_lnfb_gain_invariance(speechlike, gain):
    a = extract_lnfb(speechlike)
    b = extract_lnfb(AudioBuffer(gain * speechlike.samples, FS))
    mel = extract_melfb(speechlike).rows
    frames = np.all(mel > FLOOR + 1, axis=1)
    np.testing.assert_allclose(b.rows[frames], a.rows[frames], atol=1e-9)


# --- RPLP ------------------------------------------------------------------

def test_rasta_constant_trajectory_decays():
    # the pole at 0.98 sets the transient: 0.98**1000 ~ 2e-9
    traj = np.full((2000, 3), [1.0, -4.0, np.log(1e-10)])
    out = rasta_filter(traj)
    assert np.abs(out[1000:]).max() < 1e-6
    assert np.abs(out[:5]).max() > 0.1


def test_rasta_removes_constant_offset(rng):
    x = rng.standard_normal((800, 4))
    a = rasta_filter(x)
    b = rasta_filter(x + 3.0)
    assert np.abs(a - b)[-1].max() < 1e-6
    assert np.abs(a - b)[:5].max() > 0.1


def test_rplp_single_frame():
    x = np.random.default_rng(3).standard_normal(400) * 0.1
    out = extract_rplp(AudioBuffer(x, FS))
    assert out.rows.shape == (1, 13) and np.all(np.isfinite(out.rows))


def test_rplp_silence_cepstrum():
    out = extract_rplp(AudioBuffer(np.zeros(1600), FS)).rows
    assert np.all(np.isfinite(out))


def test_levinson_matches_normal_equations(rng):
    for _ in range(20):
        sig = rng.standard_normal(300)
        r = np.array([sig[: 300 - k] @ sig[k:] for k in range(13)])
        a, err = levinson_durbin(r, 12)
        sol = np.linalg.solve(toeplitz(r[:12]), -r[1:13])
        np.testing.assert_allclose(a[1:], sol, rtol=1e-8, atol=1e-10)
        assert err == pytest.approx(r[0] + a[1:] @ r[1:13], rel=1e-9)


def test_levinson_singular_raises():
    with pytest.raises(FloatingPointError):
        levinson_durbin(np.zeros(13), 12)


def test_cepstrum_matches_log_spectrum_oracle(rng):
    sig = rng.standard_normal(400)
    r = np.array([sig[: 400 - k] @ sig[k:] for k in range(13)])
    a, err = levinson_durbin(r, 12)
    c = lpc_to_cepstrum(a, err, 20)
    model = err / np.abs(np.fft.fft(a, 4096)) ** 2
    oracle = np.fft.ifft(np.log(model)).real
    np.testing.assert_allclose(c, oracle[:20], atol=1e-9)


def test_white_noise_frame_near_flat_model():
    """One flat auditory frame from unit-variance noise: r[0] dominates and
    every higher cepstral magnitude stays below c0."""
    for seed in range(5):
        frame = np.random.default_rng(seed).standard_normal(400) * DEFAULT_FRAME_SPEC.window()
        power = power_spectrum(frame[None]).power_rows[0]
        w, centers = bark_filterbank()
        aud = ((power @ w.T) * equal_loudness(centers)) ** (1 / 3)
        aud[0], aud[-1] = aud[1], aud[-2]
        r = _autocorrelation(aud, 12)
        assert np.all(np.abs(r[1:]) < r[0])
        a, err = levinson_durbin(r, 12)
        np.testing.assert_allclose(a[1:], np.linalg.solve(toeplitz(r[:12]), -r[1:13]), atol=1e-10)
        c = lpc_to_cepstrum(a, err, 13)
        assert np.all(np.abs(c[1:]) < c[0])


# --- PNCC ------------------------------------------------------------------

def test_power_law_fixed_points():
    assert power_law(np.array([1.0]))[0] == 1.0
    assert power_law(np.array([0.0]))[0] == 0.0


def test_dct_of_constant():
    out = cepstra(np.full((1, 40), 2.5), 13)[0]
    assert out[0] == pytest.approx(2.5 * np.sqrt(40))
    np.testing.assert_allclose(out[1:], 0.0, atol=1e-12)


@pytest.mark.parametrize("gain", [0.5, 2.0, 10.0])
def test_pncc_gain_invariance(speechlike, gain):
    a = extract_pncc(speechlike).rows
    b = extract_pncc(AudioBuffer(gain * speechlike.samples, FS)).rows
    assert np.abs(a[5:] - b[5:]).max() < 1e-3


def test_pncc_silence_finite():
    out = extract_pncc(AudioBuffer(np.zeros(3200), FS)).rows
    assert np.all(np.isfinite(out))


def test_pncc_config_knobs(speechlike):
    a = extract_pncc(speechlike, config=PNCCConfig(n_ceps=20)).rows
    assert a.shape[1] == 20


# --- shared invariants ---------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(400, 5000))
def test_frame_counts_agree(n):
    audio = AudioBuffer(np.random.default_rng(n).standard_normal(n) * 0.1, FS)
    expected = frame_signal(audio).shape[0]
    for fn in ALL:
        out = fn(audio)
        assert out.num_frames == expected
        assert out.dim == out.kind.dim


def test_dims_and_kinds(speechlike):
    dims = {k: extract(speechlike, k).dim for k in FeatureKind}
    assert dims == {FeatureKind.MELFB: 40, FeatureKind.LNFB: 40, FeatureKind.PNCC: 13,
                    FeatureKind.RPLP: 13}
    assert FeatureKind.parse("pncc") is FeatureKind.PNCC
    assert FeatureKind.parse(2) is FeatureKind.RPLP


def test_determinism(speechlike):
    for fn in ALL:
        assert fn(speechlike).rows.tobytes() == fn(speechlike).rows.tobytes()


def test_rejects_wrong_rate():
    with pytest.raises(Exception):
        extract_melfb(AudioBuffer(np.zeros(800), 8000))


def test_feature_matrix_validation():
    with pytest.raises(Exception):
        FeatureMatrix(np.array([[np.inf]]), FeatureKind.MELFB)


# --- estimator API -------------------------------------------------------------

@pytest.mark.parametrize("cls", [MelFBExtractor, LNFBExtractor, RPLPExtractor, PNCCExtractor])
def test_extractor_estimators(cls, speechlike):
    est = cls()
    assert clone(est).get_params() == est.get_params()
    out = est.fit([speechlike]).transform([speechlike, speechlike.samples])
    assert len(out) == 2 and out[0].dim == est.n_features_out_
    assert len(est.get_feature_names_out()) == est.n_features_out_
    np.testing.assert_array_equal(out[0].rows, out[1].rows)


def test_make_extractor():
    assert isinstance(make_extractor("lnfb", width=7), LNFBExtractor)
    assert make_extractor("lnfb", width=7).get_params()["width"] == 7


# --- RFE1 files ------------------------------------------------------------------

def test_rfe1_layout_and_roundtrip(tmp_path, speechlike):
    feats = extract_pncc(speechlike)
    write_rfe1(tmp_path / "a.rfe", feats)
    blob = (tmp_path / "a.rfe").read_bytes()
    assert blob[:4] == b"RFE1" and blob[4] == 4
    assert int.from_bytes(blob[5:9], "little") == feats.num_frames
    assert int.from_bytes(blob[9:13], "little") == 13
    assert len(blob) == 13 + 4 * feats.num_frames * 13
    back = read_rfe1(tmp_path / "a.rfe")
    assert back.kind is FeatureKind.PNCC
    np.testing.assert_array_equal(back.rows, feats.rows.astype(np.float32))
    write_csv(tmp_path / "a.csv", feats)
    assert len((tmp_path / "a.csv").read_text().splitlines()) == feats.num_frames


def test_rfe1_rejects_corruption(tmp_path):
    (tmp_path / "m.rfe").write_bytes(b"RFE2" + bytes(9))
    (tmp_path / "k.rfe").write_bytes(b"RFE1" + bytes([9]) + bytes(8))
    (tmp_path / "t.rfe").write_bytes(b"RFE1" + bytes([1]) + (1).to_bytes(4, "little") * 2)
    for name in ("m", "k", "t"):
        with pytest.raises(FileFormatError):
            read_rfe1(tmp_path / f"{name}.rfe")
