"""Reverberant data augmentation and the clean/reverb manifest."""

import csv
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np
from scipy.signal import fftconvolve
from sklearn.base import BaseEstimator, TransformerMixin

from .._validation import check_utterances
from ..exceptions import RevfuseError
from ..signal import AudioBuffer, read_wav, write_wav
from .rir import synthesize_rir
from .sampling import SamplingProtocol, pick_rirs, sample_room

logger = logging.getLogger(__name__)

PEAK_TARGET = 0.95


def augment(audio: AudioBuffer, rir) -> AudioBuffer:
    """Convolve with the RIR, keep the first ``len(audio)`` samples.

    The result is rescaled to a peak of 0.95 only if it would clip.
    """
    if audio.sample_rate_hz != rir.sample_rate_hz:
        raise RevfuseError(
            f"sample-rate mismatch: audio {audio.sample_rate_hz} Hz, RIR {rir.sample_rate_hz} Hz"
        )
    out = fftconvolve(audio.samples, rir.taps)[: len(audio)]
    peak = np.max(np.abs(out)) if out.size else 0.0
    if peak > 1.0:
        out = out * (PEAK_TARGET / peak)
    return AudioBuffer(out, audio.sample_rate_hz)


MANIFEST_COLUMNS = (
    "utterance_id", "source_path", "output_path", "condition", "rt60_target_s",
    "achieved_rt60_s", "distance_m", "seed", "rir_index",
)


@dataclass
class ManifestRow:
    utterance_id: str
    source_path: str
    output_path: str
    condition: str
    rt60_target_s: str = ""
    achieved_rt60_s: str = ""
    distance_m: str = ""
    seed: str = ""
    rir_index: str = ""


def _fmt(x, digits=6):
    return f"{x:.{digits}f}"


def build_augmented_manifest(utterances, protocol: SamplingProtocol, output_dir="augmented"):
    """One clean row plus ``rirs_per_utterance`` reverberant rows per utterance.

    ``utterances`` is a sequence of ``(utterance_id, source_path)`` pairs.
    Catalog indices are picked per utterance from the ``(seed, utterance
    index)`` stream; RIRs are not synthesized here.
    """
    utterances = list(utterances)
    if not utterances:
        raise RevfuseError("utterance list is empty")
    rows = []
    for u_idx, (utt_id, path) in enumerate(utterances):
        rows.append(ManifestRow(utt_id, path, path, "clean", seed=str(protocol.seed)))
        for copy, rir_index in enumerate(pick_rirs(protocol, u_idx)):
            cfg = sample_room(protocol, rir_index)
            out = os.path.join(output_dir, f"{utt_id}_rev{copy}.wav")
            rows.append(ManifestRow(
                utt_id, path, out, "reverb",
                rt60_target_s=_fmt(cfg.target_rt60_s),
                distance_m=_fmt(cfg.distance_m),
                seed=str(protocol.seed),
                rir_index=str(rir_index),
            ))
    return rows


def write_manifest(path_or_file, rows):
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for row in rows:
            writer.writerow([getattr(row, c) for c in MANIFEST_COLUMNS])
    finally:
        if own:
            fh.close()


def read_manifest(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(MANIFEST_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise RevfuseError(f"{path}: manifest missing columns {sorted(missing)}")
        names = {f.name for f in fields(ManifestRow)}
        return [ManifestRow(**{k: v for k, v in r.items() if k in names}) for r in reader]


def render_manifest(rows, protocol: SamplingProtocol, jobs=1):
    """Synthesize RIRs and write every reverberant row's output file.

    Per-file failures are logged and collected; processing continues.
    Returns ``(updated_rows, failures)`` where failures holds
    ``(output_path, message)`` pairs, in manifest order.
    """
    needed = sorted({int(r.rir_index) for r in rows if r.condition == "reverb"})

    def make(idx):
        return idx, synthesize_rir(sample_room(protocol, idx))

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rirs = dict(pool.map(make, needed))

    failures = []
    updated = []
    for row in rows:
        if row.condition != "reverb":
            updated.append(row)
            continue
        rir = rirs[int(row.rir_index)]
        try:
            audio = read_wav(row.source_path)
            parent = os.path.dirname(row.output_path)
            if parent:
                os.makedirs(parent, exist_ok=True)
            write_wav(row.output_path, augment(audio, rir))
        except (OSError, RevfuseError) as exc:
            logger.error("augment %s failed: %s", row.output_path, exc)
            failures.append((row.output_path, str(exc)))
        row = ManifestRow(**{**row.__dict__, "achieved_rt60_s": _fmt(rir.achieved_rt60_s)})
        updated.append(row)
    return updated, failures


class ReverbAugmenter(TransformerMixin, BaseEstimator):
    """Convolve utterances with catalog RIRs drawn by the sampling protocol.

    ``transform`` returns ``rirs_per_utterance`` reverberant copies per input,
    utterance-major, using the same catalog picks as the manifest builder.
    """

    def __init__(self, seed=0, rirs_per_utterance=3, catalog_size=30_000,
                 rt_range_s=(0.4, 1.99), sample_rate_hz=16000):
        self.seed = seed
        self.rirs_per_utterance = rirs_per_utterance
        self.catalog_size = catalog_size
        self.rt_range_s = rt_range_s
        self.sample_rate_hz = sample_rate_hz

    def fit(self, X=None, y=None):
        self.protocol_ = SamplingProtocol(
            rt_range_s=self.rt_range_s, rirs_per_utterance=self.rirs_per_utterance,
            catalog_size=self.catalog_size, seed=self.seed, sample_rate_hz=self.sample_rate_hz,
        )
        return self

    def transform(self, X):
        utterances = check_utterances(X, self.sample_rate_hz)
        out = []
        for u_idx, audio in enumerate(utterances):
            for rir_index in pick_rirs(self.protocol_, u_idx):
                rir = synthesize_rir(sample_room(self.protocol_, rir_index), estimate_rt60=False)
                out.append(augment(audio, rir))
        return out
