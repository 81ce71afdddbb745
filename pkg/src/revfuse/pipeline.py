"""End-to-end run: augment -> extract -> scores -> fuse/decode/vote -> score -> report."""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .eval import ConditionGrid, corpus_wer, read_transcripts, render_report
from .exceptions import ConfigurationError, RevfuseError, ScoresUnavailableError
from .features import FeatureKind, extract, write_rfe1
from .fusion import (
    FusionWeights, cascade_combine, fuse_scores, greedy_decode, read_label_map, read_rsc1,
    rover_combine, uniform_weights, write_hypotheses, write_label_map, write_rsc1,
)
from .reverb import (
    SamplingProtocol, build_augmented_manifest, render_manifest, write_manifest,
)
from .signal import FrameSpec, read_wav
from .synthetic import demo_labels, demo_references, synthetic_scores

logger = logging.getLogger(__name__)

ALL_KINDS = ("melfb", "lnfb", "pncc", "rplp")


class PipelineStageError(RevfuseError):
    def __init__(self, stage, cause):
        self.stage = stage
        super().__init__(f"stage '{stage}' failed: {cause}")


@dataclass
class PipelineConfig:
    seed: int = 0
    feature_kinds: tuple = ALL_KINDS
    window_len: int = 400
    hop: int = 160
    fft_size: int = 512
    protocol: dict = field(default_factory=dict)
    fusion_mode: str = "uniform"
    weights: list = None
    alpha: float = 1.0
    out_dir: str = "revfuse_run"
    wav_list: str = None
    references: str = None
    labels: str = None
    conditions: str = None
    scores_dir: str = None
    synthetic: bool = False
    synthetic_utterances: int = 5
    augment: bool = True
    jobs: int = 1

    def __post_init__(self):
        self.feature_kinds = tuple(FeatureKind.parse(k).label for k in self.feature_kinds)
        if not self.feature_kinds:
            raise ConfigurationError("feature_kinds must not be empty")
        if self.fusion_mode not in ("uniform", "per_system"):
            raise ConfigurationError(f"unknown fusion mode {self.fusion_mode!r}")
        if self.fusion_mode == "per_system" and (
            self.weights is None or len(self.weights) != len(self.feature_kinds)
        ):
            raise ConfigurationError("per_system fusion needs one weight per feature kind")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError("alpha must lie in [0, 1]")

    @classmethod
    def from_dict(cls, data):
        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigurationError(f"unknown pipeline config keys: {unknown}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def sampling_protocol(self):
        return SamplingProtocol.from_dict({"seed": self.seed, **self.protocol})

    def effective(self):
        data = asdict(self)
        data["feature_kinds"] = list(self.feature_kinds)
        data["protocol"] = asdict(self.sampling_protocol())
        return data


def _stage(name):
    def wrap(fn):
        def run(*args, **kwargs):
            logger.info("stage %s", name)
            try:
                return fn(*args, **kwargs)
            except PipelineStageError:
                raise
            except (RevfuseError, OSError, ValueError) as exc:
                raise PipelineStageError(name, exc) from exc
        return run
    return wrap


def _read_wav_list(path):
    items = []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if parts:
                if len(parts) != 2:
                    raise RevfuseError(f"{path}: expected 'utterance_id path' per line")
                items.append((parts[0], parts[1]))
    return items


def _read_conditions(path):
    if path is None:
        return {}
    return {k: v.strip() for k, v in read_transcripts(path).items()}


@_stage("augment")
def stage_augment(cfg, utterances):
    protocol = cfg.sampling_protocol()
    out = os.path.join(cfg.out_dir, "augmented")
    rows = build_augmented_manifest(utterances, protocol, out)
    rows, failures = render_manifest(rows, protocol, cfg.jobs)
    write_manifest(os.path.join(cfg.out_dir, "manifest.csv"), rows)
    failed = {path for path, _ in failures}
    if failed:
        logger.warning("%d augmentation failures", len(failed))
    items = []
    for r in rows:
        if r.output_path in failed:
            continue
        name = r.utterance_id if r.condition == "clean" else os.path.splitext(os.path.basename(r.output_path))[0]
        items.append((name, r.output_path))
    return items


@_stage("extract")
def stage_extract(cfg, wavs):
    spec = FrameSpec(cfg.window_len, cfg.hop)
    out = os.path.join(cfg.out_dir, "features")
    os.makedirs(out, exist_ok=True)

    def one(item):
        utt_id, path = item
        audio = read_wav(path)
        counts = {}
        for kind in cfg.feature_kinds:
            feats = extract(audio, kind, spec, cfg.fft_size)
            write_rfe1(os.path.join(out, f"{utt_id}.{kind}.rfe"), feats)
            counts[kind] = feats.num_frames
        return utt_id, counts

    with ThreadPoolExecutor(max_workers=max(1, cfg.jobs)) as pool:
        return dict(pool.map(one, wavs))


@_stage("scores")
def stage_scores(cfg, references, labels):
    scores = {}
    if cfg.synthetic:
        out = os.path.join(cfg.out_dir, "scores")
        os.makedirs(out, exist_ok=True)
        for u, (utt_id, text) in enumerate(references.items()):
            systems = synthetic_scores(text.split(), labels, cfg.feature_kinds, cfg.seed, u)
            for s in systems:
                write_rsc1(os.path.join(out, f"{utt_id}.{s.system_id}.rsc"), s)
            scores[utt_id] = systems
        return scores
    if not cfg.scores_dir:
        raise ScoresUnavailableError(
            "scores unavailable: no scores_dir given and synthetic scores not requested"
        )
    for utt_id in references:
        systems = []
        for kind in cfg.feature_kinds:
            path = os.path.join(cfg.scores_dir, f"{utt_id}.{kind}.rsc")
            if not os.path.exists(path):
                raise ScoresUnavailableError(f"scores unavailable: missing {path}")
            systems.append(read_rsc1(path, kind))
        scores[utt_id] = systems
    return scores


def _fusion_weights(cfg):
    if cfg.fusion_mode == "uniform":
        return uniform_weights(len(cfg.feature_kinds))
    return FusionWeights("per_system", cfg.weights)


@_stage("combine")
def stage_combine(cfg, scores, labels):
    """Hypotheses per row label: each system, dnn-output, output-level, cascade."""
    hyps = {k: {} for k in (*cfg.feature_kinds, "dnn-output", "output-level", "cascade")}
    weights = _fusion_weights(cfg)
    for utt_id, systems in scores.items():
        individual = [greedy_decode(s, labels) for s in systems]
        for kind, hyp in zip(cfg.feature_kinds, individual):
            hyps[kind][utt_id] = hyp
        fused = greedy_decode(fuse_scores(systems, weights), labels)
        hyps["dnn-output"][utt_id] = fused
        if len(individual) > 1:
            hyps["output-level"][utt_id] = rover_combine(individual, cfg.alpha)
        else:
            hyps["output-level"][utt_id] = individual[0]
        if cfg.fusion_mode == "uniform":
            hyps["cascade"][utt_id] = cascade_combine(systems, labels, cfg.alpha)
        else:
            hyps["cascade"][utt_id] = rover_combine([fused, *individual], cfg.alpha)
    return hyps


@_stage("score")
def stage_score(cfg, references, hyps, conditions):
    cond_of = {u: conditions.get(u, "all") for u in references}
    cond_order = list(dict.fromkeys(cond_of[u] for u in references))
    grid = ConditionGrid()
    for label, by_utt in hyps.items():
        cells = {}
        for cond in cond_order:
            refs = {u: t for u, t in references.items() if cond_of[u] == cond}
            text = {u: h.text() for u, h in by_utt.items()}
            cells[cond] = corpus_wer(refs, text).wer_percent
        grid.add_row(label, cells)
    return grid


@_stage("report")
def stage_report(cfg, grid, hyps):
    hyp_dir = os.path.join(cfg.out_dir, "hyps")
    os.makedirs(hyp_dir, exist_ok=True)
    for label, by_utt in hyps.items():
        ids = list(by_utt)
        write_hypotheses(os.path.join(hyp_dir, f"{label}.jsonl"), [by_utt[u] for u in ids], ids)
    text = render_report(grid, cfg.feature_kinds[0], title="WER (%) by system and condition")
    with open(os.path.join(cfg.out_dir, "report.txt"), "w") as fh:
        fh.write(text)
    with open(os.path.join(cfg.out_dir, "report.csv"), "w") as fh:
        fh.write(grid.to_csv())
    return text


def run_pipeline(cfg: PipelineConfig):
    """Run every stage and return the rendered report text."""
    os.makedirs(cfg.out_dir, exist_ok=True)
    effective = cfg.effective()
    with open(os.path.join(cfg.out_dir, "run.log"), "w") as fh:
        fh.write(f"revfuse {__version__}\n")
        fh.write(json.dumps(effective, indent=2, sort_keys=True) + "\n")
    logger.info("revfuse %s effective config: %s", __version__, json.dumps(effective, sort_keys=True))

    if cfg.wav_list:
        wavs = _read_wav_list(cfg.wav_list)
        if cfg.augment:
            wavs = stage_augment(cfg, wavs)
        stage_extract(cfg, wavs)

    if not cfg.synthetic and not cfg.scores_dir:
        raise PipelineStageError("scores", ScoresUnavailableError(
            "scores unavailable: no scores_dir given and synthetic scores not requested"))
    if cfg.references:
        references = read_transcripts(cfg.references)
    elif cfg.synthetic:
        references = demo_references(cfg.seed, cfg.synthetic_utterances, words_per_utterance=8)
    else:
        raise PipelineStageError("scores", "no reference transcripts configured")

    if cfg.labels:
        labels = read_label_map(cfg.labels)
    elif cfg.synthetic:
        labels = demo_labels()
        write_label_map(os.path.join(cfg.out_dir, "labels.txt"), labels)
    else:
        raise PipelineStageError("scores", "no label map configured")

    scores = stage_scores(cfg, references, labels)
    hyps = stage_combine(cfg, scores, labels)
    grid = stage_score(cfg, references, hyps, _read_conditions(cfg.conditions))
    return stage_report(cfg, grid, hyps)
