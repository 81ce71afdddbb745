"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

import argparse
import json
import logging
import os
import sys

from . import __version__
from .eval import ConditionGrid, corpus_wer, read_transcripts, render_report
from .exceptions import ConfigurationError, RevfuseError
from .features import FeatureKind, extract, write_csv, write_rfe1
from .fusion import (
    FusionWeights, fuse_scores, greedy_decode, read_hypotheses, read_label_map, read_rsc1,
    rover_combine, uniform_weights, write_hypotheses, write_rsc1,
)
from .reverb import (
    SamplingProtocol, build_augmented_manifest, read_manifest, render_manifest, sample_room,
    synthesize_rir, write_manifest, write_rir_wav,
)
from .signal import FrameSpec, read_wav

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
SEED_ENV = "REVFUSE_SEED"

logger = logging.getLogger("revfuse")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _protocol(args):
    seed = _seed(args)
    if getattr(args, "protocol", None):
        with open(args.protocol) as fh:
            data = json.load(fh)
        if getattr(args, "seed", None) is not None or "seed" not in data:
            data["seed"] = seed
        return SamplingProtocol.from_dict(data)
    return SamplingProtocol(seed=seed)


def cmd_extract(args):
    if not args.inputs:
        raise UsageError("extract needs at least one input WAV")
    kinds = list(FeatureKind) if args.kind == ["all"] else [FeatureKind.parse(k) for k in args.kind]
    spec = FrameSpec(args.window_len, args.hop)
    os.makedirs(args.out_dir, exist_ok=True)
    ok = 0
    for path in args.inputs:
        stem = os.path.splitext(os.path.basename(path))[0]
        try:
            audio = read_wav(path)
            for kind in kinds:
                feats = extract(audio, kind, spec, args.fft_size)
                out = os.path.join(args.out_dir, f"{stem}.{kind.label}.rfe")
                write_rfe1(out, feats)
                if args.csv:
                    write_csv(out[:-4] + ".csv", feats)
                print(f"{out}\tframes={feats.num_frames}\tdim={feats.dim}")
            ok += 1
        except (OSError, RevfuseError) as exc:
            logger.error("%s: %s", path, exc)
    print(f"extracted {ok}/{len(args.inputs)} inputs")
    return EXIT_OK if ok else EXIT_DATA


def cmd_rir(args):
    protocol = _protocol(args)
    os.makedirs(args.out, exist_ok=True)
    rows = ["index,rt60_target_s,achieved_rt60_s,distance_m,length_x,width_y,height_z"]
    for index in range(args.start, args.start + args.count):
        cfg = sample_room(protocol, index)
        rir = synthesize_rir(cfg)
        write_rir_wav(os.path.join(args.out, f"rir_{index:05d}.wav"), rir)
        dims = ",".join(f"{d:.4f}" for d in cfg.dims_m)
        rows.append(f"{index},{cfg.target_rt60_s:.4f},{rir.achieved_rt60_s:.4f},"
                    f"{cfg.distance_m:.4f},{dims}")
    with open(os.path.join(args.out, "rirs.csv"), "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {args.count} RIRs to {args.out}")
    return EXIT_OK


def cmd_augment(args):
    protocol = _protocol(args)
    if args.from_list:
        utterances = []
        with open(args.from_list) as fh:
            for line in fh:
                parts = line.split()
                if parts:
                    utterances.append((parts[0], parts[1]))
        rows = build_augmented_manifest(utterances, protocol, args.out_dir)
    else:
        rows = read_manifest(args.manifest)
    if not args.no_render:
        rows, failures = render_manifest(rows, protocol, args.jobs)
    else:
        failures = []
    write_manifest(args.manifest, rows)
    n_rev = sum(r.condition == "reverb" for r in rows)
    print(f"manifest {args.manifest}: {len(rows)} rows, {n_rev} reverberant, {len(failures)} failures")
    for path, msg in failures:
        print(f"FAILED {path}: {msg}", file=sys.stderr)
    return EXIT_DATA if failures and len(failures) == n_rev else EXIT_OK


def _parse_weights(flag, n):
    if flag == "uniform":
        return uniform_weights(n)
    try:
        values = [float(w) for w in flag.split(",")]
    except ValueError:
        raise UsageError(f"--weights must be 'uniform' or comma-separated numbers, got {flag!r}") from None
    if len(values) != n:
        raise UsageError(f"{len(values)} weights given for {n} score files")
    return FusionWeights("per_system", values)


def cmd_fuse(args):
    weights = _parse_weights(args.weights, len(args.scores))
    systems = [read_rsc1(p, p) for p in args.scores]
    fused = fuse_scores(systems, weights)
    write_rsc1(args.out, fused)
    print(f"fused {len(systems)} systems -> {args.out} ({fused.num_frames}x{fused.num_states})")
    return EXIT_OK


def cmd_decode(args):
    labels = read_label_map(args.labels)
    hyps, ids = [], []
    for path in args.scores:
        system = args.system or os.path.splitext(os.path.basename(path))[0]
        hyps.append(greedy_decode(read_rsc1(path, system), labels, args.hop_ms))
        ids.append(os.path.basename(path).split(".")[0])
    write_hypotheses(args.out, hyps, ids)
    return EXIT_OK


def cmd_rover(args):
    if len(args.hyps) < 2:
        raise UsageError("rover needs at least two hypothesis files")
    per_file = [read_hypotheses(p) for p in args.hyps]
    n = len(per_file[0])
    if any(len(f) != n for f in per_file):
        raise RevfuseError("hypothesis files differ in number of utterances")
    out, ids = [], []
    for i in range(n):
        ids.append(per_file[0][i][0])
        out.append(rover_combine([f[i][1] for f in per_file], args.alpha))
    write_hypotheses(args.out, out, ids if all(u is not None for u in ids) else None)
    return EXIT_OK


def _load_hyp_texts(path):
    if path.endswith(".jsonl"):
        texts = {}
        for i, (uid, hyp) in enumerate(read_hypotheses(path)):
            texts[uid if uid is not None else str(i)] = hyp.text()
        return texts
    return read_transcripts(path)


def cmd_score(args):
    refs = read_transcripts(args.ref)
    hyps = _load_hyp_texts(args.hyp)
    print(corpus_wer(refs, hyps).summary())
    return EXIT_OK


def cmd_report(args):
    grid = ConditionGrid.from_csv(args.grid)
    text = render_report(grid, args.baseline, args.title)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.csv_out:
        with open(args.csv_out, "w") as fh:
            fh.write(grid.to_csv())
    return EXIT_OK


def cmd_pipeline(args):
    from .pipeline import PipelineConfig, run_pipeline

    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    data["seed"] = _seed(args) if (args.seed is not None or "seed" not in data) else data["seed"]
    if args.synthetic:
        data["synthetic"] = True
    if args.out_dir:
        data["out_dir"] = args.out_dir
    if args.jobs is not None:
        data["jobs"] = args.jobs
    sys.stdout.write(run_pipeline(PipelineConfig.from_dict(data)))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="revfuse", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"revfuse {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("extract", help="compute features from 16 kHz WAV files")
    s.add_argument("inputs", nargs="*")
    s.add_argument("--kind", action="append", default=None,
                   help="melfb, lnfb, pncc, rplp or all (repeatable)")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--window-len", type=int, default=400)
    s.add_argument("--hop", type=int, default=160)
    s.add_argument("--fft-size", type=int, help="power of two >= window length (default: next power of two)")
    s.add_argument("--csv", action="store_true", help="also write CSV exports")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("rir", help="synthesize catalog RIRs")
    s.add_argument("--seed", type=int)
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--protocol")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_rir)

    s = sub.add_parser("augment", help="build and/or render a reverberation manifest")
    s.add_argument("--manifest", required=True)
    s.add_argument("--protocol")
    s.add_argument("--seed", type=int)
    s.add_argument("--from-list", help="'utterance_id path' list; writes a new manifest")
    s.add_argument("--out-dir", default="augmented")
    s.add_argument("--no-render", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_augment)

    s = sub.add_parser("fuse", help="combine RSC1 score files")
    s.add_argument("scores", nargs="+")
    s.add_argument("--weights", default="uniform")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_fuse)

    s = sub.add_parser("decode", help="greedy-decode RSC1 score files to hypotheses")
    s.add_argument("scores", nargs="+")
    s.add_argument("--labels", required=True)
    s.add_argument("--system")
    s.add_argument("--hop-ms", type=float, default=10.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("rover", help="vote hypothesis files")
    s.add_argument("hyps", nargs="+")
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_rover)

    s = sub.add_parser("score", help="WER of hypotheses against references")
    s.add_argument("--ref", required=True)
    s.add_argument("--hyp", required=True)
    s.set_defaults(func=cmd_score)

    s = sub.add_parser("report", help="render a WER grid CSV as a table")
    s.add_argument("--grid", required=True)
    s.add_argument("--baseline", required=True)
    s.add_argument("--title")
    s.add_argument("--out")
    s.add_argument("--csv-out")
    s.set_defaults(func=cmd_report)

    s = sub.add_parser("pipeline", help="run the end-to-end pipeline")
    s.add_argument("--config")
    s.add_argument("--seed", type=int)
    s.add_argument("--synthetic", action="store_true")
    s.add_argument("--out-dir")
    s.add_argument("--jobs", type=int)
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "extract" and args.kind is None:
        args.kind = ["all"]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"revfuse {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"revfuse {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RevfuseError, OSError) as exc:
        print(f"revfuse {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        logger.exception("internal error")
        print(f"revfuse {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
