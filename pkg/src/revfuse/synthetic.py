"""Deterministic synthetic acoustic scores for demos and tests.

Real acoustic-model inference is outside this package. To still exercise
fusion and voting end to end, scores are fabricated from a reference
transcript: every word occupies a block of frames separated by silence, the
true state gets a fixed margin over Gaussian noise, and each system corrupts
a few words by boosting a competing state. Corruptions are assigned so that
every word is corrupted by fewer than half of the systems, which is the
regime where score averaging repairs them.
"""

import numpy as np

from .fusion.decode import SILENCE
from .fusion.scores import ScoreMatrix
from .reverb.sampling import rng_for

DEMO_VOCABULARY = (
    "the", "room", "speech", "signal", "echo", "wall", "voice", "model",
    "sound", "time", "noise", "far", "field", "test", "data", "word",
)


def demo_labels(vocabulary=DEMO_VOCABULARY):
    labels = {0: SILENCE}
    labels.update({i + 1: w for i, w in enumerate(vocabulary)})
    return labels


def demo_references(seed, num_utterances=3, words_per_utterance=6, vocabulary=DEMO_VOCABULARY):
    refs = {}
    for u in range(num_utterances):
        rng = rng_for(seed, u, "demo-transcript")
        words = rng.choice(len(vocabulary), size=words_per_utterance)
        refs[f"utt{u:03d}"] = " ".join(vocabulary[i] for i in words)
    return refs


def synthetic_scores(tokens, labels, system_ids, seed, utterance_index, frames_per_word=8,
                     silence_frames=3, margin=3.0, noise=0.3, error_boost=1.0, error_rate=0.35):
    """One ScoreMatrix per system for the transcript ``tokens``."""
    state_of = {tok: s for s, tok in labels.items()}
    sil = state_of[SILENCE]
    n_states = max(labels) + 1
    n_sys = len(system_ids)
    truth = [sil] * silence_frames
    spans = []
    for tok in tokens:
        spans.append((len(truth), len(truth) + frames_per_word))
        truth += [state_of[tok]] * frames_per_word + [sil] * silence_frames
    truth = np.array(truth)
    n_frames = len(truth)

    plan = rng_for(seed, utterance_index, "synthetic-errors")
    max_bad = (n_sys - 1) // 2
    corrupt = np.zeros((n_sys, len(tokens)), dtype=bool)
    wrong_state = np.zeros((n_sys, len(tokens)), dtype=int)
    for w in range(len(tokens)):
        if max_bad == 0 or plan.random() >= error_rate:
            continue
        bad = plan.choice(n_sys, size=plan.integers(1, max_bad + 1), replace=False)
        for r in bad:
            corrupt[r, w] = True
            choices = [s for s in range(n_states) if s != truth[spans[w][0]]]
            wrong_state[r, w] = plan.choice(choices)

    systems = []
    for r, sid in enumerate(system_ids):
        rng = rng_for(seed, utterance_index, f"synthetic-scores/{sid}")
        scores = noise * rng.standard_normal((n_frames, n_states))
        scores[np.arange(n_frames), truth] += margin
        for w, (a, b) in enumerate(spans):
            if corrupt[r, w]:
                scores[a:b, wrong_state[r, w]] += margin + error_boost
        # normalize rows to log posteriors
        peak = scores.max(axis=1, keepdims=True)
        scores -= peak + np.log(np.exp(scores - peak).sum(axis=1, keepdims=True))
        systems.append(ScoreMatrix(scores, sid))
    return systems
