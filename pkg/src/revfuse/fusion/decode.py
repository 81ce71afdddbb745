"""Frame-synchronous greedy decoder.

This is a stand-in for a lattice decoder: it lets fused scores be turned
into word hypotheses so both combination levels can run end to end.
"""

import numpy as np
from scipy.special import softmax

from ..exceptions import RevfuseError
from .hypothesis import Word, WordHypothesis

SILENCE = "<sil>"


def greedy_decode(scores, labels, hop_ms=10.0, silence=SILENCE):
    """Per-frame argmax, collapse repeats, drop silence.

    Ties go to the lowest state index. A word's confidence is the mean, over
    its frames, of the softmax probability of the winning state.
    """
    matrix = scores.scores
    system_id = scores.system_id
    if matrix.size == 0:
        return WordHypothesis((), system_id)
    missing = [s for s in range(matrix.shape[1]) if s not in labels]
    if missing:
        raise RevfuseError(f"label map has no token for states {missing[:10]}")
    best = np.argmax(matrix, axis=1)
    post = softmax(matrix, axis=1)[np.arange(matrix.shape[0]), best]

    words = []
    start = 0
    for n in range(1, len(best) + 1):
        if n < len(best) and best[n] == best[start]:
            continue
        token = labels[int(best[start])]
        if token != silence:
            conf = float(np.clip(post[start:n].mean(), 0.0, 1.0))
            words.append(Word(token, int(round(start * hop_ms)), int(round(n * hop_ms)), conf))
        start = n
    return WordHypothesis(tuple(words), system_id)
