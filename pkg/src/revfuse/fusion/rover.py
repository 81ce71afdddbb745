"""Word-level voting over multiple hypotheses (ROVER).

Hypotheses are merged one at a time, in input order, into a word transition
network: a list of slots, each holding one arc (a word or NULL) per system
merged so far. Each new hypothesis is aligned against the slots with a unit
cost edit distance, where a word matches a slot if any system already put
that word there.
"""

from dataclasses import dataclass

from sklearn.base import BaseEstimator

from ..exceptions import RevfuseError
from .hypothesis import Word, WordHypothesis

NULL = None


@dataclass
class _Slot:
    arcs: list  # one Word or NULL per merged system

    def tokens(self):
        return {w.token for w in self.arcs if w is not NULL}


def _align(slots, words):
    """Edit alignment of ``words`` against ``slots``.

    Returns a list of ``(slot_index | None, word | None)`` pairs in order.
    Backtrace prefers match/substitution, then deletion, then insertion.
    """
    n, m = len(slots), len(words)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
    for j in range(1, m + 1):
        cost[0][j] = j
    slot_tokens = [s.tokens() for s in slots]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = cost[i - 1][j - 1] + (words[j - 1].token not in slot_tokens[i - 1])
            cost[i][j] = min(sub, cost[i - 1][j] + 1, cost[i][j - 1] + 1)
    path = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and cost[i][j] == cost[i - 1][j - 1] + (
            words[j - 1].token not in slot_tokens[i - 1]
        ):
            path.append((i - 1, words[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and cost[i][j] == cost[i - 1][j] + 1:
            path.append((i - 1, NULL))
            i -= 1
        else:
            path.append((None, words[j - 1]))
            j -= 1
    return path[::-1]


def build_wtn(hyps):
    """Merge hypotheses into a list of slots (the word transition network)."""
    slots = []
    for k, hyp in enumerate(hyps):
        if k == 0:
            slots = [_Slot([w]) for w in hyp.words]
            continue
        merged = []
        for slot_idx, word in _align(slots, list(hyp.words)):
            if slot_idx is None:
                merged.append(_Slot([NULL] * k + [word]))
            else:
                slot = slots[slot_idx]
                merged.append(_Slot(slot.arcs + [word]))
        slots = merged
    return slots


def vote_slot(slot, alpha, null_conf=0.0):
    """Pick the winning arc of one slot.

    score = alpha * (votes / systems) + (1 - alpha) * (max confidence).
    Ties go to the candidate whose first supporter has the lowest index.

    Returns ``(token or NULL, score, first_supporter_index)``.
    """
    n_sys = len(slot.arcs)
    candidates = {}
    for r, arc in enumerate(slot.arcs):
        key = NULL if arc is NULL else arc.token
        conf = null_conf if arc is NULL else arc.confidence
        if key in candidates:
            count, best_conf, first = candidates[key]
            candidates[key] = (count + 1, max(best_conf, conf), first)
        else:
            candidates[key] = (1, conf, r)
    best = None
    for key, (count, conf, first) in candidates.items():
        score = alpha * count / n_sys + (1.0 - alpha) * conf
        if best is None or score > best[1] or (score == best[1] and first < best[2]):
            best = (key, score, first)
    return best


def rover_combine(hyps, alpha=1.0, null_conf=0.0, system_id="rover"):
    """Vote ``hyps`` slot by slot; NULL winners drop the slot.

    Emitted words keep the timing of their first supporter and the highest
    confidence among their supporters.
    """
    hyps = list(hyps)
    if len(hyps) < 2:
        raise RevfuseError(f"ROVER needs at least 2 hypotheses, got {len(hyps)}")
    if not 0.0 <= alpha <= 1.0:
        raise RevfuseError(f"alpha must lie in [0, 1], got {alpha}")
    words = []
    last_start = 0
    for slot in build_wtn(hyps):
        token, score, first = vote_slot(slot, alpha, null_conf)
        if token is NULL:
            continue
        supporters = [a for a in slot.arcs if a is not NULL and a.token == token]
        src = supporters[0]
        start = max(src.start_ms, last_start)
        conf = max(a.confidence for a in supporters)
        words.append(Word(token, start, max(src.end_ms, start), conf))
        last_start = start
    return WordHypothesis(tuple(words), system_id)


class RoverCombiner(BaseEstimator):
    """Estimator form of :func:`rover_combine`; ``predict`` takes the list of
    hypotheses for one utterance."""

    def __init__(self, alpha=1.0, null_conf=0.0):
        self.alpha = alpha
        self.null_conf = null_conf

    def fit(self, X=None, y=None):
        if not 0.0 <= self.alpha <= 1.0:
            raise RevfuseError(f"alpha must lie in [0, 1], got {self.alpha}")
        self.is_fitted_ = True
        return self

    def predict(self, X):
        return rover_combine(X, self.alpha, self.null_conf)
