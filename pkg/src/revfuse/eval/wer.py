"""Word error rate via unit-cost edit alignment."""

from dataclasses import dataclass

import numba
import numpy as np

from ..exceptions import EmptyInputError, FileFormatError

# One integer per DP cell: cost * _SCALE + (insertions + deletions). Minimizing
# it minimizes cost first and, among minimal alignments, prefers substitutions
# over insertion/deletion pairs. S, D and I follow from cost, the non-sub count
# and the two lengths.
_SCALE = 1 << 20


@numba.njit(cache=True, nogil=True)
def _alignment_key(ref, hyp, row):
    n_ref = ref.shape[0]
    n_hyp = hyp.shape[0]
    step = _SCALE + 1
    for j in range(n_hyp + 1):
        row[j] = j * step
    for i in range(1, n_ref + 1):
        diag = row[0]
        row[0] = i * step
        for j in range(1, n_hyp + 1):
            up = row[j]
            best = diag + (_SCALE if ref[i - 1] != hyp[j - 1] else 0)
            if up + step < best:
                best = up + step
            if row[j - 1] + step < best:
                best = row[j - 1] + step
            row[j] = best
            diag = up
    return row[n_hyp]


@numba.njit(cache=True, nogil=True)
def edit_counts(ref, hyp):
    """``(substitutions, deletions, insertions)`` of a minimal alignment of two
    integer-coded sequences, preferring substitutions among ties."""
    row = np.empty(hyp.shape[0] + 1, dtype=np.int64)
    key = _alignment_key(ref, hyp, row)
    cost = key // _SCALE
    non_sub = key % _SCALE
    diff = ref.shape[0] - hyp.shape[0]
    deletions = (non_sub + diff) // 2
    insertions = (non_sub - diff) // 2
    return cost - non_sub, deletions, insertions


@numba.njit(cache=True, nogil=True)
def edit_counts_many(refs, ref_lens, hyps, hyp_lens):
    """All-pairs counts for padded integer sequences; shape (R, H, 3)."""
    out = np.empty((refs.shape[0], hyps.shape[0], 3), dtype=np.int64)
    row = np.empty(hyps.shape[1] + 1, dtype=np.int64)
    for a in range(refs.shape[0]):
        ref = refs[a, : ref_lens[a]]
        for b in range(hyps.shape[0]):
            hyp = hyps[b, : hyp_lens[b]]
            key = _alignment_key(ref, hyp, row)
            cost = key // _SCALE
            non_sub = key % _SCALE
            diff = ref.shape[0] - hyp.shape[0]
            out[a, b, 0] = cost - non_sub
            out[a, b, 1] = (non_sub + diff) // 2
            out[a, b, 2] = (non_sub - diff) // 2
    return out


def tokenize(text):
    """Whitespace split after case folding."""
    return text.casefold().split()


def _as_tokens(x):
    return tokenize(x) if isinstance(x, str) else list(x)


def encode_pair(ref, hyp):
    vocab = {}
    ref_ids = np.array([vocab.setdefault(t, len(vocab)) for t in ref], dtype=np.int64)
    hyp_ids = np.array([vocab.setdefault(t, len(vocab)) for t in hyp], dtype=np.int64)
    return ref_ids, hyp_ids


@dataclass(frozen=True)
class WerReport:
    substitutions: int
    deletions: int
    insertions: int
    ref_words: int

    @property
    def errors(self):
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer_percent(self):
        return 100.0 * self.errors / self.ref_words

    def __add__(self, other):
        return WerReport(
            self.substitutions + other.substitutions,
            self.deletions + other.deletions,
            self.insertions + other.insertions,
            self.ref_words + other.ref_words,
        )

    def summary(self):
        return (f"WER {self.wer_percent:.2f}% [S={self.substitutions} D={self.deletions} "
                f"I={self.insertions} N={self.ref_words}]")


def wer(ref, hyp):
    """Score ``hyp`` against ``ref``; strings are case-folded and split on
    whitespace, sequences are compared token by token."""
    ref, hyp = _as_tokens(ref), _as_tokens(hyp)
    if not ref:
        raise EmptyInputError("reference is empty; WER is undefined")
    s, d, i = edit_counts(*encode_pair(ref, hyp))
    return WerReport(int(s), int(d), int(i), len(ref))


def corpus_wer(refs, hyps):
    """Pooled WER over ``{utterance_id: text}`` mappings keyed by the refs.

    Utterances missing from ``hyps`` count as empty hypotheses.
    """
    total = None
    for utt_id, ref in refs.items():
        report = wer(ref, hyps.get(utt_id, ""))
        total = report if total is None else total + report
    if total is None:
        raise EmptyInputError("no reference utterances")
    return total


def read_transcripts(path):
    """Two-column text: ``utterance_id transcript...``."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(maxsplit=1)
            if parts[0] in out:
                raise FileFormatError(f"{path}:{lineno}: duplicate utterance id {parts[0]!r}")
            out[parts[0]] = parts[1] if len(parts) > 1 else ""
    return out


def write_transcripts(path, transcripts):
    with open(path, "w") as fh:
        for utt_id, text in transcripts.items():
            fh.write(f"{utt_id} {text}\n".rstrip(" \n") + "\n")
