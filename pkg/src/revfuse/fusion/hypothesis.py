"""Word hypotheses, their JSON-lines format and label maps."""

import json
from dataclasses import dataclass, field

from ..exceptions import FileFormatError, RevfuseError


@dataclass(frozen=True)
class Word:
    token: str
    start_ms: int
    end_ms: int
    confidence: float = 1.0

    def __post_init__(self):
        if self.start_ms > self.end_ms:
            raise RevfuseError(f"word {self.token!r} ends before it starts")
        if not 0.0 <= self.confidence <= 1.0:
            raise RevfuseError(f"confidence of {self.token!r} outside [0, 1]: {self.confidence}")


@dataclass(frozen=True)
class WordHypothesis:
    words: tuple = field(default_factory=tuple)
    system_id: str = "system"

    def __post_init__(self):
        words = tuple(self.words)
        for prev, cur in zip(words, words[1:]):
            if cur.start_ms < prev.start_ms:
                raise RevfuseError("words must be ordered by start time")
        object.__setattr__(self, "words", words)

    @property
    def tokens(self):
        return [w.token for w in self.words]

    def __len__(self):
        return len(self.words)

    def text(self):
        return " ".join(self.tokens)

    @classmethod
    def from_tokens(cls, tokens, system_id="system", hop_ms=10, confidence=1.0):
        """Evenly timed hypothesis, mostly for tests and demos."""
        if isinstance(tokens, str):
            tokens = tokens.split()
        words = [Word(t, i * hop_ms, (i + 1) * hop_ms, confidence) for i, t in enumerate(tokens)]
        return cls(tuple(words), system_id)

    def to_json(self, utterance_id=None):
        obj = {"system": self.system_id}
        if utterance_id is not None:
            obj["utterance_id"] = utterance_id
        obj["words"] = [
            {"w": w.token, "start_ms": w.start_ms, "end_ms": w.end_ms, "conf": round(w.confidence, 6)}
            for w in self.words
        ]
        return json.dumps(obj, separators=(",", ":"))

    @classmethod
    def from_json(cls, line):
        obj = json.loads(line) if isinstance(line, str) else line
        try:
            words = tuple(
                Word(str(w["w"]), int(w["start_ms"]), int(w["end_ms"]), float(w["conf"]))
                for w in obj["words"]
            )
            return cls(words, str(obj["system"]))
        except (KeyError, TypeError) as exc:
            raise FileFormatError(f"malformed hypothesis record: {exc}") from exc


def write_hypotheses(path, hyps, utterance_ids=None):
    with open(path, "w") as fh:
        for i, hyp in enumerate(hyps):
            uid = utterance_ids[i] if utterance_ids is not None else None
            fh.write(hyp.to_json(uid) + "\n")


def read_hypotheses(path):
    """Return a list of ``(utterance_id or None, WordHypothesis)``."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            out.append((obj.get("utterance_id"), WordHypothesis.from_json(obj)))
    return out


def read_label_map(path):
    """Two-column text file ``state_index token`` -> dict."""
    labels = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise FileFormatError(f"{path}:{lineno}: expected 'state_index token'")
            try:
                labels[int(parts[0])] = parts[1]
            except ValueError:
                raise FileFormatError(f"{path}:{lineno}: bad state index {parts[0]!r}") from None
    return labels


def write_label_map(path, labels):
    with open(path, "w") as fh:
        for state in sorted(labels):
            fh.write(f"{state} {labels[state]}\n")
