"""Score-level fusion followed by hypothesis-level voting."""

from sklearn.base import BaseEstimator

from .decode import SILENCE, greedy_decode
from .rover import rover_combine
from .scores import check_score_systems, fuse_scores, uniform_weights


def cascade_combine(systems, labels, alpha=1.0, hop_ms=10.0, silence=SILENCE):
    """Decode the uniformly fused scores, then vote it together with each
    system's own decode. The fused hypothesis is the first voter, so it wins
    ties."""
    systems = check_score_systems(systems)
    fused = greedy_decode(fuse_scores(systems, uniform_weights(len(systems))), labels, hop_ms, silence)
    individual = [greedy_decode(s, labels, hop_ms, silence) for s in systems]
    return rover_combine([fused, *individual], alpha, system_id="cascade")


class CascadeCombiner(BaseEstimator):
    def __init__(self, labels=None, alpha=1.0, hop_ms=10.0):
        self.labels = labels
        self.alpha = alpha
        self.hop_ms = hop_ms

    def fit(self, X=None, y=None):
        self.is_fitted_ = True
        return self

    def predict(self, X):
        return cascade_combine(X, self.labels, self.alpha, self.hop_ms)
