"""Score-level (DNN-output) fusion, ROVER voting and their cascade."""

from .cascade import CascadeCombiner, cascade_combine
from .decode import SILENCE, greedy_decode
from .hypothesis import (
    Word, WordHypothesis, read_hypotheses, read_label_map, write_hypotheses, write_label_map,
)
from .rover import RoverCombiner, build_wtn, rover_combine
from .scores import (
    FusionWeights, ScoreFusion, ScoreMatrix, fuse_scores, read_rsc1, uniform_weights, write_rsc1,
)

__all__ = [
    "CascadeCombiner", "cascade_combine", "SILENCE", "greedy_decode", "Word", "WordHypothesis",
    "read_hypotheses", "read_label_map", "write_hypotheses", "write_label_map", "RoverCombiner",
    "build_wtn", "rover_combine", "FusionWeights", "ScoreFusion", "ScoreMatrix", "fuse_scores",
    "read_rsc1", "uniform_weights", "write_rsc1",
]
