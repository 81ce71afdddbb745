"""Scikit-learn compatible wrappers around the feature extractors.

The extractors are stateless, so ``fit`` only validates parameters.
``transform`` takes one utterance or a sequence of utterances (AudioBuffer or
1-D arrays sampled at ``sample_rate_hz``) and returns a list of
:class:`FeatureMatrix`, one per utterance, because utterances differ in length.
"""

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .._validation import check_positive_int, check_utterances
from ..exceptions import ConfigurationError
from ..signal import FEATURE_SAMPLE_RATE, FrameSpec
from ._base import LOG_FLOOR, FeatureKind
from .melfb import extract_lnfb, extract_melfb
from .pncc import PNCCConfig, extract_pncc
from .rplp import extract_rplp


class _FeatureExtractor(TransformerMixin, BaseEstimator):
    kind = None

    def _frame_spec(self):
        return FrameSpec(self.window_len, self.hop)

    def _validate(self):
        check_positive_int(self.window_len, "window_len")
        check_positive_int(self.hop, "hop")
        if self.fft_size is not None:
            check_positive_int(self.fft_size, "fft_size")
        if self.sample_rate_hz != FEATURE_SAMPLE_RATE:
            raise ConfigurationError("feature extraction requires 16 kHz audio")
        self._frame_spec()

    def fit(self, X=None, y=None):
        self._validate()
        self.n_features_out_ = self.kind.dim
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        spec = self._frame_spec()
        utterances = check_utterances(X, self.sample_rate_hz, FEATURE_SAMPLE_RATE)
        return [self._extract(u, spec) for u in utterances]

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_out_")
        return [f"{self.kind.label}{i}" for i in range(self.n_features_out_)]


class MelFBExtractor(_FeatureExtractor):
    kind = FeatureKind.MELFB

    def __init__(self, window_len=400, hop=160, fft_size=None, num_filters=40,
                 floor=LOG_FLOOR, sample_rate_hz=16000):
        self.window_len = window_len
        self.hop = hop
        self.fft_size = fft_size
        self.num_filters = num_filters
        self.floor = floor
        self.sample_rate_hz = sample_rate_hz

    def _extract(self, audio, spec):
        return extract_melfb(audio, spec, self.fft_size, self.num_filters, self.floor)


class LNFBExtractor(_FeatureExtractor):
    kind = FeatureKind.LNFB

    def __init__(self, window_len=400, hop=160, fft_size=None, num_filters=40, width=5,
                 floor=LOG_FLOOR, sample_rate_hz=16000):
        self.window_len = window_len
        self.hop = hop
        self.fft_size = fft_size
        self.num_filters = num_filters
        self.width = width
        self.floor = floor
        self.sample_rate_hz = sample_rate_hz

    def _extract(self, audio, spec):
        return extract_lnfb(audio, spec, self.fft_size, self.num_filters, self.width, self.floor)


class RPLPExtractor(_FeatureExtractor):
    kind = FeatureKind.RPLP

    def __init__(self, window_len=400, hop=160, fft_size=None, order=12, n_ceps=13,
                 floor=LOG_FLOOR, sample_rate_hz=16000):
        self.window_len = window_len
        self.hop = hop
        self.fft_size = fft_size
        self.order = order
        self.n_ceps = n_ceps
        self.floor = floor
        self.sample_rate_hz = sample_rate_hz

    def _extract(self, audio, spec):
        return extract_rplp(audio, spec, self.fft_size, self.order, self.n_ceps, self.floor)


class PNCCExtractor(_FeatureExtractor):
    kind = FeatureKind.PNCC

    def __init__(self, window_len=400, hop=160, fft_size=None, num_channels=40,
                 medium_time_frames=2, lambda_mu=0.999, power_exponent=1.0 / 15.0,
                 ans_init_factor=0.9, preemphasis=0.97, sample_rate_hz=16000):
        self.window_len = window_len
        self.hop = hop
        self.fft_size = fft_size
        self.num_channels = num_channels
        self.medium_time_frames = medium_time_frames
        self.lambda_mu = lambda_mu
        self.power_exponent = power_exponent
        self.ans_init_factor = ans_init_factor
        self.preemphasis = preemphasis
        self.sample_rate_hz = sample_rate_hz

    def _extract(self, audio, spec):
        cfg = PNCCConfig(
            num_channels=self.num_channels,
            medium_time_frames=self.medium_time_frames,
            lambda_mu=self.lambda_mu,
            power_exponent=self.power_exponent,
            ans_init_factor=self.ans_init_factor,
            preemphasis=self.preemphasis,
        )
        return extract_pncc(audio, spec, self.fft_size, cfg)


EXTRACTORS = {
    FeatureKind.MELFB: MelFBExtractor,
    FeatureKind.LNFB: LNFBExtractor,
    FeatureKind.RPLP: RPLPExtractor,
    FeatureKind.PNCC: PNCCExtractor,
}


def make_extractor(kind, **params):
    return EXTRACTORS[FeatureKind.parse(kind)](**params)
