"""Robust speech front ends: MelFB, LNFB, RPLP and PNCC."""

from ..signal import DEFAULT_FRAME_SPEC
from ._base import FEATURE_DIMS, LOG_FLOOR, FeatureKind, FeatureMatrix
from .filterbanks import MelFilterbank, mel_filterbank
from .io import read_rfe1, write_csv, write_rfe1
from .melfb import extract_lnfb, extract_melfb, local_normalize
from .pncc import PNCCConfig, extract_pncc
from .rplp import extract_rplp, rasta_filter
from .transformers import LNFBExtractor, MelFBExtractor, PNCCExtractor, RPLPExtractor, make_extractor

EXTRACT_FUNCTIONS = {
    FeatureKind.MELFB: extract_melfb,
    FeatureKind.LNFB: extract_lnfb,
    FeatureKind.RPLP: extract_rplp,
    FeatureKind.PNCC: extract_pncc,
}


def extract(audio, kind, spec=None, fft_size=None):
    """Dispatch to the extractor for ``kind``; other settings stay at their defaults."""
    fn = EXTRACT_FUNCTIONS[FeatureKind.parse(kind)]
    return fn(audio, spec or DEFAULT_FRAME_SPEC, fft_size)


__all__ = [
    "FEATURE_DIMS", "LOG_FLOOR", "FeatureKind", "FeatureMatrix", "MelFilterbank",
    "mel_filterbank", "read_rfe1", "write_rfe1", "write_csv", "extract_melfb",
    "extract_lnfb", "local_normalize", "extract_rplp", "rasta_filter", "PNCCConfig",
    "extract_pncc", "MelFBExtractor", "LNFBExtractor", "RPLPExtractor", "PNCCExtractor",
    "make_extractor", "extract", "EXTRACT_FUNCTIONS",
]
