"""WER scoring and table arithmetic."""

from .report import ConditionGrid, relative_reduction, render_report, row_average
from .wer import (
    WerReport, corpus_wer, edit_counts, edit_counts_many, read_transcripts, tokenize, wer,
    write_transcripts,
)

__all__ = [
    "ConditionGrid", "relative_reduction", "render_report", "row_average", "WerReport",
    "corpus_wer", "edit_counts", "edit_counts_many", "read_transcripts", "tokenize", "wer",
    "write_transcripts",
]
