import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revfuse.eval import (
    ConditionGrid, WerReport, corpus_wer, edit_counts, read_transcripts, relative_reduction,
    render_report, row_average, tokenize, wer, write_transcripts,
)
from revfuse.exceptions import EmptyInputError, FileFormatError, RevfuseError

WER_BY_RT = {
    "MelFB": [3.35, 4.78, 6.61, 9.22],
    "LNFB": [3.68, 5.15, 6.70, 9.64],
    "PNCC": [3.40, 5.04, 6.64, 9.44],
    "RPLP": [4.33, 6.78, 8.62, 11.92],
}
RTS = ["0.47", "0.84", "1.27", "1.77"]


def naive_distance(a, b):
    """Plain recursion, no table."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        naive_distance(a[1:], b[1:]) + (a[0] != b[0]),
        naive_distance(a[1:], b) + 1,
        naive_distance(a, b[1:]) + 1,
    )


def naive_best_counts(a, b):
    """Exhaustive recursion over all alignments. Returns ``(S, D, I)`` of the
    minimal-cost alignment with the most substitutions."""
    if not a:
        return 0, 0, len(b)
    if not b:
        return 0, len(a), 0
    options = []
    s, d, i = naive_best_counts(a[1:], b[1:])
    options.append((s + (a[0] != b[0]), d, i))
    s, d, i = naive_best_counts(a[1:], b)
    options.append((s, d + 1, i))
    s, d, i = naive_best_counts(a, b[1:])
    options.append((s, d, i + 1))
    return min(options, key=lambda c: (sum(c), -c[0]))


def encode(seq):
    return np.array(seq, dtype=np.int64)


def test_trivial_examples():
    assert wer("the cat sat", "the cat sat").wer_percent == 0.0
    r = wer("a b c", "a x c")
    assert (r.substitutions, r.deletions, r.insertions) == (1, 0, 0)
    assert r.wer_percent == pytest.approx(33.333333, abs=1e-5)


def test_insertions_can_exceed_100():
    assert wer("a", "b c d").wer_percent == pytest.approx(300.0)


def test_tokenization_casefold():
    assert tokenize("The  CAT\tsat\n") == ["the", "cat", "sat"]
    assert wer("The Cat", "the cat").errors == 0


def test_empty_reference_rejected():
    with pytest.raises(EmptyInputError):
        wer("", "a")


def test_prefers_substitution_over_indel_pair():
    s, d, i = edit_counts(encode([0, 1]), encode([2, 3]))
    assert (s, d, i) == (2, 0, 0)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=6), st.lists(st.integers(0, 2), max_size=6))
def test_against_naive_recursion(a, b):
    s, d, i = edit_counts(encode(a), encode(b))
    oracle = naive_best_counts(tuple(a), tuple(b))
    assert s + d + i == sum(oracle) == naive_distance(tuple(a), tuple(b))
    assert (s, d, i) == oracle
    assert d - i == len(a) - len(b)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=10), st.lists(st.integers(0, 3), max_size=10))
def test_symmetry(a, b):
    s1, d1, i1 = edit_counts(encode(a), encode(b))
    s2, d2, i2 = edit_counts(encode(b), encode(a))
    assert s1 + d1 + i1 == s2 + d2 + i2
    assert (s1, d1, i1) == (s2, i2, d2)


@settings(max_examples=200, deadline=None)
@given(*[st.lists(st.integers(0, 3), max_size=8)] * 3)
def test_triangle_inequality(a, b, c):
    def dist(x, y):
        return sum(edit_counts(encode(x), encode(y)))
    assert dist(a, c) <= dist(a, b) + dist(b, c)
    assert dist(a, a) == 0


def test_corpus_pooling_and_missing_hyps():
    refs = {"u1": "a b c d", "u2": "x y"}
    rep = corpus_wer(refs, {"u1": "a b c d"})
    assert (rep.deletions, rep.ref_words) == (2, 6)
    assert rep.wer_percent == pytest.approx(100 * 2 / 6)
    assert (WerReport(1, 0, 0, 4) + WerReport(0, 1, 1, 2)) == WerReport(1, 1, 1, 6)
    with pytest.raises(EmptyInputError):
        corpus_wer({}, {})


def test_transcript_io(tmp_path):
    write_transcripts(tmp_path / "t.txt", {"u1": "hello world", "u2": ""})
    assert read_transcripts(tmp_path / "t.txt") == {"u1": "hello world", "u2": ""}
    (tmp_path / "d.txt").write_text("u1 a\nu1 b\n")
    with pytest.raises(FileFormatError):
        read_transcripts(tmp_path / "d.txt")


# --- report arithmetic ------------------------------------------------------------

def rt_grid():
    return ConditionGrid({k: dict(zip(RTS, v)) for k, v in WER_BY_RT.items()})


def test_row_average_examples():
    g = rt_grid()
    assert row_average(g, "MelFB") == 5.99
    assert row_average(g, "RPLP") == 7.91
    assert row_average(ConditionGrid({"c": {"a": 5, "b": 5, "c": 5, "d": 5}}), "c") == 5.00
    with pytest.raises(RevfuseError):
        row_average(g, "nope")


def test_relative_reduction_examples():
    assert relative_reduction(5.99, 4.94) == 17.5
    assert relative_reduction(5.99, 5.28) == 11.9
    assert relative_reduction(5.99, 4.91) == 18.0
    for bad in (0.0, -1.0):
        with pytest.raises(RevfuseError):
            relative_reduction(bad, 1.0)


def test_grid_rectangularity():
    g = ConditionGrid({"a": {"x": 1, "y": 2}})
    with pytest.raises(RevfuseError, match="non-rectangular"):
        g.add_row("b", {"x": 1})


def test_render_report():
    text = render_report(rt_grid(), "MelFB", title="T1")
    lines = text.splitlines()
    assert lines[0] == "T1"
    body = {l.split()[0]: l.split() for l in lines[3:7]}
    assert [body[k][5] for k in WER_BY_RT] == ["5.99", "6.29", "6.13", "7.91"]
    assert body["MelFB"][6] == "0.0"
    assert len({len(l) for l in lines[1:7]}) == 1  # fixed width
    assert text == render_report(rt_grid(), "MelFB", title="T1")
    with pytest.raises(RevfuseError):
        render_report(rt_grid(), "nope")


def test_render_single_row_zero_reduction():
    text = render_report(ConditionGrid({"only": {"c": 4.2}}), "only")
    assert text.splitlines()[2].split()[-1] == "0.0"


def test_render_zero_baseline():
    text = render_report(ConditionGrid({"a": {"c": 0.0}, "b": {"c": 1.0}}), "a")
    assert "n/a" in text


def test_grid_csv_roundtrip(tmp_path):
    g = rt_grid()
    (tmp_path / "g.csv").write_text(g.to_csv())
    back = ConditionGrid.from_csv(tmp_path / "g.csv")
    assert back.conditions == RTS and back.labels == list(WER_BY_RT)
    assert back.row("LNFB") == g.row("LNFB")
    (tmp_path / "bad.csv").write_text("label,a,b\nx,1\n")
    with pytest.raises(RevfuseError):
        ConditionGrid.from_csv(tmp_path / "bad.csv")
