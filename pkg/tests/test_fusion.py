import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from revfuse.exceptions import ConfigurationError, DimensionMismatchError, EmptyInputError, FileFormatError
from revfuse.fusion import (
    SILENCE, CascadeCombiner, FusionWeights, ScoreFusion, ScoreMatrix, Word, WordHypothesis,
    cascade_combine, fuse_scores, greedy_decode, read_hypotheses, read_label_map, read_rsc1,
    uniform_weights, write_hypotheses, write_label_map, write_rsc1,
)
from revfuse.synthetic import demo_labels, demo_references, synthetic_scores

LABELS = {0: SILENCE, 1: "a", 2: "b", 3: "c"}


def onehot(states, n_states=4, margin=5.0):
    m = np.zeros((len(states), n_states))
    m[np.arange(len(states)), states] = margin
    return ScoreMatrix(m)


def brute_mean(mats):
    out = np.zeros_like(mats[0])
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            acc = 0.0
            for m in mats:
                acc += m[i, j]
            out[i, j] = acc / len(mats)
    return out


# --- weights and fusion -----------------------------------------------------------

def test_uniform_weights_values():
    assert float(uniform_weights(1).values) == 1.0
    assert float(uniform_weights(2).values) == 0.5
    assert float(uniform_weights(4).values) == 0.25
    with pytest.raises(EmptyInputError):
        uniform_weights(0)


def test_weight_validation():
    with pytest.raises(ConfigurationError):
        FusionWeights("bogus", 1.0)
    with pytest.raises(ConfigurationError):
        FusionWeights("per_system", [1.0, np.nan])
    with pytest.raises(DimensionMismatchError):
        fuse_scores([ScoreMatrix(np.zeros((2, 2)))] * 2, FusionWeights("per_system", [1.0]))


def test_single_system_identity(rng):
    m = rng.standard_normal((5, 7))
    out = fuse_scores([ScoreMatrix(m, "x")])
    np.testing.assert_array_equal(out.scores, m)
    assert out.system_id == "fused"


def test_pair_against_loop_oracle(rng):
    a, b = rng.standard_normal((2, 6, 9))
    out = fuse_scores([ScoreMatrix(a), ScoreMatrix(b)])
    np.testing.assert_allclose(out.scores, brute_mean([a, b]), rtol=1e-12)


def test_identical_inputs_fixed_point(rng):
    m = rng.standard_normal((4, 3))
    out = fuse_scores([ScoreMatrix(m)] * 4)
    np.testing.assert_allclose(out.scores, m, rtol=1e-15)


def test_per_system_and_tensor_weights(rng):
    a, b = rng.standard_normal((2, 3, 4))
    out = fuse_scores([ScoreMatrix(a), ScoreMatrix(b)], FusionWeights("per_system", [2.0, -1.0]))
    np.testing.assert_allclose(out.scores, 2 * a - b)
    w = rng.uniform(size=(2, 3, 4))
    out = fuse_scores([ScoreMatrix(a), ScoreMatrix(b)], FusionWeights("per_state_frame", w))
    np.testing.assert_allclose(out.scores, w[0] * a + w[1] * b)


def test_shape_mismatch_names_system():
    with pytest.raises(DimensionMismatchError, match="'second'"):
        fuse_scores([ScoreMatrix(np.zeros((2, 3)), "first"), ScoreMatrix(np.zeros((3, 3)), "second")])
    with pytest.raises(EmptyInputError):
        fuse_scores([])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 20), st.integers(1, 30))
def test_linearity_and_permutation(seed, r, n, s):
    gen = np.random.default_rng(seed)
    a, b = gen.standard_normal((2, r, n, s))
    fa = fuse_scores([ScoreMatrix(m) for m in a]).scores
    fb = fuse_scores([ScoreMatrix(m) for m in b]).scores
    fab = fuse_scores([ScoreMatrix(m) for m in a + b]).scores
    np.testing.assert_allclose(fa + fb, fab, rtol=1e-12, atol=1e-12)
    perm = gen.permutation(r)
    fp = fuse_scores([ScoreMatrix(a[i]) for i in perm]).scores
    np.testing.assert_allclose(fp, fa, rtol=1e-12, atol=1e-15)


def test_score_matrix_validation():
    with pytest.raises(DimensionMismatchError):
        ScoreMatrix(np.zeros(3))
    with pytest.raises(ConfigurationError):
        ScoreMatrix(np.array([[np.inf]]))


def test_score_fusion_estimator(rng):
    est = ScoreFusion()
    assert clone(est).get_params() == {"weights": "uniform"}
    a, b = rng.standard_normal((2, 3, 4))
    out = est.fit().transform([ScoreMatrix(a), ScoreMatrix(b)])
    np.testing.assert_allclose(out.scores, (a + b) / 2)
    out = ScoreFusion(weights=[1.0, 0.0]).fit().transform([ScoreMatrix(a), ScoreMatrix(b)])
    np.testing.assert_allclose(out.scores, a)


# --- decoding -------------------------------------------------------------------

def test_decode_collapse_and_silence():
    hyp = greedy_decode(onehot([1, 1, 2, 2, 2, 0]), LABELS)
    assert hyp.tokens == ["a", "b"]
    assert (hyp.words[0].start_ms, hyp.words[0].end_ms) == (0, 20)
    assert (hyp.words[1].start_ms, hyp.words[1].end_ms) == (20, 50)


def test_decode_all_silence_and_empty():
    assert greedy_decode(onehot([0, 0, 0]), LABELS).tokens == []
    assert greedy_decode(ScoreMatrix(np.zeros((0, 4))), LABELS).tokens == []


def test_decode_single_frame():
    hyp = greedy_decode(onehot([3]), LABELS, hop_ms=10)
    assert hyp.tokens == ["c"]
    assert hyp.words[0].end_ms - hyp.words[0].start_ms == 10


def test_decode_tie_goes_to_lowest_state():
    assert greedy_decode(ScoreMatrix(np.array([[0.0, 1.0, 1.0, 0.0]])), LABELS).tokens == ["a"]


def test_decode_confidence_is_softmax_mean():
    m = np.array([[0.0, 2.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
    conf = greedy_decode(ScoreMatrix(m), LABELS).words[0].confidence
    p = [np.exp(2) / (np.exp(2) + 3), np.exp(1) / (np.exp(1) + 3)]
    assert conf == pytest.approx(np.mean(p))


def test_decode_missing_label():
    with pytest.raises(Exception):
        greedy_decode(onehot([1]), {0: SILENCE, 1: "a"})


# --- cascade ------------------------------------------------------------------

def test_cascade_identical_systems():
    m = onehot([0, 1, 1, 0, 2, 3, 3])
    single = greedy_decode(m, LABELS)
    out = cascade_combine([m, m, m], LABELS)
    assert out.words == single.words


def test_cascade_single_system():
    m = onehot([1, 0, 2])
    assert cascade_combine([m], LABELS).words == greedy_decode(m, LABELS).words


def test_cascade_fused_and_first_outvote_second():
    # system 1 strongly says "a b", system 2 weakly says "a c": fused agrees with system 1
    s1 = onehot([1, 1, 0, 2, 2], margin=6.0)
    s2 = np.zeros((5, 4))
    s2[[0, 1], 1] = 6.0
    s2[[3, 4], 3] = 2.0
    out = cascade_combine([s1, ScoreMatrix(s2)], LABELS)
    assert out.tokens == ["a", "b"]


def test_cascade_estimator():
    m = onehot([1, 2])
    est = CascadeCombiner(labels=LABELS)
    assert est.fit().predict([m, m]).tokens == ["a", "b"]


# --- synthetic scores -----------------------------------------------------------

def test_synthetic_scores_fusion_repairs_minority_errors():
    labels = demo_labels()
    refs = demo_references(0, 10, 8)
    kinds = ("melfb", "lnfb", "pncc", "rplp")
    for u, text in enumerate(refs.values()):
        systems = synthetic_scores(text.split(), labels, kinds, 0, u)
        assert [s.system_id for s in systems] == list(kinds)
        fused = greedy_decode(fuse_scores(systems), labels)
        assert fused.text() == text
        np.testing.assert_allclose(np.exp(systems[0].scores).sum(axis=1), 1.0)


def test_synthetic_scores_deterministic():
    labels = demo_labels()
    a = synthetic_scores(["the", "room"], labels, ("x", "y", "z"), 3, 1)
    b = synthetic_scores(["the", "room"], labels, ("x", "y", "z"), 3, 1)
    assert all(p.scores.tobytes() == q.scores.tobytes() for p, q in zip(a, b))


# --- file formats ------------------------------------------------------------------

def test_rsc1_roundtrip(tmp_path, rng):
    m = ScoreMatrix(rng.standard_normal((7, 5)).astype(np.float32))
    write_rsc1(tmp_path / "a.rsc", m)
    blob = (tmp_path / "a.rsc").read_bytes()
    assert blob[:4] == b"RSC1"
    assert int.from_bytes(blob[4:8], "little") == 7 and int.from_bytes(blob[8:12], "little") == 5
    assert len(blob) == 12 + 4 * 35
    back = read_rsc1(tmp_path / "a.rsc", "a")
    np.testing.assert_array_equal(back.scores, m.scores)


def test_rsc1_rejects_corruption(tmp_path):
    (tmp_path / "bad.rsc").write_bytes(b"XXXX" + bytes(8))
    with pytest.raises(FileFormatError):
        read_rsc1(tmp_path / "bad.rsc")
    write_rsc1(tmp_path / "t.rsc", ScoreMatrix(np.zeros((2, 2))))
    (tmp_path / "t.rsc").write_bytes((tmp_path / "t.rsc").read_bytes()[:-1])
    with pytest.raises(FileFormatError):
        read_rsc1(tmp_path / "t.rsc")


def test_hypothesis_jsonl_roundtrip(tmp_path):
    hyps = [WordHypothesis((Word("a", 0, 10, 0.5), Word("b", 10, 30, 1.0)), "sys"),
            WordHypothesis((), "sys")]
    write_hypotheses(tmp_path / "h.jsonl", hyps, ["u1", "u2"])
    back = read_hypotheses(tmp_path / "h.jsonl")
    assert [u for u, _ in back] == ["u1", "u2"]
    assert [h for _, h in back] == hyps
    line = (tmp_path / "h.jsonl").read_text().splitlines()[0]
    assert '"w":"a"' in line and '"start_ms":0' in line and '"conf":0.5' in line


def test_hypothesis_json_rejects_garbage(tmp_path):
    (tmp_path / "h.jsonl").write_text('{"system": "x"}\n')
    with pytest.raises(FileFormatError):
        read_hypotheses(tmp_path / "h.jsonl")
    (tmp_path / "g.jsonl").write_text("not json\n")
    with pytest.raises(FileFormatError):
        read_hypotheses(tmp_path / "g.jsonl")


def test_word_invariants():
    with pytest.raises(Exception):
        Word("a", 10, 5)
    with pytest.raises(Exception):
        Word("a", 0, 5, 1.5)
    with pytest.raises(Exception):
        WordHypothesis((Word("a", 10, 20), Word("b", 0, 5)))


def test_label_map_roundtrip(tmp_path):
    write_label_map(tmp_path / "l.txt", LABELS)
    assert read_label_map(tmp_path / "l.txt") == LABELS
    (tmp_path / "bad.txt").write_text("0 a b\n")
    with pytest.raises(FileFormatError):
        read_label_map(tmp_path / "bad.txt")
