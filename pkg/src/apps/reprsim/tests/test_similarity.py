"""src/apps/reprsim/tests/test_similarity.py."""

import math
import random

import numpy as np
import pytest
from src.apps.negdata.schemas import AnnotatedSentence, NegInstance
from src.apps.reports.services.writer import WarningCollector
from src.apps.reprsim.schemas import LayerRef, parse_layer_refs
from src.apps.reprsim.services import SimilarityAnalyzer, cosine, sentence_buckets
from src.apps.tracestore.schemas import TraceDims, TraceSet
from src.core.enum import Side
from src.core.exceptions import BadRequestError, ValidationFailedError

ENC1 = LayerRef(side=Side.ENC, layer=1)


@pytest.fixture
def analyzer(state_reader) -> SimilarityAnalyzer:
    """Analyzer over the default reader."""
    return SimilarityAnalyzer(state_reader)


@pytest.fixture
def two_sentences(synthesizer):
    """
    'There was no response .' and 'no fun here' with hand-picked
    encoder layer-1 states.
    """
    first = AnnotatedSentence(
        sentence_id="s1",
        tokens=["There", "was", "no", "response", "."],
        instances=[
            NegInstance(instance_id=0, cue_spans=[(2, 2)], event_spans=[(3, 3)], scope_spans=[(0, 1), (3, 3)])
        ],
    )
    second = AnnotatedSentence(
        sentence_id="s2",
        tokens=["no", "fun", "here"],
        instances=[NegInstance(instance_id=0, cue_spans=[(0, 0)], scope_spans=[(1, 1)])],
    )
    t1 = synthesizer.synth_trace(1, TraceDims.parse("2,1,1,5,2,2"), pair_id="s1")
    h1 = np.zeros((3, 5, 2), dtype=np.float32)
    h1[1] = [[0, 1], [1, 1], [1, 0], [1, 0], [0, 1]]
    t2 = synthesizer.synth_trace(2, TraceDims.parse("2,1,1,3,2,2"), pair_id="s2")
    h2 = np.zeros((3, 3, 2), dtype=np.float32)
    h2[1] = [[1, 0], [1, 1], [-1, 0]]
    traces = TraceSet(
        traces=[t1.model_copy(update={"enc_hidden": h1}), t2.model_copy(update={"enc_hidden": h2})]
    )
    return [first, second], traces


def test_cosine_identical_and_orthogonal():
    """Parallel vectors give 1, orthogonal ones 0."""
    assert cosine([1.0, 0.0], [1.0, 0.0]) == 1.0
    assert cosine([3.0, 0.0], [0.0, 2.0]) == 0.0
    assert cosine([1.0, 2.0], [2.0, 1.0]) == pytest.approx(0.8)
    assert cosine([1.0, 1.0], [-2.0, -2.0]) == pytest.approx(-1.0)


def test_cosine_rejects_zero_and_mismatch():
    """A zero vector or differing dimensions raise."""
    with pytest.raises(ValidationFailedError):
        cosine([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValidationFailedError):
        cosine([1.0, 0.0], [1.0, 0.0, 0.0])


def test_cosine_scale_invariance():
    """Positive rescaling of either argument keeps the cosine."""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        u, v = rng.normal(size=4), rng.normal(size=4)
        a, b = rng.uniform(0.01, 100, size=2)
        assert cosine(a * u, b * v) == pytest.approx(cosine(u, v), abs=1e-9)


def test_sentence_buckets(two_sentences):
    """Scope pairs leave out cue and event; outside means no span at all."""
    sentences, _ = two_sentences
    assert sentence_buckets(sentences[0]) == {"ce": [(2, 3)], "cs": [(2, 0), (2, 1)], "co": [(2, 4)]}
    assert sentence_buckets(sentences[1]) == {"ce": [], "cs": [(0, 1)], "co": [(0, 2)]}


def test_sim_groups_micro_average(analyzer, two_sentences):
    """Means over all pairs of the corpus, not per sentence."""
    sentences, traces = two_sentences
    triple = analyzer.sim_groups(sentences, traces, ENC1)
    assert triple.layer == "enc1"
    assert (triple.n_ce, triple.n_cs, triple.n_co) == (1, 3, 2)
    assert triple.sim_ce == pytest.approx(1.0)
    assert triple.sim_cs == pytest.approx(math.sqrt(2) / 3)
    assert triple.sim_co == pytest.approx(-0.5)


def test_empty_bucket_is_none(analyzer, two_sentences):
    """No cue-event pair leaves sim_ce unset with a zero count."""
    sentences, traces = two_sentences
    triple = analyzer.sim_groups(sentences[1:], traces, ENC1)
    assert triple.sim_ce is None
    assert triple.n_ce == 0


def test_sentence_order_does_not_matter(analyzer, two_sentences):
    """Shuffling the corpus gives the same means."""
    sentences, traces = two_sentences
    expected = analyzer.sim_groups(sentences, traces, ENC1)
    shuffled = list(reversed(sentences))
    random.Random(3).shuffle(shuffled)
    got = analyzer.sim_groups(shuffled, traces, ENC1)
    assert got.sim_cs == pytest.approx(expected.sim_cs)
    assert got.sim_co == pytest.approx(expected.sim_co)


def test_missing_trace_is_skipped(analyzer, two_sentences):
    """Sentences without a trace do not contribute."""
    sentences, traces = two_sentences
    triple = analyzer.sim_groups(sentences, TraceSet(traces=traces.traces[:1]), ENC1)
    assert (triple.n_ce, triple.n_cs, triple.n_co) == (1, 2, 1)


def test_parse_layer_refs():
    """Ranges expand, bare numbers are encoder layers."""
    assert [str(r) for r in parse_layer_refs("1..3,dec6")] == ["enc1", "enc2", "enc3", "dec6"]
    assert [str(r) for r in parse_layer_refs("dec2-3")] == ["dec2", "dec3"]
    with pytest.raises(BadRequestError):
        parse_layer_refs("mid4")


def test_parse_layer_refs_default_side():
    """Bare numbers follow the requested side, prefixed ones keep theirs."""
    refs = parse_layer_refs("1..2,enc6", default_side=Side.DEC)
    assert [str(r) for r in refs] == ["dec1", "dec2", "enc6"]


def test_zero_state_pair_skipped(analyzer, two_sentences):
    """A pair with an all-zero state is left out with a warning, the rest is kept."""
    sentences, traces = two_sentences
    second = traces.traces[1]
    hidden = np.array(second.enc_hidden, copy=True)
    hidden[1][2] = 0
    traces = TraceSet(traces=[traces.traces[0], second.model_copy(update={"enc_hidden": hidden})])
    with WarningCollector() as collector:
        triple = analyzer.sim_groups(sentences, traces, ENC1)
    assert (triple.n_ce, triple.n_cs, triple.n_co) == (1, 3, 1)
    assert triple.sim_co == pytest.approx(0.0)
    assert "Layer enc1: 1 pair(s) with a zero hidden state skipped" in collector.messages


def test_sweep_rows(analyzer, synthesizer, sample_sentences):
    """Six encoder layers plus the decoder top give seven rows in order."""
    trace = synthesizer.synth_trace(11, TraceDims.parse("6,6,2,5,5,8"), pair_id="s1")
    rows = analyzer.sim_sweep(sample_sentences[:1], TraceSet(traces=[trace]), parse_layer_refs("1..6,dec6"))
    assert [r.layer for r in rows] == ["enc1", "enc2", "enc3", "enc4", "enc5", "enc6", "dec6"]
    assert all(r.n_ce == 1 and r.n_cs == 2 and r.n_co == 1 for r in rows)
    assert all(-1 <= r.sim_ce <= 1 for r in rows)


def test_sweep_rejects_unknown_layer(analyzer, synthesizer, sample_sentences):
    """A layer outside the trace raises before any work is done."""
    trace = synthesizer.synth_trace(11, TraceDims.parse("6,6,2,5,5,8"), pair_id="s1")
    with pytest.raises(BadRequestError):
        analyzer.sim_sweep(sample_sentences[:1], TraceSet(traces=[trace]), parse_layer_refs("enc7"))
