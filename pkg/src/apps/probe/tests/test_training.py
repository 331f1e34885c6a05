"""src/apps/probe/tests/test_training.py."""

import numpy as np
import pytest
from src.apps.negdata.schemas import AnnotatedSentence, ManualEvalLabel, NegInstance
from src.apps.probe.schemas import ProbeDataset, ProbeModel
from src.apps.probe.services.dataset import ProbeDatasetBuilder
from src.apps.probe.services.mlp import init_params
from src.apps.probe.services.training import ProbeAnalysis, ProbeTrainer, score
from src.apps.tracestore.schemas import TraceDims, TraceSet
from src.core.enum import ProbeTask, Side, Split, TranslationCategory
from src.core.exceptions import ValidationFailedError


@pytest.fixture
def separable() -> ProbeDataset:
    """Ten points split by the sign of the first coordinate."""
    rng = np.random.default_rng(0)
    labels = np.array([1] * 5 + [0] * 5)
    vectors = rng.normal(scale=0.1, size=(10, 4))
    vectors[:, 0] += np.where(labels == 1, 3.0, -3.0)
    return ProbeDataset(vectors=vectors, labels=labels, num_classes=2)


def test_separable_reaches_perfect_f1(separable):
    """Training on a separable set finds dev F1 1.0."""
    model = ProbeTrainer(seeds=[0]).train_one(separable, separable, ProbeTask.CUE, seed=0)
    assert model.best_dev_f1 == 1.0
    assert score(model, separable).f1 == 1.0


def test_same_seed_same_parameters(separable):
    """Training is deterministic given the seed."""
    trainer = ProbeTrainer(hidden=16, epochs=30)
    a = trainer.train_one(separable, separable, ProbeTask.CUE, seed=3)
    b = trainer.train_one(separable, separable, ProbeTask.CUE, seed=3)
    assert all(np.array_equal(a.params[k], b.params[k]) for k in a.params)
    assert a.epoch_selected == b.epoch_selected


def test_never_below_initial_f1(separable):
    """The chosen snapshot scores at least the untrained model."""
    noisy = ProbeDataset(
        vectors=np.random.default_rng(1).normal(size=(10, 4)), labels=separable.labels, num_classes=2
    )
    for seed in range(3):
        model = ProbeTrainer(hidden=8, epochs=20).train_one(noisy, separable, ProbeTask.CUE, seed=seed)
        initial = ProbeModel(**init_params(4, 8, 2, seed), task=ProbeTask.CUE)
        assert model.best_dev_f1 >= score(initial, separable).f1


def test_metadata_echo(separable):
    """Five seeds of 100 epochs are recorded on the models."""
    models = ProbeTrainer(hidden=8).train_probe(separable, separable, ProbeTask.CUE, Side.ENC, 1)
    assert [m.seed for m in models] == [0, 1, 2, 3, 4]
    assert {m.epochs for m in models} == {100}
    assert {m.hidden for m in models} == {8}


def test_empty_split(separable):
    """Empty train or dev sets are rejected."""
    empty = ProbeDataset(vectors=np.zeros((0, 4)), labels=np.zeros(0, dtype=int), num_classes=2)
    with pytest.raises(ValidationFailedError):
        ProbeTrainer().train_one(empty, separable, ProbeTask.CUE, seed=0)


def _layer_three_corpus(synthesizer, count, offset, same_everywhere=False):
    rng = np.random.default_rng(offset)
    dims = TraceDims.parse("4,1,1,4,2,4")
    sentences, traces = [], []
    for i in range(offset, offset + count):
        cue = i % 4
        hidden = rng.normal(size=(5, 4, 4)).astype(np.float32)
        signal = rng.normal(scale=0.1, size=(4, 4))
        signal[:, 0] = -3.0
        signal[cue, 0] = 3.0
        hidden[3] = signal
        if same_everywhere:
            hidden[:] = signal
        pid = f"s{i}"
        traces.append(synthesizer.synth_trace(i, dims, pid).model_copy(update={"enc_hidden": hidden}))
        sentences.append(
            AnnotatedSentence(
                sentence_id=pid,
                tokens=["w0", "w1", "w2", "w3"],
                instances=[NegInstance(instance_id=0, cue_spans=[(cue, cue)])],
            )
        )
    return sentences, traces


@pytest.fixture
def analysis(state_reader) -> ProbeAnalysis:
    """Small, fast probes over two seeds."""
    return ProbeAnalysis(ProbeDatasetBuilder(state_reader), ProbeTrainer(hidden=64, epochs=100, seeds=[0, 1]))


def test_sweep_finds_informative_layer(synthesizer, analysis):
    """Only layer 3 carries the label, so it wins the sweep."""
    train, train_traces = _layer_three_corpus(synthesizer, 16, 0)
    dev, dev_traces = _layer_three_corpus(synthesizer, 8, 100)
    rows = analysis.layer_sweep(train, dev, TraceSet(traces=train_traces + dev_traces), ProbeTask.CUE)
    assert [r.layer for r in rows] == [0, 1, 2, 3, 4]
    best = max(rows, key=lambda r: r.f1)
    assert best.layer == 3
    assert all(r.f1 < best.f1 for r in rows if r.layer != 3)


def test_sweep_identical_layers(synthesizer, analysis):
    """Identical states at every layer give identical scores."""
    train, train_traces = _layer_three_corpus(synthesizer, 8, 0, same_everywhere=True)
    dev, dev_traces = _layer_three_corpus(synthesizer, 4, 100, same_everywhere=True)
    rows = analysis.layer_sweep(train, dev, TraceSet(traces=train_traces + dev_traces), ProbeTask.CUE, layers=[1, 2, 4])
    assert len({r.f1 for r in rows}) == 1


def test_projection_table_and_outcomes(synthesizer, analysis):
    """Seed averages per split, baseline rows and outcome subsets."""
    train, train_traces = _layer_three_corpus(synthesizer, 12, 0)
    test, test_traces = _layer_three_corpus(synthesizer, 4, 200)
    traces = TraceSet(traces=train_traces + test_traces)
    dataset = analysis.builder.token_dataset(train, traces, Side.ENC, 3, ProbeTask.CUE)
    test_set = analysis.builder.token_dataset(test, traces, Side.ENC, 3, ProbeTask.CUE)
    models = analysis.trainer.train_probe(dataset, dataset, ProbeTask.CUE, Side.ENC, 3)

    rows = analysis.projection_table(models, {Split.DEV: dataset, Split.TEST: test_set}, baseline=True)
    assert [(r.split, r.source) for r in rows] == [
        (Split.DEV, "enc3"),
        (Split.DEV, "word_alignment"),
        (Split.TEST, "enc3"),
        (Split.TEST, "word_alignment"),
    ]
    assert rows[0].f1 == pytest.approx(np.mean([score(m, dataset).f1 for m in models]))
    assert rows[3].f1 == 0.425

    labels = [
        ManualEvalLabel(pair_id="s200", category=TranslationCategory.CORRECT),
        ManualEvalLabel(pair_id="s201", category=TranslationCategory.CORRECT),
        ManualEvalLabel(pair_id="s202", category=TranslationCategory.INCORRECT),
    ]
    outcomes = analysis.outcome_comparison(models, test, traces, labels)
    assert [(r.outcome, r.sentences) for r in outcomes] == [("Correct", 2), ("Incorrect", 1)]
