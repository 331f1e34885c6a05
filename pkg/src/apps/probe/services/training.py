"""src/apps/probe/services/training.py."""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.apps.negdata.schemas import AnnotatedSentence, ManualEvalLabel
from src.apps.probe.schemas import (
    PRF,
    OutcomeRow,
    ProbeDataset,
    ProbeModel,
    ProjectionRow,
    SweepRow,
)
from src.apps.probe.services.dataset import ProbeDatasetBuilder, positive_class
from src.apps.probe.services.metrics import evaluate, macro
from src.apps.probe.services.mlp import Adam, gradients, init_params, mlp_forward
from src.apps.tracestore.schemas import TraceSet
from src.core.enum import Pooling, ProbeTask, Side, Split, TranslationCategory
from src.core.exceptions import ValidationFailedError

logger = logging.getLogger(__name__)

# Word-alignment projection baseline on NegPar EN->ZH: (P, R, F1)
WORD_ALIGNMENT_BASELINE: Dict[Split, Dict[ProbeTask, tuple]] = {
    Split.DEV: {
        ProbeTask.CUE: (0.49, 0.42, 0.45),
        ProbeTask.SCOPE: (0.64, 0.44, 0.50),
        ProbeTask.EVENT: (0.40, 0.27, 0.32),
    },
    Split.TEST: {
        ProbeTask.CUE: (0.478, 0.382, 0.425),
        ProbeTask.SCOPE: (0.583, 0.312, 0.406),
        ProbeTask.EVENT: (0.338, 0.180, 0.235),
    },
}


def predict(model: ProbeModel, dataset: ProbeDataset) -> np.ndarray:
    """Arg-max class per example."""
    return mlp_forward(model.params, dataset.vectors).argmax(axis=1)


def score(model: ProbeModel, dataset: ProbeDataset) -> PRF:
    """P/R/F1 of the task's selection class."""
    return evaluate(predict(model, dataset), dataset.labels, [positive_class(model.task)])


class ProbeTrainer:
    """
    Full-batch Adam training with best-dev-F1 snapshot selection, once per seed.
    """

    def __init__(self, hidden: int = 512, epochs: int = 100, seeds: Sequence[int] = (0, 1, 2, 3, 4), lr: float = 1e-3):
        self.hidden = hidden
        self.epochs = epochs
        self.seeds = list(seeds)
        self.lr = lr

    def train_one(
        self, train: ProbeDataset, dev: ProbeDataset, task: ProbeTask, seed: int, side: Side = Side.ENC, layer: int = 0
    ) -> ProbeModel:
        """
        Trains one seed. Dev F1 is measured before training and after every
        epoch; the first snapshot reaching the best value is kept.
        """
        if not len(train) or not len(dev):
            raise ValidationFailedError("Probe training needs non-empty train and dev sets")
        if train.dim != dev.dim or train.num_classes != dev.num_classes:
            raise ValidationFailedError("Train and dev sets disagree on dimension or classes")
        params = init_params(train.dim, self.hidden, train.num_classes, seed)
        optimizer = Adam(params, lr=self.lr)
        meta = dict(task=task, side=side, layer=layer, seed=seed, epochs=self.epochs)

        def dev_f1() -> float:
            return score(ProbeModel(**params, **meta), dev).f1

        best_f1, best_epoch = dev_f1(), 0
        best = {k: v.copy() for k, v in params.items()}
        for epoch in range(1, self.epochs + 1):
            optimizer.step(params, gradients(params, train.vectors, train.labels))
            f1 = dev_f1()
            if f1 > best_f1:
                best_f1, best_epoch = f1, epoch
                best = {k: v.copy() for k, v in params.items()}
        logger.info("Probe %s %s%d seed %d: dev F1 %.3f at epoch %d", task.value, side.value, layer, seed, best_f1, best_epoch)
        return ProbeModel(**best, **meta, best_dev_f1=best_f1, epoch_selected=best_epoch)

    def train_probe(
        self, train: ProbeDataset, dev: ProbeDataset, task: ProbeTask, side: Side = Side.ENC, layer: int = 0
    ) -> List[ProbeModel]:
        """One selected model per seed."""
        return [self.train_one(train, dev, task, seed, side, layer) for seed in self.seeds]


class ProbeAnalysis:
    """
    Layer sweeps, projection tables and outcome comparisons built on
    ProbeTrainer and ProbeDatasetBuilder.
    """

    def __init__(self, builder: ProbeDatasetBuilder, trainer: ProbeTrainer):
        self.builder = builder
        self.trainer = trainer

    def layer_sweep(
        self,
        train: Iterable[AnnotatedSentence],
        dev: Iterable[AnnotatedSentence],
        trace_set: TraceSet,
        task: ProbeTask,
        side: Side = Side.ENC,
        layers: Optional[Sequence[int]] = None,
        pooling: Pooling = Pooling.WORD,
    ) -> List[SweepRow]:
        """Mean dev F1 over seeds for every layer (all encoder layers 0..Le by default)."""
        train, dev = list(train), list(dev)
        if layers is None:
            if not trace_set.traces:
                raise ValidationFailedError("Empty trace set")
            dims = trace_set.traces[0].dims
            layers = range(dims.enc_layers + 1) if side == Side.ENC else range(1, dims.dec_layers + 1)
        rows = []
        for layer in layers:
            train_set = self.builder.token_dataset(train, trace_set, side, layer, task, pooling)
            dev_set = self.builder.token_dataset(dev, trace_set, side, layer, task, pooling)
            models = self.trainer.train_probe(train_set, dev_set, task, side, layer)
            per_seed = [score(m, dev_set).f1 for m in models]
            rows.append(SweepRow(side=side, layer=layer, f1=float(np.mean(per_seed)), f1_per_seed=per_seed))
        return rows

    @staticmethod
    def projection_table(
        models: Sequence[ProbeModel], splits: Dict[Split, ProbeDataset], baseline: bool = False
    ) -> List[ProjectionRow]:
        """Seed-averaged P/R/F1 per split, optionally with the word-alignment baseline rows."""
        rows = []
        for split, dataset in splits.items():
            avg = macro(score(m, dataset) for m in models)
            source = f"{models[0].side.value}{models[0].layer}"
            rows.append(ProjectionRow(split=split, source=source, precision=avg.precision, recall=avg.recall, f1=avg.f1))
            reference = WORD_ALIGNMENT_BASELINE.get(split, {}).get(models[0].task)
            if baseline and reference:
                rows.append(
                    ProjectionRow(split=split, source="word_alignment", precision=reference[0], recall=reference[1], f1=reference[2])
                )
        return rows

    def outcome_comparison(
        self,
        models: Sequence[ProbeModel],
        sentences: Iterable[AnnotatedSentence],
        trace_set: TraceSet,
        labels: Iterable[ManualEvalLabel],
        pooling: Pooling = Pooling.WORD,
    ) -> List[OutcomeRow]:
        """
        Scores the probes separately on sentences whose negation was translated
        Correct and Incorrect.
        """
        outcome_of = {label.pair_id: label.category for label in labels}
        sentences = list(sentences)
        rows = []
        for outcome in (TranslationCategory.CORRECT, TranslationCategory.INCORRECT):
            subset = [s for s in sentences if outcome_of.get(s.sentence_id) == outcome]
            if not subset:
                logger.warning("No %s sentences for the outcome comparison", outcome.value)
                rows.append(OutcomeRow(outcome=outcome.value, sentences=0))
                continue
            model = models[0]
            dataset = self.builder.token_dataset(subset, trace_set, model.side, model.layer, model.task, pooling)
            avg = macro(score(m, dataset) for m in models)
            rows.append(
                OutcomeRow(
                    outcome=outcome.value, sentences=len(subset), precision=avg.precision, recall=avg.recall, f1=avg.f1
                )
            )
        return rows
