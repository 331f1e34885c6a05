"""src/apps/probe/services/dataset.py."""

import logging
from typing import Iterable, List, Set

import numpy as np

from src.apps.negdata.schemas import AnnotatedSentence
from src.apps.probe.schemas import COMPONENT, CUE, OTHERS, ProbeDataset
from src.apps.tracestore.schemas import TraceSet
from src.apps.tracestore.services.states import HiddenStateReader
from src.core.enum import Pooling, ProbeTask, Side
from src.core.exceptions import ValidationFailedError

logger = logging.getLogger(__name__)


def num_classes(task: ProbeTask) -> int:
    """{others, cue} for cues, {others, cue, scope/event} otherwise."""
    return 2 if task == ProbeTask.CUE else 3


def positive_class(task: ProbeTask) -> int:
    """The class whose F1 selects models and fills the tables."""
    return CUE if task == ProbeTask.CUE else COMPONENT


def word_labels(sentence: AnnotatedSentence, task: ProbeTask) -> List[int]:
    """Per-word class, cue winning over event and scope."""
    cues: Set[int] = set()
    components: Set[int] = set()
    for inst in sentence.instances:
        cues |= inst.cue_tokens
        if task == ProbeTask.SCOPE:
            components |= inst.scope_tokens
        elif task == ProbeTask.EVENT:
            components |= inst.event_tokens
    labels = []
    for i in range(len(sentence.tokens)):
        if i in cues:
            labels.append(CUE)
        elif i in components:
            labels.append(COMPONENT)
        else:
            labels.append(OTHERS)
    return labels


class ProbeDatasetBuilder:
    """
    Turns annotated sentences and their traces into probe datasets.
    Sentences are matched to traces by sentence_id == pair_id.
    """

    def __init__(self, reader: HiddenStateReader):
        self.reader = reader

    def token_dataset(
        self,
        sentences: Iterable[AnnotatedSentence],
        trace_set: TraceSet,
        side: Side,
        layer: int,
        task: ProbeTask,
        pooling: Pooling = Pooling.WORD,
    ) -> ProbeDataset:
        """One example per word (or per subword with subword pooling)."""
        vectors: List[np.ndarray] = []
        labels: List[int] = []
        ids: List[str] = []
        dim = None
        for sentence in sentences:
            trace = trace_set.get(sentence.sentence_id)
            if trace is None:
                logger.warning("No trace for sentence %s, skipped", sentence.sentence_id)
                continue
            if dim is not None and trace.dims.hidden_dim != dim:
                raise ValidationFailedError(
                    f"{sentence.sentence_id}: hidden_dim {trace.dims.hidden_dim} differs from {dim}"
                )
            dim = trace.dims.hidden_dim
            states, owners = self.reader.word_states(trace, sentence.tokens, side, layer, pooling)
            gold = word_labels(sentence, task)
            vectors.append(states)
            labels.extend(gold[w] for w in owners)
            ids.extend([sentence.sentence_id] * len(owners))
        if not labels:
            raise ValidationFailedError("No probe examples: no sentence matched a trace")
        return ProbeDataset(
            vectors=np.concatenate(vectors, axis=0),
            labels=np.asarray(labels, dtype=np.int64),
            num_classes=num_classes(task),
            sentence_ids=ids,
        )
