"""src/apps/reprsim/services.py."""

import logging
from typing import Dict, Iterable, List, Sequence, Set

import numpy as np

from src.apps.negdata.schemas import AnnotatedSentence
from src.apps.reprsim.schemas import LayerRef, SimTriple
from src.apps.tracestore.schemas import TraceSet
from src.apps.tracestore.services.states import HiddenStateReader
from src.core.exceptions import ValidationFailedError

logger = logging.getLogger(__name__)

BUCKETS = ("ce", "cs", "co")


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """dot(u, v) / (|u| |v|)."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationFailedError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    norms = float(np.dot(a, a) * np.dot(b, b))
    if norms == 0:
        raise ValidationFailedError("Cosine is undefined for a zero vector")
    return float(np.clip(np.dot(a, b) / np.sqrt(norms), -1.0, 1.0))


def sentence_buckets(sentence: AnnotatedSentence) -> Dict[str, List[tuple]]:
    """
    Word-index pairs per bucket: cue-event and cue-scope inside each instance,
    cue-outside against words covered by no span of the sentence.
    """
    covered: Set[int] = set()
    for inst in sentence.instances:
        covered |= inst.cue_tokens | inst.event_tokens | inst.scope_tokens
    outside = [i for i in range(len(sentence.tokens)) if i not in covered]
    pairs: Dict[str, List[tuple]] = {b: [] for b in BUCKETS}
    for inst in sentence.instances:
        cues = sorted(inst.cue_tokens)
        events = sorted(inst.event_tokens - inst.cue_tokens)
        scope = sorted(inst.scope_tokens - inst.event_tokens - inst.cue_tokens)
        pairs["ce"] += [(c, e) for c in cues for e in events]
        pairs["cs"] += [(c, s) for c in cues for s in scope]
        pairs["co"] += [(c, o) for c in cues for o in outside]
    return pairs


class SimilarityAnalyzer:
    """
    Cosine similarity between negation cues and events, scope tokens
    and non-negation tokens, micro-averaged over the corpus.
    """

    def __init__(self, reader: HiddenStateReader):
        self.reader = reader

    def sim_groups(self, sentences: Iterable[AnnotatedSentence], trace_set: TraceSet, ref: LayerRef) -> SimTriple:
        """One SimTriple for the layer; empty buckets stay None with count 0."""
        sums = {b: 0.0 for b in BUCKETS}
        counts = {b: 0 for b in BUCKETS}
        degenerate = 0
        for sentence in sentences:
            if not sentence.instances:
                continue
            trace = trace_set.get(sentence.sentence_id)
            if trace is None:
                logger.warning("No trace for sentence %s, skipped", sentence.sentence_id)
                continue
            vectors, _ = self.reader.word_states(trace, sentence.tokens, ref.side, ref.layer)
            for bucket, pairs in sentence_buckets(sentence).items():
                for i, j in pairs:
                    try:
                        value = cosine(vectors[i], vectors[j])
                    except ValidationFailedError:
                        degenerate += 1
                        continue
                    sums[bucket] += value
                    counts[bucket] += 1
        if degenerate:
            logger.warning("Layer %s: %d pair(s) with a zero hidden state skipped", ref, degenerate)
        values = {f"sim_{b}": (sums[b] / counts[b] if counts[b] else None) for b in BUCKETS}
        for b in BUCKETS:
            if not counts[b]:
                logger.warning("Layer %s: no %s pairs", ref, b)
        return SimTriple(layer=str(ref), **values, **{f"n_{b}": counts[b] for b in BUCKETS})

    def sim_sweep(
        self, sentences: Iterable[AnnotatedSentence], trace_set: TraceSet, refs: Sequence[LayerRef]
    ) -> List[SimTriple]:
        """One SimTriple per requested layer, in request order."""
        sentences = list(sentences)
        for trace in trace_set.traces[:1]:
            for ref in refs:
                self.reader.check_layer(trace, ref.side, ref.layer)
        return [self.sim_groups(sentences, trace_set, ref) for ref in refs]
