"""src/apps/attnflow/services/flow.py."""

import csv
import logging
import multiprocessing
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from src.apps.attnflow.schemas import CueLabel, FlowReport, FlowReportRow, RawCueAttention
from src.apps.attnflow.services.graph import FlowGraph, build_flow_graph, decoder_node, encoder_node, head_aggregate
from src.apps.attnflow.services.stats import spearman
from src.apps.tracestore.schemas import ModelTrace, TraceSet
from src.core.enum import CueGroup, DecoderMixing, FlowMeasure, HeadMode
from src.core.exceptions import BadRequestError, ResourceNotFoundError, ValidationFailedError

logger = logging.getLogger(__name__)


def read_cue_labels(path: Path) -> List[CueLabel]:
    """Reads a pair_id,src_pos,category CSV."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Cue file not found: {path}") from e
    labels = []
    for line_no, row in enumerate(rows, start=2):
        try:
            labels.append(CueLabel.model_validate(row))
        except (ValidationError, ValueError) as e:
            raise ValidationFailedError(f"{path}:{line_no}: invalid cue label") from e
    return labels


def _check_layer(trace: ModelTrace, layer: int) -> None:
    if not 1 <= layer <= trace.dims.dec_layers:
        raise BadRequestError(f"Decoder layer {layer} outside 1..{trace.dims.dec_layers}")


def _check_positions(trace: ModelTrace, positions: Sequence[int]) -> None:
    for pos in positions:
        if not 0 <= pos < trace.dims.src_len:
            raise BadRequestError(f"{trace.pair_id}: cue position {pos} outside 0..{trace.dims.src_len - 1}")


class FlowAnalyzer:
    """
    Attention flow and raw attention towards source negation cues.
    """

    def __init__(
        self,
        head_mode: HeadMode = HeadMode.AVERAGE,
        mixing: DecoderMixing = DecoderMixing.SPLIT,
        jobs: int = 1,
    ):
        self.head_mode = HeadMode(head_mode)
        self.mixing = DecoderMixing(mixing)
        self.jobs = jobs

    def build_flow_graph(self, trace: ModelTrace) -> FlowGraph:
        """Capacity graph of one trace with this analyzer's options."""
        return build_flow_graph(trace, self.head_mode, self.mixing)

    def cue_flow(
        self, trace: ModelTrace, cue_positions: Sequence[int], layer: int, graph: Optional[FlowGraph] = None
    ) -> float:
        """
        Maximum over decoder positions and cue subwords of the flow from
        (decoder, layer, t) to the cue's embedding node.
        """
        _check_layer(trace, layer)
        _check_positions(trace, cue_positions)
        graph = graph or self.build_flow_graph(trace)
        best = 0.0
        for pos in cue_positions:
            sink = encoder_node(0, pos)
            for t in range(trace.dims.tgt_len):
                value, _ = graph.max_flow(decoder_node(layer, t), sink)
                best = max(best, value)
        return best

    def raw_cue_attention(self, trace: ModelTrace, cue_positions: Sequence[int], layer: int) -> RawCueAttention:
        """Head-aggregated cross-attention on the cue column at one decoder layer."""
        _check_layer(trace, layer)
        _check_positions(trace, cue_positions)
        cross = head_aggregate(trace.cross_attn[layer - 1], self.head_mode)
        column = cross[:, list(cue_positions)].max(axis=1)
        return RawCueAttention(weights=column.tolist(), max_weight=float(column.max()))

    def _trace_values(self, job: Tuple[ModelTrace, List[CueLabel], List[int], FlowMeasure]) -> List[List[float]]:
        trace, labels, layers, measure = job
        graph = self.build_flow_graph(trace) if measure == FlowMeasure.FLOW else None
        values = []
        for label in labels:
            if measure == FlowMeasure.FLOW:
                values.append([self.cue_flow(trace, label.src_pos, layer, graph) for layer in layers])
            else:
                values.append([self.raw_cue_attention(trace, label.src_pos, layer).max_weight for layer in layers])
        return values

    def flow_report(
        self,
        trace_set: TraceSet,
        labels: Iterable[CueLabel],
        layers: Sequence[int],
        measure: FlowMeasure = FlowMeasure.FLOW,
    ) -> FlowReport:
        """
        Per layer: mean, min and max of the per-cue value for each outcome group
        and |spearman| between values and the translated/under-translated split.
        """
        labels = list(labels)
        layers = list(layers)
        by_trace: Dict[str, List[CueLabel]] = {}
        for label in labels:
            trace = trace_set.get(label.pair_id)
            if trace is None:
                raise ValidationFailedError(f"No trace for labeled pair {label.pair_id}")
            _check_positions(trace, label.src_pos)
            by_trace.setdefault(label.pair_id, []).append(label)
        for trace in trace_set.traces:
            for layer in layers:
                _check_layer(trace, layer)

        jobs = [(trace_set.get(pid), group, layers, measure) for pid, group in by_trace.items()]
        if self.jobs > 1 and len(jobs) > 1:
            with multiprocessing.Pool(processes=self.jobs) as pool:
                per_trace = pool.map(self._trace_values, jobs)
        else:
            per_trace = [self._trace_values(job) for job in jobs]

        ordered_labels = [label for _, group, _, _ in jobs for label in group]
        values = np.array([row for rows in per_trace for row in rows], dtype=np.float64).reshape(-1, len(layers))
        outcome = [1.0 if label.category == CueGroup.TRANSLATED else 0.0 for label in ordered_labels]

        rows: List[FlowReportRow] = []
        warnings: List[str] = []
        for k, layer in enumerate(layers):
            abs_rho = None
            if len(set(outcome)) == 2:
                try:
                    abs_rho = abs(spearman(values[:, k], outcome))
                except ValidationFailedError:
                    warnings.append(f"layer {layer}: values are constant, |rho| omitted")
            for group in CueGroup:
                members = [values[i, k] for i, label in enumerate(ordered_labels) if label.category == group]
                if not members:
                    warnings.append(f"layer {layer}: no {group.value} cues, row omitted")
                    continue
                rows.append(
                    FlowReportRow(
                        layer=layer,
                        group=group,
                        n=len(members),
                        mean=float(np.mean(members)),
                        min=float(np.min(members)),
                        max=float(np.max(members)),
                        abs_rho=abs_rho,
                    )
                )
        for warning in warnings:
            logger.warning(warning)
        return FlowReport(
            measure=measure,
            head_mode=self.head_mode,
            decoder_mixing=self.mixing,
            flags=trace_set.flags,
            rows=rows,
            warnings=warnings,
        )

    def attention_report(self, trace_set: TraceSet, labels: Iterable[CueLabel], layers: Sequence[int]) -> FlowReport:
        """flow_report over the per-cue maximum cross-attention weight."""
        return self.flow_report(trace_set, labels, layers, FlowMeasure.RAW)
