"""src/apps/attnflow/services/graph.py."""

import logging
from typing import Dict, Hashable, List, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.flow import edmonds_karp

from src.apps.tracestore.schemas import ModelTrace
from src.core.enum import DecoderMixing, HeadMode, Side
from src.core.exceptions import ValidationFailedError

logger = logging.getLogger(__name__)

Node = Tuple[str, int, int]
FlowDict = Dict[Hashable, Dict[Hashable, float]]


def head_aggregate(attn: np.ndarray, mode: HeadMode = HeadMode.AVERAGE) -> np.ndarray:
    """Combines [H][Q][K] attention into [Q][K]."""
    attn = np.asarray(attn, dtype=np.float64)
    if attn.ndim != 3 or attn.shape[0] == 0:
        raise ValidationFailedError(f"Expected a non-empty [H][Q][K] tensor, got shape {attn.shape}")
    if HeadMode(mode) == HeadMode.MAX:
        return attn.max(axis=0)
    return attn.mean(axis=0)


def add_residual(attn: np.ndarray) -> np.ndarray:
    """0.5*A + 0.5*I for a square attention matrix."""
    attn = np.asarray(attn, dtype=np.float64)
    if attn.ndim != 2 or attn.shape[0] != attn.shape[1]:
        raise ValidationFailedError(f"Residual mixing needs a square matrix, got shape {attn.shape}")
    return 0.5 * attn + 0.5 * np.eye(attn.shape[0])


def encoder_node(layer: int, pos: int) -> Node:
    """Encoder node; layer 0 holds the embeddings."""
    return (Side.ENC.value, layer, pos)


def decoder_node(layer: int, pos: int) -> Node:
    """Decoder node, layers counted from 1."""
    return (Side.DEC.value, layer, pos)


class FlowGraph:
    """
    Layered capacity graph of one trace.
    Edges point from a node to the nodes it attends to, towards the embeddings.
    """

    def __init__(self, graph: nx.DiGraph, enc_layers: int, dec_layers: int, src_len: int, tgt_len: int):
        self.graph = graph
        self.enc_layers = enc_layers
        self.dec_layers = dec_layers
        self.src_len = src_len
        self.tgt_len = tgt_len

    def capacity(self, u: Node, v: Node) -> float:
        """Capacity of edge u->v, 0 when absent."""
        data = self.graph.get_edge_data(u, v)
        return data["capacity"] if data else 0.0

    def is_layered(self) -> bool:
        """Acyclic, and every edge descends a layer or crosses into the encoder top."""
        if not nx.is_directed_acyclic_graph(self.graph):
            return False
        for (side_u, layer_u, _), (side_v, layer_v, _) in self.graph.edges:
            if side_u == side_v and layer_v != layer_u - 1:
                return False
            if side_u != side_v and (side_u != Side.DEC.value or layer_v != self.enc_layers):
                return False
        return True

    def max_flow(self, source: Node, sink: Node) -> Tuple[float, FlowDict]:
        """Exact maximum flow value with the edge flow assignment."""
        return max_flow(self.graph, source, sink)


def max_flow(graph: nx.DiGraph, source: Hashable, sink: Hashable) -> Tuple[float, FlowDict]:
    """Edmonds-Karp maximum flow over the 'capacity' edge attribute."""
    if source == sink:
        raise ValidationFailedError("Source and sink must differ")
    for node in (source, sink):
        if node not in graph:
            raise ValidationFailedError(f"Node {node} is not in the graph")
    value, flow = nx.maximum_flow(graph, source, sink, capacity="capacity", flow_func=edmonds_karp)
    return float(value), flow


def audit_flow(
    graph: nx.DiGraph, flow: FlowDict, source: Hashable, sink: Hashable, tol: float = 1e-9
) -> List[str]:
    """Capacity and conservation violations of a flow assignment."""
    violations: List[str] = []
    inflow: Dict[Hashable, float] = {n: 0.0 for n in graph}
    outflow: Dict[Hashable, float] = {n: 0.0 for n in graph}
    for u, v, data in graph.edges(data=True):
        f = flow.get(u, {}).get(v, 0.0)
        if f < -tol or f > data["capacity"] + tol:
            violations.append(f"edge {u}->{v}: flow {f} outside [0, {data['capacity']}]")
        outflow[u] += f
        inflow[v] += f
    for node in graph:
        if node not in (source, sink) and abs(inflow[node] - outflow[node]) > tol:
            violations.append(f"node {node}: inflow {inflow[node]} != outflow {outflow[node]}")
    return violations


def _add_edges(graph: nx.DiGraph, sources: List[Node], targets: List[Node], weights: np.ndarray) -> None:
    for i, u in enumerate(sources):
        for j, v in enumerate(targets):
            if weights[i, j] > 0:
                graph.add_edge(u, v, capacity=float(weights[i, j]))


def build_flow_graph(
    trace: ModelTrace,
    head_mode: HeadMode = HeadMode.AVERAGE,
    mixing: DecoderMixing = DecoderMixing.SPLIT,
) -> FlowGraph:
    """
    Encoder layer l attends to layer l-1 through residual-mixed self-attention.
    Decoder layer l attends to the encoder top through cross-attention and,
    from layer 2 on, to decoder layer l-1 through residual-mixed self-attention.
    With SPLIT mixing both decoder edge families are halved.
    """
    dims = trace.dims
    le, ld, s, t = dims.enc_layers, dims.dec_layers, dims.src_len, dims.tgt_len
    graph = nx.DiGraph()
    graph.add_nodes_from(encoder_node(layer, pos) for layer in range(le + 1) for pos in range(s))
    graph.add_nodes_from(decoder_node(layer, pos) for layer in range(1, ld + 1) for pos in range(t))

    for layer in range(1, le + 1):
        weights = add_residual(head_aggregate(trace.enc_self_attn[layer - 1], head_mode))
        _add_edges(
            graph,
            [encoder_node(layer, p) for p in range(s)],
            [encoder_node(layer - 1, p) for p in range(s)],
            weights,
        )

    enc_top = [encoder_node(le, p) for p in range(s)]
    share = 0.5 if DecoderMixing(mixing) == DecoderMixing.SPLIT else 1.0
    for layer in range(1, ld + 1):
        queries = [decoder_node(layer, p) for p in range(t)]
        cross = head_aggregate(trace.cross_attn[layer - 1], head_mode)
        if layer == 1:
            _add_edges(graph, queries, enc_top, cross)
            continue
        self_attn = add_residual(head_aggregate(trace.dec_self_attn[layer - 1], head_mode))
        _add_edges(graph, queries, enc_top, share * cross)
        _add_edges(graph, queries, [decoder_node(layer - 1, p) for p in range(t)], share * self_attn)

    logger.debug(
        "Flow graph for %s: %d nodes, %d edges", trace.pair_id, graph.number_of_nodes(), graph.number_of_edges()
    )
    return FlowGraph(graph, le, ld, s, t)
