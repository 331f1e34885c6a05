"""src/apps/attnflow/tests/test_graph.py."""

import random

import networkx as nx
import numpy as np
import pytest
from src.apps.attnflow.services.graph import (
    add_residual,
    audit_flow,
    build_flow_graph,
    decoder_node,
    encoder_node,
    head_aggregate,
    max_flow,
)
from src.apps.tracestore.schemas import TraceDims
from src.core.enum import HeadMode
from src.core.exceptions import ValidationFailedError
from tests.utils import brute_force_min_cut, build_trace

SWAP_HEADS = np.array([[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]])


def test_head_average():
    """Averaging the two permutation heads gives uniform rows."""
    assert np.array_equal(head_aggregate(SWAP_HEADS), np.full((2, 2), 0.5))


def test_head_max():
    """Entrywise maximum of the two heads."""
    assert np.array_equal(head_aggregate(SWAP_HEADS, HeadMode.MAX), np.ones((2, 2)))


@pytest.mark.parametrize("mode", list(HeadMode))
def test_single_head_unchanged(mode):
    """One head passes through."""
    assert np.array_equal(head_aggregate(SWAP_HEADS[:1], mode), SWAP_HEADS[0])


def test_no_heads():
    """Zero heads is an error."""
    with pytest.raises(ValidationFailedError):
        head_aggregate(np.zeros((0, 2, 2)))


def test_residual_examples():
    """Identity is a fixed point; a swap becomes uniform."""
    assert np.array_equal(add_residual(np.eye(3)), np.eye(3))
    assert np.array_equal(add_residual(SWAP_HEADS[1]), np.full((2, 2), 0.5))
    with pytest.raises(ValidationFailedError):
        add_residual(np.ones((2, 3)))


def test_residual_and_average_keep_rows_stochastic():
    """Row sums stay at one; max never lowers an entry."""
    rng = np.random.default_rng(0)
    for _ in range(50):
        attn = rng.random((3, 5, 5))
        attn /= attn.sum(axis=-1, keepdims=True)
        assert np.allclose(add_residual(attn[0]).sum(axis=-1), 1.0, atol=1e-6)
        assert np.allclose(head_aggregate(attn).sum(axis=-1), 1.0, atol=1e-6)
        assert (head_aggregate(attn, HeadMode.MAX) >= attn).all()


def test_node_count(synthesizer):
    """(Le+1)*S encoder and Ld*T decoder nodes."""
    trace = synthesizer.synth_trace(0, TraceDims.parse("6,6,1,10,8,2"))
    graph = build_flow_graph(trace)
    assert graph.graph.number_of_nodes() == 70 + 48


def test_synthesized_graph_is_layered(synthesizer):
    """Random traces give acyclic layered graphs."""
    for seed in range(5):
        graph = build_flow_graph(synthesizer.synth_trace(seed, TraceDims.parse("3,3,2,4,5,2")))
        assert graph.is_layered()
        assert all(c >= 0 for _, _, c in graph.graph.edges(data="capacity"))


def test_one_hot_paths():
    """One-hot cross-attention and identity self-attention reach one embedding."""
    cross = np.zeros((3, 1, 3, 4))
    cross[..., 2] = 1.0
    graph = build_flow_graph(build_trace(cross))
    for layer in range(1, 4):
        for t in range(3):
            reached = {n for n in nx.descendants(graph.graph, decoder_node(layer, t)) if n[0] == "enc" and n[1] == 0}
            assert reached == {encoder_node(0, 2)}


def test_first_decoder_layer_has_no_self_edges():
    """Layer-1 decoder nodes only point at the encoder top."""
    cross = np.full((2, 1, 2, 2), 0.5)
    graph = build_flow_graph(build_trace(cross))
    assert all(v[0] == "enc" for v in graph.graph.successors(decoder_node(1, 0)))
    assert graph.capacity(decoder_node(2, 1), decoder_node(1, 1)) == 0.5
    assert graph.capacity(decoder_node(2, 1), encoder_node(2, 0)) == 0.25


def _chain(capacities):
    graph = nx.DiGraph()
    for i, c in enumerate(capacities):
        graph.add_edge(i, i + 1, capacity=c)
    return graph


def test_single_path_bottleneck():
    """0.3 then 0.7 carries 0.3."""
    value, _ = max_flow(_chain([0.3, 0.7]), 0, 2)
    assert value == pytest.approx(0.3, abs=1e-12)


def test_two_disjoint_paths():
    """Bottlenecks 0.2 and 0.4 add up to 0.6."""
    graph = nx.DiGraph()
    for u, v, c in [("s", "a", 0.2), ("a", "b", 0.9), ("b", "t", 0.5), ("s", "c", 0.8), ("c", "d", 0.4), ("d", "t", 0.6)]:
        graph.add_edge(u, v, capacity=c)
    value, flow = max_flow(graph, "s", "t")
    assert value == pytest.approx(0.6, abs=1e-12)
    assert value == pytest.approx(brute_force_min_cut({(u, v): c for u, v, c in graph.edges(data="capacity")}, list(graph), "s", "t"))
    assert audit_flow(graph, flow, "s", "t") == []


def test_zero_cut():
    """A zero-capacity separating edge blocks everything."""
    assert max_flow(_chain([0.5, 0.0, 0.5]), 0, 3)[0] == 0.0


def test_source_equals_sink():
    """Source and sink must differ."""
    with pytest.raises(ValidationFailedError):
        max_flow(_chain([0.5]), 0, 0)


def _random_layered_graph(rng: random.Random):
    budget = rng.randint(2, 10)
    layers = [["s"]]
    node_id = 0
    while budget > 0:
        size = min(budget, rng.randint(1, 3))
        layers.append(list(range(node_id, node_id + size)))
        node_id += size
        budget -= size
    layers.append(["t"])
    capacities = {}
    for upper, lower in zip(layers, layers[1:]):
        for u in upper:
            for v in lower:
                if rng.random() < 0.7:
                    capacities[(u, v)] = rng.random()
    nodes = [n for layer in layers for n in layer]
    return capacities, nodes


def test_max_flow_matches_min_cut_enumeration():
    """1000 random layered graphs agree with exhaustive min-cut enumeration."""
    rng = random.Random(1234)
    for _ in range(1000):
        capacities, nodes = _random_layered_graph(rng)
        graph = nx.DiGraph()
        graph.add_nodes_from(nodes)
        for (u, v), c in capacities.items():
            graph.add_edge(u, v, capacity=c)
        value, flow = max_flow(graph, "s", "t")
        assert abs(value - brute_force_min_cut(capacities, nodes, "s", "t")) <= 1e-9
        assert audit_flow(graph, flow, "s", "t") == []


def test_audit_flags_violations():
    """Over-capacity and unbalanced nodes are reported."""
    graph = _chain([0.5, 0.5])
    assert len(audit_flow(graph, {0: {1: 0.7}, 1: {2: 0.5}}, 0, 2)) == 2
