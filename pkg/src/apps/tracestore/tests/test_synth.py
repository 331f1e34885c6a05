"""src/apps/tracestore/tests/test_synth.py."""

import numpy as np
import pytest
from src.apps.tracestore.schemas import ATTENTION_NAMES, TENSOR_NAMES, TraceDims, TraceSet


def test_same_seed_same_trace(synthesizer, small_dims):
    """Synthesis is deterministic."""
    a = synthesizer.synth_trace(42, small_dims)
    b = synthesizer.synth_trace(42, small_dims)
    for name in TENSOR_NAMES:
        assert np.array_equal(getattr(a, name), getattr(b, name))


def test_rows_are_distributions(synthesizer, small_dims):
    """Rows sum to one within 1e-6."""
    trace = synthesizer.synth_trace(1, small_dims)
    for name in ATTENTION_NAMES:
        sums = getattr(trace, name).astype(np.float64).sum(axis=-1)
        assert np.abs(sums - 1.0).max() <= 1e-6


def test_causal_mask(synthesizer, small_dims):
    """Query 0 never attends to key 2."""
    trace = synthesizer.synth_trace(1, small_dims)
    assert (trace.dec_self_attn[:, :, 0, 2] == 0).all()


@pytest.mark.parametrize("dims", ["1,1,1,1,1,1", "2,3,4,5,6,7", "6,6,8,9,11,16"])
@pytest.mark.parametrize("seed", [0, 1, 99])
def test_validation_accepts_synthesized(trace_container, synthesizer, seed, dims):
    """Every synthesized set validates."""
    trace_container.validate(synthesizer.synth_set(seed, TraceDims.parse(dims), count=2))


def test_logprobs_negative(synthesizer, small_dims):
    """Target log-probabilities are negative."""
    assert (synthesizer.synth_trace(3, small_dims).tgt_token_logprobs < 0).all()


def test_empty_set_has_no_dims():
    """An empty set has no shared dims."""
    assert TraceSet().shared_dims is None
