"""src/apps/tracestore/services/synth.py."""

from typing import List, Optional

import numpy as np

from src.apps.tracestore.schemas import ModelTrace, TraceDims, TraceFlags, TraceSet


def _stochastic(rng: np.random.Generator, shape: tuple, causal: bool = False) -> np.ndarray:
    weights = rng.random(shape) + 1e-3
    if causal:
        weights *= np.tril(np.ones(shape[-2:]))
    return (weights / weights.sum(axis=-1, keepdims=True)).astype(np.float32)


class TraceSynthesizer:
    """
    Deterministic pseudo-random traces for fixtures and smoke runs.
    """

    def synth_trace(self, seed: int, dims: TraceDims, pair_id: Optional[str] = None) -> ModelTrace:
        """One trace satisfying every ModelTrace invariant."""
        rng = np.random.default_rng(seed)
        le, ld, h = dims.enc_layers, dims.dec_layers, dims.heads
        s, t, d = dims.src_len, dims.tgt_len, dims.hidden_dim
        return ModelTrace(
            pair_id=pair_id or f"synth-{seed}",
            dims=dims,
            enc_self_attn=_stochastic(rng, (le, h, s, s)),
            dec_self_attn=_stochastic(rng, (ld, h, t, t), causal=True),
            cross_attn=_stochastic(rng, (ld, h, t, s)),
            enc_hidden=rng.standard_normal((le + 1, s, d)).astype(np.float32),
            dec_hidden=rng.standard_normal((ld, t, d)).astype(np.float32),
            tgt_token_logprobs=np.log(rng.uniform(0.05, 0.95, t)).astype(np.float32),
        )

    def synth_set(self, seed: int, dims: TraceDims, count: int = 1, flags: TraceFlags = TraceFlags()) -> TraceSet:
        """count traces with seeds seed, seed+1, ..."""
        traces: List[ModelTrace] = [
            self.synth_trace(seed + i, dims, pair_id=f"synth-{seed + i}") for i in range(count)
        ]
        return TraceSet(traces=traces, flags=flags)
