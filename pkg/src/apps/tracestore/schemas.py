"""src/apps/tracestore/schemas.py."""

from typing import Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.exceptions import BadRequestError

TENSOR_NAMES = (
    "enc_self_attn",
    "dec_self_attn",
    "cross_attn",
    "enc_hidden",
    "dec_hidden",
    "tgt_token_logprobs",
)
ATTENTION_NAMES = TENSOR_NAMES[:3]


class TraceDims(BaseModel):
    """Sizes of one exported trace."""

    model_config = ConfigDict(frozen=True)

    enc_layers: int = Field(ge=1)
    dec_layers: int = Field(ge=1)
    heads: int = Field(ge=1)
    src_len: int = Field(ge=1)
    tgt_len: int = Field(ge=1)
    hidden_dim: int = Field(ge=1)

    @classmethod
    def parse(cls, value: str) -> "TraceDims":
        """Parses 'Le,Ld,H,S,T,D'."""
        parts = value.split(",")
        try:
            numbers = [int(p) for p in parts]
        except ValueError as e:
            raise BadRequestError(f"Invalid dims {value!r}, expected Le,Ld,H,S,T,D") from e
        if len(numbers) != 6 or min(numbers) < 1:
            raise BadRequestError(f"Invalid dims {value!r}, expected six positive integers")
        return cls(**dict(zip(cls.model_fields, numbers)))

    def shapes(self) -> Dict[str, tuple]:
        """Expected tensor shapes in container order."""
        le, ld, h = self.enc_layers, self.dec_layers, self.heads
        s, t, d = self.src_len, self.tgt_len, self.hidden_dim
        return {
            "enc_self_attn": (le, h, s, s),
            "dec_self_attn": (ld, h, t, t),
            "cross_attn": (ld, h, t, s),
            "enc_hidden": (le + 1, s, d),
            "dec_hidden": (ld, t, d),
            "tgt_token_logprobs": (t,),
        }

    def shared(self) -> Dict[str, int]:
        """The sizes every trace of a set must agree on."""
        return self.model_dump(include={"enc_layers", "dec_layers", "heads", "hidden_dim"})


class TraceFlags(BaseModel):
    """Exporter choices echoed by every report built on the traces."""

    model_config = ConfigDict(frozen=True)

    decoder_final_norm: bool = False
    embeddings_include_position: bool = True
    flow_node: Literal["pre_ffn", "post_ffn"] = "post_ffn"


class ModelTrace(BaseModel):
    """
    Attention tensors, hidden states and target log-probabilities of one pair.
    Distribution invariants are checked by TraceContainer.validate.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pair_id: str
    dims: TraceDims
    enc_self_attn: np.ndarray
    dec_self_attn: np.ndarray
    cross_attn: np.ndarray
    enc_hidden: np.ndarray
    dec_hidden: np.ndarray
    tgt_token_logprobs: np.ndarray
    src_tokens: Optional[List[str]] = None
    tgt_tokens: Optional[List[str]] = None

    @field_validator(*TENSOR_NAMES, mode="before")
    @classmethod
    def as_float32(cls, value) -> np.ndarray:
        """Tensors are held as little-endian float32."""
        return np.ascontiguousarray(value, dtype="<f4")

    @model_validator(mode="after")
    def validate_shapes(self) -> "ModelTrace":
        """Tensor shapes and token lists agree with dims."""
        for name, shape in self.dims.shapes().items():
            actual = getattr(self, name).shape
            if actual != shape:
                raise ValueError(f"{self.pair_id}: {name} has shape {actual}, expected {shape}")
        if self.src_tokens is not None and len(self.src_tokens) != self.dims.src_len:
            raise ValueError(f"{self.pair_id}: {len(self.src_tokens)} source tokens for src_len {self.dims.src_len}")
        if self.tgt_tokens is not None and len(self.tgt_tokens) != self.dims.tgt_len:
            raise ValueError(f"{self.pair_id}: {len(self.tgt_tokens)} target tokens for tgt_len {self.dims.tgt_len}")
        return self


class TraceSet(BaseModel):
    """Ordered traces keyed by pair_id, plus the exporter flags."""

    model_config = ConfigDict(frozen=True)

    traces: List[ModelTrace] = []
    flags: TraceFlags = TraceFlags()

    @property
    def pair_ids(self) -> List[str]:
        """Pair ids in container order."""
        return [t.pair_id for t in self.traces]

    @property
    def shared_dims(self) -> Optional[Dict[str, int]]:
        """Shared sizes taken from the first trace."""
        return self.traces[0].dims.shared() if self.traces else None

    def get(self, pair_id: str) -> Optional[ModelTrace]:
        """Trace by pair id."""
        return next((t for t in self.traces if t.pair_id == pair_id), None)
