"""src/apps/probe/schemas.py."""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.enum import Pooling, ProbeTask, Side, Split

# class indices
OTHERS, CUE, COMPONENT = 0, 1, 2


class ProbeDataset(BaseModel):
    """Probe inputs [N][D] with one class index per row."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vectors: np.ndarray
    labels: np.ndarray
    num_classes: int = Field(ge=2)
    sentence_ids: List[str] = []

    @model_validator(mode="after")
    def validate_rows(self) -> "ProbeDataset":
        """One label per vector, every label below num_classes."""
        if self.vectors.ndim != 2 or self.labels.shape != (self.vectors.shape[0],):
            raise ValueError(f"vectors {self.vectors.shape} and labels {self.labels.shape} disagree")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise ValueError(f"labels must lie in 0..{self.num_classes - 1}")
        return self

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def dim(self) -> int:
        """Input dimension."""
        return int(self.vectors.shape[1])


class ProbeModel(BaseModel):
    """One-hidden-layer classifier plus how it was selected."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    task: ProbeTask
    side: Side = Side.ENC
    layer: int = 0
    seed: int = 0
    epochs: int = 100
    best_dev_f1: float = 0.0
    epoch_selected: int = 0

    @property
    def params(self) -> Dict[str, np.ndarray]:
        """Parameter arrays by name."""
        return {"W1": self.W1, "b1": self.b1, "W2": self.W2, "b2": self.b2}

    @property
    def hidden(self) -> int:
        """Hidden layer width."""
        return int(self.W1.shape[0])


class PRF(BaseModel):
    """Precision, recall and F1."""

    precision: float = Field(ge=0, le=1)
    recall: float = Field(ge=0, le=1)
    f1: float = Field(ge=0, le=1)


class SweepRow(BaseModel):
    """Mean dev F1 over seeds for one layer."""

    side: Side
    layer: int
    f1: float
    f1_per_seed: List[float]


class ProjectionRow(BaseModel):
    """Seed-averaged P/R/F1 on one split."""

    split: Split
    source: str
    precision: float
    recall: float
    f1: float


class OutcomeRow(BaseModel):
    """Seed-averaged P/R/F1 on sentences of one translation outcome."""

    outcome: str
    sentences: int
    precision: Optional[float] = None
    recall: Optional[float] = None
    f1: Optional[float] = None


class ProbeRunMeta(BaseModel):
    """Echo of the probe configuration."""

    task: ProbeTask
    side: Side
    layer: Optional[int] = None
    pooling: Pooling
    hidden: int
    epochs: int
    seeds: List[int]
    learning_rate: float
