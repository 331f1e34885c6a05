"""src/apps/reprsim/schemas.py."""

import re
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.core.enum import Side
from src.core.exceptions import BadRequestError

LAYER_REF_RE = re.compile(r"^(enc|dec)?(\d+)(?:(?:\.\.|-)(\d+))?$")


class LayerRef(BaseModel):
    """A side plus a layer index, written enc3 or dec6."""

    model_config = ConfigDict(frozen=True)

    side: Side
    layer: int = Field(ge=0)

    def __str__(self) -> str:
        return f"{self.side.value}{self.layer}"


def parse_layer_refs(value: str, default_side: Side = Side.ENC) -> List[LayerRef]:
    """
    Parses '1..6,dec6' style lists; a bare number means a layer of default_side.
    """
    refs: List[LayerRef] = []
    for part in value.split(","):
        match = LAYER_REF_RE.match(part.strip())
        if not match:
            raise BadRequestError(f"Invalid layer reference {part!r}")
        side = Side(match.group(1)) if match.group(1) else Side(default_side)
        low = int(match.group(2))
        high = int(match.group(3) or low)
        refs.extend(LayerRef(side=side, layer=layer) for layer in range(low, high + 1))
    return refs


class SimTriple(BaseModel):
    """Mean cue similarities of one layer; a value is None when its bucket is empty."""

    layer: str
    sim_ce: Optional[float] = Field(default=None, ge=-1, le=1)
    sim_cs: Optional[float] = Field(default=None, ge=-1, le=1)
    sim_co: Optional[float] = Field(default=None, ge=-1, le=1)
    n_ce: int = 0
    n_cs: int = 0
    n_co: int = 0
