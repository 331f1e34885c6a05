"""tests/utils.py."""

import itertools
import math
from typing import Dict, Hashable, List, Sequence, Tuple

import numpy as np
from src.apps.tracestore.schemas import ModelTrace, TraceDims


def token_edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """
    Levenshtein distance over token lists.
    """
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def brute_force_min_cut(
    capacities: Dict[Tuple[Hashable, Hashable], float],
    nodes: Sequence[Hashable],
    source: Hashable,
    sink: Hashable,
) -> float:
    """
    Minimum s-t cut by enumerating every node subset that holds the source
    and not the sink.
    """
    inner = [n for n in nodes if n not in (source, sink)]
    edges = list(capacities.items())
    best = math.inf
    for r in range(len(inner) + 1):
        for chosen in itertools.combinations(inner, r):
            side = {source, *chosen}
            cut = math.fsum(c for (u, v), c in edges if u in side and v not in side)
            best = min(best, cut)
    return best


def average_ranks(values: Sequence[float]) -> List[float]:
    """
    1-based ranks, tied values share the mean of their positions.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def spearman_oracle(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average ranks, in plain Python."""
    rx, ry = average_ranks(x), average_ranks(y)
    mx, my = sum(rx) / len(rx), sum(ry) / len(ry)
    cov = math.fsum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = math.fsum((a - mx) ** 2 for a in rx)
    vy = math.fsum((b - my) ** 2 for b in ry)
    return cov / math.sqrt(vx * vy)


def build_trace(cross, enc_layers: int = 2, enc_self=None, dec_self=None, pair_id: str = "t0") -> ModelTrace:
    """
    Trace with the given cross-attention [Ld][H][T][S]; self-attention
    defaults to identity, hidden states to zeros.
    """
    cross = np.asarray(cross, dtype=np.float64)
    ld, h, t, s = cross.shape
    if enc_self is None:
        enc_self = np.broadcast_to(np.eye(s), (enc_layers, h, s, s))
    if dec_self is None:
        dec_self = np.broadcast_to(np.eye(t), (ld, h, t, t))
    le = np.asarray(enc_self).shape[0]
    return ModelTrace(
        pair_id=pair_id,
        dims=TraceDims(enc_layers=le, dec_layers=ld, heads=h, src_len=s, tgt_len=t, hidden_dim=2),
        enc_self_attn=enc_self,
        dec_self_attn=dec_self,
        cross_attn=cross,
        enc_hidden=np.zeros((le + 1, s, 2)),
        dec_hidden=np.zeros((ld, t, 2)),
        tgt_token_logprobs=-np.ones(t),
    )
