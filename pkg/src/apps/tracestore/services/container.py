"""src/apps/tracestore/services/container.py."""

import json
import logging
import struct
from pathlib import Path
from typing import Dict, Iterable, List

import numpy as np
from pydantic import ValidationError

from src.apps.tracestore.schemas import (
    ATTENTION_NAMES,
    TENSOR_NAMES,
    ModelTrace,
    TraceDims,
    TraceFlags,
    TraceSet,
)
from src.core.exceptions import (
    ResourceNotFoundError,
    TraceFormatError,
    TraceValidationError,
    ValidationFailedError,
)
from src.core.utils import atomic_write_bytes

logger = logging.getLogger(__name__)

MAGIC = b"NEGTRACE"
SCHEMA_VERSION = 1
DTYPE = "<f4"
ITEMSIZE = 4
HEADER_LEN = struct.Struct("<Q")
# per tensor, at most this many offending cells are listed
MAX_PROBLEMS = 5


class TraceContainer:
    """
    Reads, writes and validates trace containers.

    Layout: MAGIC, uint64 LE header length, UTF-8 JSON header (sorted keys),
    then every record's tensors as raw float32 LE in TENSOR_NAMES order.
    """

    def __init__(self, row_tolerance: float = 1e-4):
        self.row_tolerance = row_tolerance

    def encode(self, trace_set: TraceSet) -> bytes:
        """Serializes a TraceSet; identical input gives identical bytes."""
        records = []
        chunks: List[bytes] = []
        offset = 0
        for trace in trace_set.traces:
            extents = []
            for name in TENSOR_NAMES:
                payload = np.ascontiguousarray(getattr(trace, name), dtype=DTYPE).tobytes()
                extents.append({"name": name, "offset": offset, "nbytes": len(payload)})
                chunks.append(payload)
                offset += len(payload)
            records.append(
                {
                    "pair_id": trace.pair_id,
                    "dims": trace.dims.model_dump(),
                    "src_tokens": trace.src_tokens,
                    "tgt_tokens": trace.tgt_tokens,
                    "tensors": extents,
                }
            )
        header = {
            "schema_version": SCHEMA_VERSION,
            "dtype": DTYPE,
            "log_base": "e",
            "dims": trace_set.shared_dims,
            "flags": trace_set.flags.model_dump(),
            "records": records,
        }
        blob = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()
        return MAGIC + HEADER_LEN.pack(len(blob)) + blob + b"".join(chunks)

    def write_trace(self, trace_set: TraceSet, path: Path) -> None:
        """Writes the container atomically."""
        atomic_write_bytes(Path(path), self.encode(trace_set))
        logger.info("Wrote %d traces to %s", len(trace_set.traces), path)

    def decode(self, data: bytes) -> TraceSet:
        """
        Parses container bytes without validating distributions.
        Every structural defect raises TraceFormatError.
        """
        prefix = len(MAGIC) + HEADER_LEN.size
        if len(data) < prefix or data[: len(MAGIC)] != MAGIC:
            raise TraceFormatError("Bad magic or truncated preamble")
        (header_len,) = HEADER_LEN.unpack_from(data, len(MAGIC))
        if len(data) < prefix + header_len:
            raise TraceFormatError("Truncated header")
        try:
            header = json.loads(data[prefix: prefix + header_len].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise TraceFormatError(f"Unreadable header: {e}") from e
        payload = memoryview(data)[prefix + header_len:]

        try:
            if header["schema_version"] != SCHEMA_VERSION:
                raise TraceFormatError(f"Unsupported schema version {header['schema_version']}")
            if header["dtype"] != DTYPE:
                raise TraceFormatError(f"Unsupported dtype {header['dtype']}")
            flags = TraceFlags.model_validate(header["flags"])
            traces = [self._decode_record(record, payload) for record in header["records"]]
        except (AttributeError, KeyError, TypeError, ValueError, ValidationError) as e:
            raise TraceFormatError(f"Malformed header: {e}") from e

        consumed = sum(t.nbytes for trace in traces for t in (getattr(trace, n) for n in TENSOR_NAMES))
        if consumed != len(payload):
            raise TraceFormatError(f"{len(payload) - consumed} trailing bytes after the last tensor")
        return TraceSet(traces=traces, flags=flags)

    @staticmethod
    def _decode_record(record: dict, payload: memoryview) -> ModelTrace:
        dims = TraceDims.model_validate(record["dims"])
        extents = {ext["name"]: ext for ext in record["tensors"]}
        tensors: Dict[str, np.ndarray] = {}
        for name, shape in dims.shapes().items():
            ext = extents[name]
            offset, nbytes = int(ext["offset"]), int(ext["nbytes"])
            if nbytes != int(np.prod(shape)) * ITEMSIZE:
                raise TraceFormatError(f"{record['pair_id']}: {name} extent does not match dims")
            if offset < 0 or offset + nbytes > len(payload):
                raise TraceFormatError(f"{record['pair_id']}: {name} runs past the end of the file")
            tensors[name] = np.frombuffer(payload, dtype=DTYPE, count=nbytes // ITEMSIZE, offset=offset).reshape(shape).copy()
        return ModelTrace(
            pair_id=record["pair_id"],
            dims=dims,
            src_tokens=record.get("src_tokens"),
            tgt_tokens=record.get("tgt_tokens"),
            **tensors,
        )

    def read_trace(self, path: Path, validate: bool = True) -> TraceSet:
        """Reads and, by default, validates a container file."""
        try:
            data = Path(path).read_bytes()
        except FileNotFoundError as e:
            raise ResourceNotFoundError(f"Trace file not found: {path}") from e
        trace_set = self.decode(data)
        if validate:
            self.validate(trace_set)
        logger.info("Read %d traces from %s", len(trace_set.traces), path)
        return trace_set

    def find_problems(self, trace: ModelTrace) -> List[str]:
        """Lists every invariant violation of one trace."""
        problems: List[str] = []
        pid = trace.pair_id
        for name in ATTENTION_NAMES:
            attn = getattr(trace, name)
            if not np.isfinite(attn).all():
                problems.append(f"{pid}: {name} holds non-finite values")
                continue
            for layer, head, row, col in np.argwhere(attn < 0)[:MAX_PROBLEMS]:
                problems.append(
                    f"{pid}: {name} layer {layer + 1} head {head} row {row} col {col} is negative"
                )
            sums = attn.astype(np.float64).sum(axis=-1)
            for layer, head, row in np.argwhere(np.abs(sums - 1.0) > self.row_tolerance)[:MAX_PROBLEMS]:
                problems.append(
                    f"{pid}: {name} layer {layer + 1} head {head} row {row} "
                    f"sums to {sums[layer, head, row]:.4f}"
                )
        future = np.triu(np.ones((trace.dims.tgt_len,) * 2, dtype=bool), k=1)
        leaks = np.argwhere((trace.dec_self_attn != 0) & future)
        for layer, head, row, col in leaks[:MAX_PROBLEMS]:
            problems.append(f"{pid}: dec_self_attn layer {layer + 1} head {head} row {row} attends to future position {col}")
        lps = trace.tgt_token_logprobs
        if not np.isfinite(lps).all() or (lps > 0).any():
            problems.append(f"{pid}: tgt_token_logprobs must be finite and <= 0")
        for name in ("enc_hidden", "dec_hidden"):
            if not np.isfinite(getattr(trace, name)).all():
                problems.append(f"{pid}: {name} holds non-finite values")
        return problems

    def validate(self, trace_set: TraceSet) -> None:
        """Raises TraceValidationError listing every problem of every trace."""
        problems: List[str] = []
        shared = trace_set.shared_dims
        seen = set()
        for trace in trace_set.traces:
            if trace.pair_id in seen:
                problems.append(f"{trace.pair_id}: duplicate pair id")
            seen.add(trace.pair_id)
            if trace.dims.shared() != shared:
                problems.append(f"{trace.pair_id}: dims {trace.dims.shared()} differ from the set's {shared}")
            problems.extend(self.find_problems(trace))
        if problems:
            logger.warning("Trace validation found %d problems", len(problems))
            raise TraceValidationError(problems)

    @staticmethod
    def merge(trace_sets: Iterable[TraceSet]) -> TraceSet:
        """Concatenates sets in order; flags must agree and ids stay unique."""
        sets = list(trace_sets)
        if not sets:
            return TraceSet()
        flags = sets[0].flags
        traces: List[ModelTrace] = []
        seen = set()
        for trace_set in sets:
            if trace_set.flags != flags:
                raise ValidationFailedError("Cannot merge traces exported with different flags")
            for trace in trace_set.traces:
                if trace.pair_id in seen:
                    raise ValidationFailedError(f"Duplicate pair id across trace files: {trace.pair_id}")
                seen.add(trace.pair_id)
                traces.append(trace)
        return TraceSet(traces=traces, flags=flags)
