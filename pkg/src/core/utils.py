"""src/core/utils.py."""

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Iterator, List, Sequence

from src.core.exceptions import BadRequestError, ResourceNotFoundError, StorageError

logger = logging.getLogger(__name__)


def input_digest(path: Path) -> str:
    """
    Returns the sha256 hex digest of a file, used for report provenance.
    """
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                digest.update(chunk)
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Input not found: {path}") from e
    return digest.hexdigest()


def parse_int_list(value: str, option: str = "value") -> List[int]:
    """
    Parses '2,4,6' or '1-6' (or a mix, '1-3,6') into a list of ints.
    """
    result: List[int] = []
    for part in value.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = part.split("-", 1)
                result.extend(range(int(lo), int(hi) + 1))
            else:
                result.append(int(part))
        except ValueError as e:
            raise BadRequestError(f"Invalid {option}: {value!r}") from e
    if not result:
        raise BadRequestError(f"Empty {option}")
    return result


def read_jsonl(path: Path) -> Iterator[dict]:
    """Yields one JSON object per non-empty line."""
    try:
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as e:
                    raise StorageError(f"{path}:{line_no}: invalid JSON ({e.msg})") from e
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Input not found: {path}") from e


def dumps_jsonl(records: Iterable[Any]) -> str:
    """Serializes records to JSON lines with stable key order."""
    return "".join(
        json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records
    )


def atomic_write_bytes(path: Path, payload: bytes) -> None:
    """
    Writes a file through a temp file in the same directory and an atomic rename.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as e:
        logger.error("Failed writing %s: %s", path, e)
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise StorageError(f"Cannot write {path}: {e}") from e


def require_files(paths: Sequence[Path]) -> None:
    """Raises ResourceNotFoundError for the first missing path."""
    for path in paths:
        if not Path(path).exists():
            raise ResourceNotFoundError(f"Input not found: {path}")
