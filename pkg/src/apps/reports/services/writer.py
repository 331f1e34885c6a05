"""src/apps/reports/services/writer.py."""

import contextlib
import csv
import io
import json
import logging
import os
import shutil
import tempfile
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional

from src.apps.reports.schemas import Provenance, Report, ReportTable, RunConfig
from src.core.config import TOOLKIT_VERSION
from src.core.enum import ReportFormat
from src.core.exceptions import StorageError
from src.core.utils import input_digest, require_files

logger = logging.getLogger(__name__)

REPORT_JSON = "report.json"


class WarningCollector(logging.Handler):
    """
    Collects warning messages of the toolkit loggers while a command runs.
    """

    def __init__(self, logger_name: str = "src"):
        super().__init__(level=logging.WARNING)
        self.logger_name = logger_name
        self.messages: List[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.messages.append(record.getMessage())

    def __enter__(self) -> "WarningCollector":
        logging.getLogger(self.logger_name).addHandler(self)
        return self

    def __exit__(self, *exc_info) -> None:
        logging.getLogger(self.logger_name).removeHandler(self)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, dict)):
        return json.dumps(value, ensure_ascii=False, sort_keys=True)
    return str(value)


def render_csv(table: ReportTable) -> bytes:
    """Header plus one line per row, None as an empty cell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(row[c]) for c in table.columns])
    return buf.getvalue().encode("utf-8")


class ReportWriter:
    """
    Builds reports with provenance and writes them without partial outputs.
    """

    def build_report(
        self,
        run: RunConfig,
        tables: Iterable[ReportTable],
        warnings: Optional[List[str]] = None,
    ) -> Report:
        """Digests every referenced input; a missing one is an error."""
        require_files(run.referenced_paths)
        digests = {str(p): input_digest(p) for p in run.referenced_paths}
        return Report(
            command=run.command,
            options=json.loads(json.dumps(run.options, default=str)),
            tables=list(tables),
            provenance=Provenance(toolkit_version=TOOLKIT_VERSION, input_digests=digests, seeds=run.seeds),
            warnings=list(warnings or []),
        )

    @staticmethod
    def render(report: Report, formats: Iterable[ReportFormat]) -> Dict[str, bytes]:
        """File name to payload, computed before anything touches the disk."""
        payloads: Dict[str, bytes] = {}
        formats = {ReportFormat(f) for f in formats}
        if ReportFormat.CSV in formats:
            for table in report.tables:
                payloads[f"{table.name}.csv"] = render_csv(table)
        if ReportFormat.JSON in formats:
            payloads[REPORT_JSON] = (report.model_dump_json(indent=2) + "\n").encode("utf-8")
        return payloads

    @staticmethod
    @contextlib.contextmanager
    def staging_area(output_dir: Path) -> Iterator[Path]:
        """
        A temp directory inside output_dir. Command artifacts written here are
        moved into place together with the report by write_report and dropped
        if anything fails first.
        """
        try:
            output_dir.mkdir(parents=True, exist_ok=True)
            staging = Path(tempfile.mkdtemp(dir=output_dir, prefix=".staging-"))
        except OSError as e:
            raise StorageError(f"Cannot create {output_dir}: {e}") from e
        try:
            yield staging
        finally:
            shutil.rmtree(staging, ignore_errors=True)

    def write_report(
        self,
        report: Report,
        output_dir: Path,
        formats: Iterable[ReportFormat],
        staging: Optional[Path] = None,
    ) -> List[Path]:
        """
        Renders every payload into the staging area, then renames the whole
        area (report and staged artifacts) into output_dir. A failure leaves
        no new files behind.
        """
        payloads = self.render(report, formats)
        if staging is None:
            with self.staging_area(output_dir) as area:
                return self._commit(payloads, area, output_dir)
        return self._commit(payloads, staging, output_dir)

    @staticmethod
    def _commit(payloads: Dict[str, bytes], staging: Path, output_dir: Path) -> List[Path]:
        written: List[Path] = []
        try:
            for name, payload in payloads.items():
                (staging / name).write_bytes(payload)
            for name in sorted(p.name for p in staging.iterdir()):
                target = output_dir / name
                os.replace(staging / name, target)
                written.append(target)
        except OSError as e:
            logger.error("Writing report to %s failed: %s", output_dir, e)
            for path in written:
                path.unlink(missing_ok=True)
            raise StorageError(f"Cannot write report to {output_dir}: {e}") from e
        logger.info("Wrote %s to %s", ", ".join(p.name for p in written), output_dir)
        return written

