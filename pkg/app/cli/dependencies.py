import csv
import io
import json
import logging
import sys
from typing import Iterable, List

from pydantic import ValidationError

from app.core.errors import DomainError
from app.db.models import OutputFormat, RunConfig

logger = logging.getLogger(__name__)


def build_config(**fields) -> RunConfig:
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        problems = "; ".join(error["msg"] for error in e.errors())
        raise DomainError(f"Invalid run configuration: {problems}")


def render(records: List[dict], columns: Iterable[str], output_format: OutputFormat) -> str:
    if output_format == OutputFormat.CSV:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for record in records:
            writer.writerow({key: "" if value is None else value for key, value in record.items()})
        return buffer.getvalue()
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def render_object(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def emit(text: str, path: str = "-") -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise DomainError(f"Cannot write output file {path}: {e}")
    logger.info(f"Wrote {len(text)} bytes to {path}")
