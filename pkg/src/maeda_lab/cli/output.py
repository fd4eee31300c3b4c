"""JSON and CSV emission for command results.

JSON carries exact rationals as {num, den} decimal strings inside a versioned
envelope; CSV carries float mirrors only.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from ..schemas import LabModel

SCHEMA_VERSION = 1

CSV_COMMENT = "# floats are mirrors of exact rationals and are not guaranteed; use --format json for exact values"


class CommandResult(LabModel):
    """What a subcommand hands back to ``run``."""

    command: str
    payload: dict
    rows: list[dict[str, str]]
    guaranteed: bool = True
    conclusive: bool = True


def render_json(result: CommandResult) -> str:
    document = {
        "schema": SCHEMA_VERSION,
        "command": result.command,
        "guaranteed": result.guaranteed,
        "result": result.payload,
    }
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def render_csv(result: CommandResult) -> str:
    buffer = io.StringIO()
    buffer.write(CSV_COMMENT + "\n")
    if result.rows:
        writer = csv.DictWriter(buffer, fieldnames=list(result.rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(result.rows)
    return buffer.getvalue()


def emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def error_line(code: str, message: str) -> str:
    return json.dumps({"error": code, "message": message}, sort_keys=True)
