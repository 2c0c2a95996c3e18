# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Atomic file output for trees and JSON reports."""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable

logger = logging.getLogger(__name__)


def write_text_atomic(path: str | Path, text: str) -> Path:
    """Writes ``text`` to a temporary sibling file, then renames it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug("wrote %s", path)
    return path


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=str) + "\n"


def write_json(path: str | Path, payload: Any) -> Path:
    return write_text_atomic(path, dumps_json(payload))


def dumps_jsonl(records: Iterable[dict[str, Any]]) -> str:
    return "".join(json.dumps(record, default=str) + "\n" for record in records)


def write_jsonl(path: str | Path, records: Iterable[dict[str, Any]]) -> Path:
    return write_text_atomic(path, dumps_jsonl(records))
