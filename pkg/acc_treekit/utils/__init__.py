# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Utilities for acc_treekit."""

from .config import Settings, configure_logging
from .parallel import parallel_map
from .reports import dumps_json, dumps_jsonl, write_json, write_jsonl, write_text_atomic

__all__ = [
    "Settings",
    "configure_logging",
    "parallel_map",
    "dumps_json",
    "dumps_jsonl",
    "write_json",
    "write_jsonl",
    "write_text_atomic",
]
