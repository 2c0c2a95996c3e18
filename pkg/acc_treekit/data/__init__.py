# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Bundled sample corpus and coordination gold files."""

from pathlib import Path

DATA_DIR = Path(__file__).parent


def sample_path(name: str = "sample.mrg") -> Path:
    """Path of a bundled file: sample.mrg, gold_acc_our.txt or gold_acc_ptb.txt."""
    path = DATA_DIR / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r} in {DATA_DIR}")
    return path
