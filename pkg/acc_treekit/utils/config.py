# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Environment-driven settings and logging setup."""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from acc_treekit.constants import env_keys

LOG_FORMAT = "[%(asctime)s] %(levelname)s (%(funcName)s) \t [%(pathname)s:%(lineno)d] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


@dataclass(frozen=True)
class Settings:
    color: bool | None
    jobs: int
    log_level: str
    ptb_dir: str | None

    @classmethod
    def from_env(cls, dotenv: bool = True) -> "Settings":
        """Reads ACC_TREEKIT_* variables, after loading a ``.env`` file if any."""
        if dotenv:
            load_dotenv()
        color = os.getenv(env_keys["color"])
        return cls(
            # None lets click decide from the terminal.
            color=None if color is None else color.strip() not in ("0", "false", "no"),
            jobs=int(os.getenv(env_keys["jobs"], "1")),
            log_level=os.getenv(env_keys["log_level"], "WARNING").upper(),
            ptb_dir=os.getenv(env_keys["ptb_dir"]) or None,
        )


def configure_logging(level: str = "WARNING") -> None:
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT, force=True)
