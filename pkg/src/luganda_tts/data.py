"""Locating and reading the engine's TSV data files.

All tables are UTF-8 TSV; lines starting with "#" and blank lines are
comments.  The data directory resolves, in order: explicit argument, the
LUGANDA_TTS_DATA environment variable, the files bundled with the package.
"""
from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

ENV_DATA_DIR = "LUGANDA_TTS_DATA"


def default_data_dir() -> Path:
    env = os.environ.get(ENV_DATA_DIR)
    if env:
        return Path(env)
    return Path(str(resources.files("luganda_tts") / "data"))


def resolve_data_dir(data_dir: str | os.PathLike | None = None) -> Path:
    if data_dir is not None:
        return Path(data_dir)
    return default_data_dir()


def read_tsv(path: str | os.PathLike) -> list[list[str]]:
    """Read a TSV file into rows of column strings, skipping comments."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            rows.append(line.split("\t"))
    return rows
