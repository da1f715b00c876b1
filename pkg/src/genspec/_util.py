"""Shared plumbing: seeded RNG streams and atomic file output."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator keyed by (seed, *key).

    Streams are value-passed and derived from the key alone, so parallel
    schedules cannot change results.
    """
    return np.random.default_rng(np.random.SeedSequence((int(seed), *map(int, key))))


def child_seed(seed: int, *key: int) -> int:
    """Stable integer sub-seed for (seed, *key)."""
    ss = np.random.SeedSequence((int(seed), *map(int, key)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write text via a temp file + rename; readers never see partial files."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
