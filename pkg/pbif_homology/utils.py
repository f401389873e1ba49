import logging
import sys
from typing import List, Tuple

import numpy as np

from .config import LOG_LEVEL

logger = logging.getLogger("pbif_homology")
if not logger.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter("[%(asctime)s] %(message)s", datefmt="%H:%M:%S"))
    logger.addHandler(_handler)
    logger.setLevel(LOG_LEVEL)
    logger.propagate = False


def log(message: str, level: int = logging.INFO):
    """Timestamped package logger."""
    logger.log(level, message)


def parse_range(text: str) -> Tuple[float, float, int]:
    """Parse 'start:stop:count' into a linspace triple."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:count, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"range count must be >= 1, got {count}")
    return start, stop, count


def sweep_values(start: float, stop: float, count: int) -> np.ndarray:
    return np.linspace(start, stop, count)


def level_grid(num_levels: int) -> np.ndarray:
    """Uniform levels in (0, 1]; the last level is exactly 1."""
    if num_levels < 1:
        raise ValueError(f"num_levels must be >= 1, got {num_levels}")
    return np.arange(1, num_levels + 1) / num_levels


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed for sweep column `index`, stable run to run."""
    state = np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def window_from_ranges(x_range: str, y_range: str) -> Tuple[float, float, float, float]:
    x = [float(v) for v in x_range.split(":")]
    y = [float(v) for v in y_range.split(":")]
    if len(x) != 2 or len(y) != 2:
        raise ValueError("window ranges must look like min:max")
    return x[0], x[1], y[0], y[1]


def split_params(items: List[str]) -> dict:
    """['k=v', ...] -> {'k': float(v)}"""
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"expected KEY=VALUE, got {item!r}")
        params[key.strip()] = float(value)
    return params
