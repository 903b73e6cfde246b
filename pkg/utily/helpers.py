from contextlib import contextmanager
from typing import Dict, Iterator, List, Optional, Sequence
import logging
import time

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Seeded generator for every randomized check"""
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


class Timer:
    """Wall-clock seconds of a block"""

    def __init__(self):
        self.seconds = 0.0

    @contextmanager
    def measure(self) -> Iterator["Timer"]:
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.seconds += time.perf_counter() - start


def format_table(rows: List[Dict], columns: Sequence[str]) -> str:
    """Render dict rows as a plain text table"""
    if not rows:
        return "(empty)"
    frame = pd.DataFrame(rows, columns=list(columns))
    return frame.to_string(index=False)


def profile_table(profiles: Dict[int, Dict[int, int]], top: int) -> str:
    """Dimensions per weight (rows) and total degree (columns)"""
    rows = []
    for weight in sorted(profiles):
        row = {"weight": weight}
        for degree in range(top + 1):
            row[f"H{degree}"] = profiles[weight].get(degree, 0)
        rows.append(row)
    return format_table(rows, ["weight"] + [f"H{n}" for n in range(top + 1)])
