"""Univariate samples that remember where they came from."""
from dataclasses import dataclass, replace

import numpy as np


@dataclass
class Sample:
    """Cleaned numeric values plus provenance.

    ``source`` names the dataset, ``steps`` lists the preprocessing applied
    in order, and ``band`` is set for per-activity-band subsamples.
    Anything accepting a sample also accepts a plain array.
    """

    values: np.ndarray
    source: str = ""
    steps: tuple = ()
    band: str = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        self.steps = tuple(self.steps)

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def derive(self, values, step, **changes):
        """New sample with ``step`` appended to the provenance."""
        return replace(self, values=values, steps=self.steps + (step,), **changes)

    def provenance(self):
        return {"source": self.source, "steps": list(self.steps), "band": self.band, "n": len(self)}
