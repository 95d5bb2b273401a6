"""Monte-Carlo estimate record used by every sampling operation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class McEstimate:
    """A Monte-Carlo mean with its standard error and seed provenance.

    stderr is the sample standard deviation divided by sqrt(samples);
    cap_hits counts samples that hit an iteration cap and were excluded
    or flagged by the producing operation.
    """

    mean: float
    stderr: float
    samples: int
    seed: int
    cap_hits: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("McEstimate needs at least one sample")

    @classmethod
    def from_values(cls, values, seed, cap_hits=0) -> "McEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        mean = float(values.mean())
        stderr = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(mean=mean, stderr=stderr, samples=n, seed=int(seed), cap_hits=int(cap_hits))

    @classmethod
    def from_fraction(cls, hits, samples, seed, cap_hits=0) -> "McEstimate":
        """Binomial fraction estimate with its binomial standard error."""
        p = hits / samples
        stderr = math.sqrt(max(p * (1.0 - p), 0.0) / samples)
        return cls(mean=float(p), stderr=float(stderr), samples=int(samples),
                   seed=int(seed), cap_hits=int(cap_hits))
