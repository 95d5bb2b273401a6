"""quadstab: a numerical laboratory for the timescale at which statistical
stability breaks down in the quadratic family."""

__version__ = "0.1.0"

from .family import (
    UnimodalFamily,
    OrbitTrace,
    TransversalityReport,
    raw_quadratic,
    normalized_quadratic,
    custom_family,
    evaluate,
    iterate_orbit,
    transversality_sum,
)
from .estimates import McEstimate

__all__ = [
    "UnimodalFamily",
    "OrbitTrace",
    "TransversalityReport",
    "raw_quadratic",
    "normalized_quadratic",
    "custom_family",
    "evaluate",
    "iterate_orbit",
    "transversality_sum",
    "McEstimate",
    "__version__",
]
