"""prlab: a desk-scale pseudorandomness laboratory.

Hard functions (GIP, RW, FFM and extractor-fortified variants),
randomness extractors, generator constructions, and an exhaustive
measurement engine for correlation, norms, statistical distance, and
fooling error.

Bit convention used everywhere: a length-n bit vector is an int whose
bit i is coordinate i; index 0 is the least significant bit.
"""

from . import corrlab, extractors, gf2, hardfn, models, prg, restrictions
from .errors import PrlabError

__all__ = [
    "corrlab",
    "extractors",
    "gf2",
    "hardfn",
    "models",
    "prg",
    "restrictions",
    "PrlabError",
]

__version__ = "0.1.0"
