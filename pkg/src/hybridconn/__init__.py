"""Dynamic graph connectivity with space-adaptive sketches.

The package stacks four layers: linear sketch primitives (``sketch_core``,
``iblt``), two dynamic-connectivity engines built on them (``cutset`` for
the sketch-based tiers, ``lossless`` for the exact structure), a one-pass
streaming variant (``streaming``), and the density-routed combination of
the two engines (``hybrid``).  ``streams``, ``oracle``, ``runner``, and
``cli`` form the benchmark harness.
"""

from .cutset import SketchGraph
from .errors import (BadParamsError, DuplicateEdgeError, InactiveVertexError,
                     MalformedUpdateError, MissingEdgeError,
                     NonZeroDegreeError, NotForestEdgeError, SeedMismatchError,
                     SelfLoopError)
from .hybrid import HybridGraph
from .iblt import NeighborIblt
from .lossless import LosslessGraph
from .sketch_core import SketchColumn, SketchMatrix, SketchSeed
from .streaming import StreamGraph

__all__ = [
    "BadParamsError",
    "DuplicateEdgeError",
    "HybridGraph",
    "InactiveVertexError",
    "LosslessGraph",
    "MalformedUpdateError",
    "MissingEdgeError",
    "NeighborIblt",
    "NonZeroDegreeError",
    "NotForestEdgeError",
    "SeedMismatchError",
    "SelfLoopError",
    "SketchColumn",
    "SketchGraph",
    "SketchMatrix",
    "SketchSeed",
    "StreamGraph",
]

__version__ = "0.1.0"
