"""Exception types shared across the package."""


class BadParamsError(ValueError):
    """A constructor or CLI argument is out of its legal range."""


class SelfLoopError(ValueError):
    """Edge endpoints must be distinct."""


class SeedMismatchError(ValueError):
    """Two sketches built under different seeds (or universes) cannot be merged."""


class DuplicateEdgeError(ValueError):
    """Insert of an edge that is already present."""


class MissingEdgeError(KeyError):
    """Delete of an edge that is not present."""


class NonZeroDegreeError(ValueError):
    """Vertex removal requires the vertex to have no incident edges."""


class InactiveVertexError(KeyError):
    """Operation names a vertex that is not currently tracked."""


class NotForestEdgeError(ValueError):
    """Forest-edge operation applied to an edge outside the spanning forest."""


class MalformedUpdateError(ValueError):
    """A stream line could not be parsed or violates stream well-formedness."""
