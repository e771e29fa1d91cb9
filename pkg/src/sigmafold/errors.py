"""Exception and warning types shared across the package."""


class SigmafoldError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SigmafoldError, ValueError):
    """A numeric argument lies outside its legal interval."""


class ForbiddenFacetError(SigmafoldError):
    """A facet of type (1,2) or (3,4) was supplied."""


class DisconnectedError(SigmafoldError):
    """The facet set does not form a connected complex."""


class BadLatticeError(SigmafoldError):
    """Period generators are linearly dependent over the rationals."""


class DuplicateFacetError(SigmafoldError):
    """The facet is already present in the complex."""


class NonManifoldEdgeError(SigmafoldError):
    """Adding the facet would put three facets on one edge."""


class NotAdjacentError(SigmafoldError):
    """The facet shares no edge with the complex."""


class NotBoundaryEdgeError(SigmafoldError):
    """The edge has incidence 2 and cannot be extended across."""


class NotManifoldError(SigmafoldError):
    """A vertex link is not a single cycle or path."""


class BoundaryVertexError(SigmafoldError):
    """The vertex lies on the boundary; no closed facet cycle exists."""


class UnrecognizedVertexError(SigmafoldError):
    """A vertex signature does not match any catalog entry."""


class NotClosedError(SigmafoldError):
    """The complex has boundary edges modulo the given lattice."""


class NotSublatticeError(SigmafoldError):
    """The given generators do not lie in the period lattice."""


class EdgeUnmatchedError(SigmafoldError):
    """A mesh edge vector matches no star vector within tolerance."""


class NonGenericError(SigmafoldError):
    """Vertex labeling hit a conflict: a closed loop is not generically closed."""

    def __init__(self, message, loop=None):
        super().__init__(message)
        self.loop = loop or []


class NonParallelogramFaceError(SigmafoldError):
    """A mesh face fails the parallelogram closure test."""


class DegenerateQuadError(SigmafoldError):
    """A quad has near-zero area (collapse endpoint state)."""


class InvalidWordError(SigmafoldError):
    """A gluing word contains letters other than L and R, or is empty."""


class OverlappingCellsError(SigmafoldError):
    """Two solid cells of a tiling have intersecting interiors."""


class ParseError(SigmafoldError):
    """A document could not be parsed; message carries position and reason."""


class VersionMismatchError(SigmafoldError):
    """The document declares an unsupported format version."""


class DuplicateFacetWarning(UserWarning):
    """Duplicate facets were dropped while building a complex."""


class RealizationAsymmetryWarning(UserWarning):
    """Star radii break a congruence the complex was constructed to have."""
