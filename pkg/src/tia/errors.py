"""Exception hierarchy shared by all tia modules."""


class TiaError(Exception):
    """Base class for all errors raised by this package."""


class NonFinite(TiaError):
    """Input coordinates contain NaN or infinity."""


class DegenerateElement(TiaError):
    """Tetrahedron volume is zero or below the degeneracy threshold."""


class CollinearPoints(TiaError):
    """Three points span no triangle, so no circumradius exists."""


class DegenerateProjection(TiaError):
    """Projected triangle is too flat or too narrow for a stable circumradius."""


class ParameterOutOfRange(TiaError):
    """A numeric parameter violates its documented range."""


class IndexOrderMismatch(TiaError):
    """Multi-index total order does not match the requested lattice degree."""


class MissingNode(TiaError):
    """Interpolation data omits one or more lattice points."""


class IllConditioned(TiaError):
    """Vertex matrix inversion failed; the element is numerically degenerate."""


class DegreeOverflow(TiaError):
    """Polynomial degree exceeds the supported bookkeeping cap."""


class UnsupportedOrder(TiaError):
    """Requested derivative order exceeds the supported cap."""


class InvalidPForKM(TiaError):
    """The Lebesgue exponent p is incompatible with the (k, m) pair."""


class ZeroDataSeminorm(TiaError):
    """Bound ratios are undefined because the reference seminorm vanishes."""
