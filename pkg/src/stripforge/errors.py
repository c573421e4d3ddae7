"""Exception hierarchy.

Domain/guard failures raise subclasses of :class:`StripforgeError`; the CLI
maps these to exit code 3. Malformed input files raise ordinary ValueError
(exit 2 territory).
"""


class StripforgeError(Exception):
    """Base class for domain and guard errors."""


class NonPositiveCurvature(StripforgeError):
    """Some kappa[i] <= 0; the curve is not a regular Frenet curve."""


class NonOrthonormalInitialFrame(StripforgeError):
    """Initial triad fails the orthonormality / right-handedness check."""


class GridTooSmall(StripforgeError):
    """Too few nodes for the requested stencil width."""


class MissingJets(StripforgeError):
    """Operation needs derivative jets that the profile does not carry."""


class NonPositiveSpeed(StripforgeError):
    """Speed v(t) <= 0 somewhere; arclength map would not be monotone."""


class MultiplierMismatch(StripforgeError):
    """Elastica Lagrange multiplier incompatible with the requested build."""


class LambdaHasZeros(StripforgeError):
    """Geodesic curvature crosses zero; momentum construction undefined."""


class LambdaConstant(StripforgeError):
    """Constant geodesic curvature: the run is a helix, use build_helix."""


class LambdaNotConstant(StripforgeError):
    """Operation requires constant (nonzero) modified torsion."""


class WidthExceedsRegression(StripforgeError):
    """Strip half-width reaches the edge of regression (1 + u*lambda' <= 0)."""

    def __init__(self, width: float, bound: float):
        self.width = width
        self.bound = bound
        super().__init__(
            f"half-width {width:g} exceeds the edge-of-regression bound {bound:g}"
        )


class DomainViolation(StripforgeError):
    """Radicand of the reduced functional is non-positive at some node."""


class NonPositiveKappa(StripforgeError):
    """Prescribed curvature must be positive at every node."""
