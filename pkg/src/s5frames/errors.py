"""Exception types raised by the geometry kernels."""


class S5FramesError(Exception):
    """Base class for all toolkit errors."""


class DegenerateImmersion(S5FramesError):
    """Chart Jacobian is rank-deficient at the requested point."""


class ZeroSecondFundamentalForm(S5FramesError):
    """B-aligned gauge requested at a totally geodesic point (S ~ 0)."""


class ChartBoundary(S5FramesError):
    """A finite-difference stencil left the chart domain."""


class InconsistentMinimality(S5FramesError):
    """minimal_hint was set but the tensor trace exceeds tolerance."""


class NotMinimal(S5FramesError):
    """Operation requires a traceless second fundamental form."""


class PoleExcluded(S5FramesError):
    """Fiber angle phi outside the valid band (delta, pi - delta)."""


class SingularMetric(S5FramesError):
    """Pullback metric is not positive definite (point off N_*)."""


class WrongSpectrum(S5FramesError):
    """Shape operator spectrum is not of the {lambda, -lambda, 0, 0} type."""


class StencilOutOfDomain(S5FramesError):
    """Derivative stencil around a fiber point left the valid region."""


class NonpositiveLambda(S5FramesError):
    """Connection scalars require lambda > 0."""


class UnknownSurface(S5FramesError, KeyError):
    """Catalog lookup failed."""
