"""Semantic exception hierarchy shared by all modules."""


class HardySplitError(Exception):
    """Base class for every error raised by this package."""


class PoleAtMinusOne(HardySplitError):
    """The disc-to-half-plane map is evaluated at its pole w = -1."""


class PoleAtMinusI(HardySplitError):
    """The half-plane-to-disc map is evaluated at its pole z = -i."""


class NonDecayingInput(HardySplitError):
    """A line function with a nonzero declared limit at infinity was pulled back."""


class EvalAtPole(HardySplitError):
    """A rational function was evaluated at one of its genuine poles."""


class NoConvergence(HardySplitError):
    """Adaptive quadrature failed to meet its tolerance within the panel budget."""


class NonIntegrableSingularity(HardySplitError):
    """A declared singularity has p * order >= 1 and cannot be integrated."""


class DegreeOverflow(HardySplitError):
    """Polynomial approximation would need a degree beyond the configured cap."""


class ScheduleStall(HardySplitError):
    """The atom-sequence residual failed to halve over three degree doublings."""


class UnboundedRatio(HardySplitError):
    """The disc ratio h(w)/(1+w)^(N+1) blows up near w = -1; N is too large."""


class BoundNotMet(HardySplitError):
    """No split parameter satisfied the averaging bound; refine the quadrature."""


class NotInLp(HardySplitError):
    """The input fails the pole-structure L^p membership conditions."""


class OnRealAxis(HardySplitError):
    """An interior-only evaluation was requested on the real axis."""


class WindowTooSmall(HardySplitError):
    """Samples have not decayed at the spatial window edges; enlarge L."""


class BoundViolated(HardySplitError):
    """The subharmonic pointwise bound failed at some interior sample."""
