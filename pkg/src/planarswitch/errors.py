"""Exception types shared across the package."""


class PlanarSwitchError(Exception):
    """Base class for all library errors."""


class NotHurwitzError(PlanarSwitchError):
    """Raised when an input matrix is not Hurwitz (trace < 0, det > 0)."""

    def __init__(self, which, trace, det):
        self.which = which
        self.trace = trace
        self.det = det
        super().__init__(
            f"{which} is not Hurwitz: trace={trace!r}, det={det!r}"
        )


class BothDiagonalizableError(PlanarSwitchError):
    """Both matrices are diagonalizable; this tool only handles the case
    where at least one matrix is nondiagonalizable.  The diagonalizable
    case is covered by earlier results and is out of scope here."""


class ShapeMismatchError(PlanarSwitchError):
    """Matrix does not match any supported closed-form exponential shape."""


class NotCollinearError(PlanarSwitchError):
    """Internal consistency failure: a point on the collinearity set does
    not satisfy Bx = alpha * Ax within tolerance."""


class InconsistentInvariantsError(PlanarSwitchError):
    """Internal consistency failure: invariants landed in a region that is
    provably unreachable for valid inputs."""


class PreconditionError(PlanarSwitchError):
    """An operation was called outside its stated precondition."""
