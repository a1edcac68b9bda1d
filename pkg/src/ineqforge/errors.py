"""Exception types shared across the package."""


class IneqForgeError(Exception):
    """Base class for all package errors."""


class TailMassTooLarge(IneqForgeError):
    """Truncated quadrature would drop more relative mass than allowed."""

    def __init__(self, estimate: float, threshold: float, msg: str = ""):
        self.estimate = estimate
        self.threshold = threshold
        super().__init__(
            msg or f"estimated tail mass {estimate:.3e} exceeds threshold {threshold:.3e}"
        )


class SingularOrigin(IneqForgeError):
    """Drift ratio of exp(a|x|^b) with b < 2 is singular at x = 0."""


class NoWitnessFound(IneqForgeError):
    """No candidate validated the drift condition on the search grid."""


class UnboundedBelow(IneqForgeError):
    """Tail monotonicity check failed; infimum cannot be certified."""


class XiDiverges(IneqForgeError):
    """A +inf sentinel appeared inside an integration range."""


class NotInvertible(IneqForgeError):
    """Inversion target lies below the recorded monotone range."""


class CasePremiseUnchecked(IneqForgeError):
    """A curvature/growth premise required by the case is missing."""


class SolverFailure(IneqForgeError):
    """Eigenvalue iteration did not converge."""


class ModeMismatch(IneqForgeError):
    """Absolute soundness mode requested for an unnormalized certificate."""
