"""Exception hierarchy shared by every stage of the pipeline."""


class SpectralSetError(Exception):
    """Base class for all errors raised by spectralset."""


class InputError(SpectralSetError, ValueError):
    """Malformed or non-finite input."""


class ContractError(SpectralSetError):
    """A precondition of an operation does not hold."""


class DomainError(SpectralSetError, ValueError):
    """Inputs are individually valid but mutually inconsistent."""


class SingularityError(SpectralSetError):
    """sigma*I - A is (numerically) singular."""

    def __init__(self, sigma, cond=None):
        self.sigma = complex(sigma)
        self.cond = cond
        msg = f"sigma = {self.sigma!r} is too close to the spectrum"
        if cond is not None:
            msg += f" (condition number {cond:.3e})"
        super().__init__(msg)


class NonSmoothBoundary(SpectralSetError):
    """h + h'' fails to stay strictly positive: corners, flat facets or empty interior."""

    def __init__(self, theta, value, hint=""):
        self.theta = float(theta)
        self.value = float(value)
        msg = (f"boundary is not smooth near theta = {self.theta:.6f} "
               f"(h + h'' = {self.value:.3e})")
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)


class InternalConsistencyError(SpectralSetError):
    """A computed quantity violates an identity it must satisfy (quadrature or optimizer failure)."""


class StageError(SpectralSetError):
    """Wraps an upstream failure with the name of the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
