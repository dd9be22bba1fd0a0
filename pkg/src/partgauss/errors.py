class InvalidInputError(ValueError):
    """Argument violates an operation's precondition."""


class CapabilityError(NotImplementedError):
    """Request lies outside what an evaluator supports (e.g. quadrature for k > 4)."""


class SamplerError(RuntimeError):
    """Rejection cap hit; only plausible with a broken random source."""
