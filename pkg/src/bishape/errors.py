"""Exception types shared across the library."""


class BishapeError(Exception):
    """Base class for all library errors."""


class ContextMismatchError(BishapeError, ValueError):
    """Operands belong to different field contexts."""


class DistinctnessError(BishapeError, ValueError):
    """A coordinate required to be distinct is repeated."""


class PreconditionError(BishapeError, ValueError):
    """An operation precondition (degree bound, basis shape, ...) is violated."""


class RankDeficiencyError(BishapeError, ValueError):
    """A matrix required to be nonsingular is singular."""


class ReshaperFailError(BishapeError, RuntimeError):
    """Reshaper precomputation failed at a specific descent step.

    Carries the step index and its (eta, delta) parameters so callers may
    retry with a slacker sequence.
    """

    def __init__(self, step: int, eta: int, delta: int):
        self.step = step
        self.eta = eta
        self.delta = delta
        super().__init__(
            f"no reshaper of the requested shape at step {step} "
            f"(eta={eta}, delta={delta})"
        )


class PackFormatError(BishapeError, ValueError):
    """A serialized pack or input file does not follow the expected grammar."""
