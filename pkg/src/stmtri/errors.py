"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class RegimeError(DomainError):
    """A mass ratio lies outside the unitary-window regime (m*, m**).

    Carries which bound was violated so callers can report it.
    """

    def __init__(self, m: float, bound_name: str, bound_value: float):
        self.m = m
        self.bound_name = bound_name
        self.bound_value = bound_value
        side = "below" if bound_name.endswith("*") and m < bound_value else "outside"
        super().__init__(
            f"mass ratio m={m!r} is {side} the admissible window: "
            f"violates {bound_name}={bound_value!r}"
        )


class IntegrandError(ValueError):
    """The integrand produced a non-finite value at a sampled abscissa."""


class TailDivergenceError(DomainError):
    """A semi-infinite integrand does not decay (growing tail samples)."""


class NonConvergedError(RuntimeError):
    """A numeric procedure exhausted its budget without reaching tolerance."""


class BracketError(NonConvergedError):
    """A root bracket could not be established on the search range."""


class RepresentationMismatchError(RuntimeError):
    """Two independent representations of the same quantity disagree.

    This signals an implementation bug, not a numerical fluke; it is raised
    rather than silently returning either value.
    """
