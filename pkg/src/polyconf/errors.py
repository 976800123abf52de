"""Exception hierarchy shared by all modules."""


class PolyconfError(Exception):
    """Base class for every error raised by the library."""


class DegenerateError(PolyconfError):
    """A geometric primitive hit a degenerate input (parallel meet, coincident join, ...)."""


class ConstructionError(PolyconfError):
    """A construction program failed at a specific step."""

    def __init__(self, step_index, step, reason):
        self.step_index = step_index
        self.step = step
        self.reason = reason
        super().__init__(f"step {step_index} ({step}): {reason}")


class ClosureError(PolyconfError):
    """No sign-change bracket was found for a closure constraint."""


class GroupError(PolyconfError):
    """Invalid group input: not a subgroup, not semi-regular, missing isomorphism, ..."""


class MaterializationError(GroupError):
    """A permutation group grew past the element materialization bound."""


class FormatError(PolyconfError):
    """A text file could not be parsed."""


class LabelError(PolyconfError):
    """Realization labels do not match the expected incidence structure."""
