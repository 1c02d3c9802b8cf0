"""Exception hierarchy shared across the package."""


class GaborBoostError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GaborBoostError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(GaborBoostError):
    """A request exceeds what the data can supply (e.g. too few pairs)."""


class PgmFormatError(GaborBoostError, ValueError):
    """Malformed PGM file; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class SelectionExhaustedError(GaborBoostError):
    """No admissible weak classifier remains (exclusion or redundancy filter)."""

    def __init__(self, message: str, round_index: int | None = None):
        super().__init__(message)
        self.round_index = round_index


class DegenerateWeightsError(GaborBoostError):
    """A sampled weight vector summed to zero and cannot be normalized."""
