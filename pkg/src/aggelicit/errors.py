"""Exception hierarchy."""


class AggelicitError(Exception):
    """Base class for every domain error raised by the package."""


class InstanceError(AggelicitError):
    """Violation of the standing instance assumptions.  Indices stored on the
    exceptions are 0-based; messages are 1-based."""


class DimensionMismatch(InstanceError):
    pass


class ZeroAlphaRow(InstanceError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(
            f"feature-weight row {row + 1} is all zero; every feature must depend on some output dimension"
        )


class NegativeAlphaEntry(InstanceError):
    def __init__(self, row: int, col: int):
        self.row, self.col = row, col
        super().__init__(f"feature weight in row {row + 1}, column {col + 1} is negative")


class DimensionForcedZero(InstanceError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(
            f"no feasible output has coordinate {index + 1} positive (every output dimension must be attainable)"
        )


class NegativeEntry(AggelicitError):
    pass


class InfeasibleInput(AggelicitError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"aggregation input {k + 1} violates the conic constraints")


class ZeroVector(AggelicitError):
    pass


class EmptyList(AggelicitError):
    pass


class InvalidReward(AggelicitError):
    pass


class DegenerateCertificate(AggelicitError):
    pass


class NoPositiveCoordinate(AggelicitError):
    pass


class ClosedLoopFailure(AggelicitError):
    """A constructed feature map failed re-verification.  Always a bug."""


class GenerationExhausted(AggelicitError):
    pass


class MissingAggregation(AggelicitError):
    pass
