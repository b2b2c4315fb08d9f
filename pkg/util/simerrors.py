"""
Errors raised by the simulator. Each one derives from a builtin so callers
can catch broadly (ValueError, ArithmeticError) or precisely.
"""

import typing


class DimensionError(ValueError):
    """Operands are not conformable"""


class StructureError(ValueError):
    """An operand lacks a required structure (e.g. diagonal)"""


class DegenerateInputError(ValueError):
    def __init__(self, message: str, index: typing.Optional[int] = None) -> None:
        ValueError.__init__(self, message)
        self.index = index


class EstimationSingularError(ArithmeticError):
    """
    A least-squares system is rank deficient. Carries the numerical rank found,
    the rank required, and the alternating-iteration index when raised inside
    an iterative receiver.
    """

    def __init__(
        self, rank: int, required: int, iteration: typing.Optional[int] = None
    ) -> None:
        self.rank = rank
        self.required = required
        self.iteration = iteration
        ArithmeticError.__init__(self, self.describe())

    def describe(self) -> str:
        message = f"rank {self.rank} < required {self.required}"
        if self.iteration is not None:
            message += f" at iteration {self.iteration}"
        return message

    def atIteration(self, iteration: int) -> "EstimationSingularError":
        return EstimationSingularError(self.rank, self.required, iteration)


class ConfigError(ValueError):
    def __init__(self, message: str, key: typing.Optional[str] = None) -> None:
        ValueError.__init__(self, message if key is None else f"{key}: {message}")
        self.key = key


class ResultsParseError(ValueError):
    def __init__(
        self,
        message: str,
        lineNumber: typing.Optional[int] = None,
        column: typing.Optional[str] = None,
    ) -> None:
        prefix = "" if lineNumber is None else f"line {lineNumber}: "
        ValueError.__init__(self, prefix + message)
        self.lineNumber = lineNumber
        self.column = column
