"""Error taxonomy shared across the package.

Every failure mode that callers are expected to handle gets its own type;
generic ValueError/TypeError are reserved for programming errors.
"""


class NCSpheresError(Exception):
    """Base class for all package errors."""


class MalformedNumber(NCSpheresError):
    """A numeric literal could not be parsed."""


class ZeroDenominator(NCSpheresError):
    """A rational literal had denominator zero."""


class NotAPerfectSquare(NCSpheresError):
    """Exact square root requested of a non-square rational."""


class NegativeInput(NCSpheresError):
    """Exact square root requested of a negative rational."""


class ParamsNotOnSphere(NCSpheresError):
    """Deformation parameters do not satisfy (u0)^2 + (u1)^2 + (u2)^2 = 1."""


class CommutativityViolated(NCSpheresError):
    """A matrix family that must commute element-wise does not."""


class NormalizationViolated(NCSpheresError):
    """A sum-of-tensors normalization identity fails."""


class NotCentral(NCSpheresError):
    """An element assumed central fails to commute with a generator."""


class DegreeOverflow(NCSpheresError):
    """A computation exceeded the configured total-degree cap."""


class IrrationalEigenvalue(NCSpheresError):
    """Exact diagonalization hit a square root that is not rational."""


class NotUnitaryEnough(NCSpheresError):
    """A matrix fails its unitarity check beyond tolerance."""


class DegreeZero(NCSpheresError):
    """A boundary operator was applied below its minimum chain degree."""


class InvalidSpec(NCSpheresError):
    """A run request (CLI or library) is malformed."""


class TaskFailure(NCSpheresError):
    """A pipeline task failed; carries the failing task name and detail."""

    def __init__(self, task: str, detail: str = ""):
        self.task = task
        self.detail = detail
        super().__init__(f"task {task!r} failed: {detail}" if detail else f"task {task!r} failed")
