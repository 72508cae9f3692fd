"""Exception types shared across modules.

``HypothesisFailure`` and friends map to CLI exit code 3, ``CheckFailed``
to exit code 2.
"""

from .linalg import DimensionMismatch


class TwistlabError(Exception):
    pass


class InputError(TwistlabError, ValueError):
    """Malformed or out-of-range input."""


class DegenerateFixedPoint(InputError):
    pass


class NotFiniteOrder(InputError):
    pass


class NotAComplex(InputError):
    pass


class RelationCheckFailed(InputError):
    pass


class InvalidComponent(InputError):
    pass


class NonSymmetricInput(InputError):
    pass


class DegenerateEndpoint(InputError):
    pass


class HypothesisFailure(InputError):
    def __init__(self, gate: str, detail: str = ""):
        self.gate = gate
        super().__init__(f"{gate}: {detail}" if detail else gate)


class EvenMiddleDegree(HypothesisFailure):
    def __init__(self, detail: str = "", constant_trace=None):
        self.constant_trace = constant_trace
        super().__init__("middle degree s is even", detail)


class CheckFailed(TwistlabError):
    pass


__all__ = [
    "DimensionMismatch",
    "TwistlabError",
    "InputError",
    "DegenerateFixedPoint",
    "NotFiniteOrder",
    "NotAComplex",
    "RelationCheckFailed",
    "InvalidComponent",
    "NonSymmetricInput",
    "DegenerateEndpoint",
    "HypothesisFailure",
    "EvenMiddleDegree",
    "CheckFailed",
]
