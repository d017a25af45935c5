"""Exception hierarchy.

Domain errors (exit code 2 from the CLI) signal that a mathematically
well-posed request cannot be carried out on the given data: an orbit runs
into a pole, a fundamental matrix has no invertible tail, and so on.
Schema errors (exit code 3) signal malformed input documents.
"""

from __future__ import annotations


class SkewDMLError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SkewDMLError):
    exit_code = 2


class SchemaError(SkewDMLError):
    exit_code = 3


class IndeterminateValue(DomainError):
    """Homogeneous evaluation produced 0/0."""


class PoleError(DomainError):
    """A rational function was evaluated at one of its poles."""


class NonSquare(DomainError):
    pass


class DegreeTooHigh(DomainError):
    pass


class DegreeOverflow(DomainError):
    """Symbolic composition would exceed the configured degree cap."""


class HitIndeterminacy(DomainError):
    """An orbit step landed on a pole that multiplies a nonzero coordinate."""

    def __init__(self, step: int, detail: str = ""):
        self.step = step
        msg = f"orbit enters the indeterminacy locus at step {step}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class CoefficientPole(DomainError):
    def __init__(self, n: int, i: int):
        self.n = n
        self.i = i
        super().__init__(f"coefficient h_{i} has a pole at g^{n}(alpha)")


class SingularTail(DomainError):
    pass


class OrbitFinite(DomainError):
    pass


class AnalyticityFailed(DomainError):
    pass


class NotIdempotentSystem(DomainError):
    pass


class ExactComputationTooLarge(DomainError):
    """Exact orbit data would exceed the configured size budget."""


class SchemaViolation(SchemaError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class MalformedRational(SchemaViolation):
    pass


class DimensionMismatch(SchemaViolation):
    pass
