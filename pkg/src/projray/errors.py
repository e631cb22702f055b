"""Exception types shared across the package.

Every precondition failure carries a short machine-readable ``code`` and a
``context`` dict (usually the offending residual) so the CLI can emit a
structured error object.
"""

from __future__ import annotations


class ProjrayError(ValueError):
    code = "error"

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "context": self.context}


class DimensionMismatch(ProjrayError):
    code = "dimension_mismatch"


class NotHermitian(ProjrayError):
    code = "not_hermitian"


class NotUnitary(ProjrayError):
    code = "not_unitary"


class NormTooLarge(ProjrayError):
    code = "norm_too_large"


class ZeroVector(ProjrayError):
    code = "zero_vector"


class OrthogonalRays(ProjrayError):
    code = "orthogonal_rays"


class NotTangent(ProjrayError):
    code = "not_tangent"


class OutsideSectionDomain(ProjrayError):
    code = "outside_section_domain"


class NoWitnessFound(ProjrayError):
    """Raised when the null space yields no rank-two witness.

    ``certificate`` is a nonzero hermitian matrix annihilated by every
    frame functional; it still proves that the rank criterion fails.
    """

    code = "certificate_without_rank_one_witness"

    def __init__(self, message: str, certificate=None, **context):
        super().__init__(message, **context)
        self.certificate = certificate


class NotInvariant(ProjrayError):
    code = "algebra_not_invariant"


class NotPositiveEnergy(ProjrayError):
    code = "not_positive_energy"


class InvalidAlgebra(ProjrayError):
    code = "invalid_algebra"


class InvalidRepresentation(ProjrayError):
    code = "invalid_representation"
