"""
Error hierarchy for the Bell-diagonal separability lab

Every error carries the CLI exit code it maps to.
"""

from typing import Optional

try:
    from ..config import ERROR_MESSAGES, EXIT_CODES
except ImportError:
    from config import ERROR_MESSAGES, EXIT_CODES


class BsaLabError(Exception):
    """Base class for all lab errors"""

    message_key = "invalid_input"
    exit_code = EXIT_CODES["invalid_input"]

    def __init__(self, detail: Optional[str] = None):
        base = ERROR_MESSAGES[self.message_key]
        self.detail = detail
        super().__init__(f"{base}: {detail}" if detail else base)


class NotHermitian(BsaLabError):
    message_key = "not_hermitian"


class NegativeEigenvalue(BsaLabError):
    message_key = "negative_eigenvalue"


class InvalidProbVec(BsaLabError):
    message_key = "invalid_prob_vec"


class Unphysical(BsaLabError):
    message_key = "unphysical"


class SeparableInput(BsaLabError):
    message_key = "separable_input"


class NotInSingletTetra(BsaLabError):
    message_key = "not_in_singlet_tetra"


class DegenerateVertex(BsaLabError):
    message_key = "degenerate_vertex"


class NotOnFace(BsaLabError):
    message_key = "not_on_face"


class NotDensityMatrix(BsaLabError):
    message_key = "not_density_matrix"


class DegeneratePair(BsaLabError):
    message_key = "degenerate_pair"


class ReconstructionMismatch(BsaLabError):
    message_key = "reconstruction_mismatch"


class RankNotThree(BsaLabError):
    message_key = "rank_not_three"


class VanishingNorm(BsaLabError):
    message_key = "vanishing_norm"


class InvalidFiltration(BsaLabError):
    message_key = "invalid_filtration"


class NonBellDiagonal(BsaLabError):
    message_key = "non_bell_diagonal"


class NonConvergence(BsaLabError):
    message_key = "nonconvergence"
    exit_code = EXIT_CODES["nonconvergence"]
