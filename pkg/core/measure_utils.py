"""
Entanglement measures: Wootters concurrence, von Neumann relative entropy and
the closest separable Bell-diagonal state
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

try:
    from ..config import MATRIX_CONFIG, TOLERANCES
    from ..logger import log_debug, log_warning
    from .bell_utils import BDState, BELL_MATRIX, canonicalize
    from .exceptions import DegenerateVertex, NotDensityMatrix, SeparableInput
    from .matrix_utils import PAULI_Y, dagger, herm_eigen, mat_log_psd, support_projector, tensor
    from .validation_utils import validate_density_matrix
except ImportError:
    from config import MATRIX_CONFIG, TOLERANCES
    from logger import log_debug, log_warning
    from core.bell_utils import BDState, BELL_MATRIX, canonicalize
    from core.exceptions import DegenerateVertex, NotDensityMatrix, SeparableInput
    from core.matrix_utils import PAULI_Y, dagger, herm_eigen, mat_log_psd, support_projector, tensor
    from core.validation_utils import validate_density_matrix

SPIN_FLIP = tensor(PAULI_Y, PAULI_Y)
LN2 = float(np.log(2.0))


@dataclass(frozen=True, eq=False)
class ConcurrenceResult:
    value: float
    sqrt_eigs: np.ndarray

    def to_json(self) -> Dict:
        return {"value": float(self.value), "sqrt_eigs": [float(x) for x in self.sqrt_eigs]}


@dataclass(frozen=True)
class RelEntropyResult:
    """S(ρ‖σ) in nats; value is +inf when support(ρ) ⊄ support(σ)"""

    value: float
    support_ok: bool

    def to_json(self, bits: bool = False) -> Dict:
        value = to_bits(self.value) if bits else self.value
        return {"value": float(value), "support_ok": self.support_ok, "unit": "bits" if bits else "nats"}


def _require_density(m: Sequence, name: str = "rho") -> np.ndarray:
    is_valid, error_msg = validate_density_matrix(m)
    if not is_valid:
        raise NotDensityMatrix(f"{name}: {error_msg}")
    arr = np.asarray(m, dtype=complex)
    return 0.5 * (arr + dagger(arr))


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)"""
    return SPIN_FLIP @ np.conj(rho) @ SPIN_FLIP


def wootters_concurrence(rho: Sequence) -> ConcurrenceResult:
    """
    Wootters concurrence of a two-qubit state

    With ρ = W W† the square roots of the eigenvalues of ρρ̃ are the singular
    values of τ = Wᵀ(σ_y⊗σ_y)W. Eigenvalues of ρ below concurrence_cut·max are
    dropped from W, so a pure state gives |⟨ψ|σ_y⊗σ_y|ψ*⟩| exactly.

    Raises:
        NotDensityMatrix: if rho fails validation
    """
    arr = _require_density(rho)
    eig = herm_eigen(arr)
    w = eig.eigenvalues
    keep = w > MATRIX_CONFIG["concurrence_cut"] * float(np.max(w))
    factor = eig.eigenvectors[:, keep] * np.sqrt(w[keep])
    tau = factor.T @ SPIN_FLIP @ factor
    sqrt_eigs = np.zeros(4)
    sqrt_eigs[:int(np.sum(keep))] = np.linalg.svd(tau, compute_uv=False)
    value = max(0.0, float(sqrt_eigs[0] - np.sum(sqrt_eigs[1:])))
    return ConcurrenceResult(value=min(value, 1.0), sqrt_eigs=sqrt_eigs)


def concurrence_bd(s: BDState) -> float:
    """max(0, 2·max p_i − 1)"""
    return max(0.0, 2.0 * float(np.max(s.p)) - 1.0)


def relative_entropy_bd(p: Sequence[float], q: Sequence[float]) -> RelEntropyResult:
    """Σ p_i ln(p_i/q_i) with 0·ln 0 = 0"""
    p_arr = np.asarray(p, dtype=float)
    q_arr = np.asarray(q, dtype=float)
    rank_tol = MATRIX_CONFIG["rank_tol"]
    live = p_arr > rank_tol * float(np.max(p_arr))
    if np.any(q_arr[live] <= rank_tol * float(np.max(q_arr))):
        return RelEntropyResult(value=float("inf"), support_ok=False)
    value = float(np.sum(p_arr[live] * np.log(p_arr[live] / q_arr[live])))
    return RelEntropyResult(value=value, support_ok=True)


def _bell_weights(m: np.ndarray) -> Optional[np.ndarray]:
    in_bell = dagger(BELL_MATRIX) @ m @ BELL_MATRIX
    off = in_bell - np.diag(np.diag(in_bell))
    if float(np.max(np.abs(off))) >= TOLERANCES["bell_offdiag"]:
        return None
    return np.clip(np.real(np.diag(in_bell)), 0.0, None)


def relative_entropy(rho: Sequence, sigma: Sequence, fast_path: bool = True) -> RelEntropyResult:
    """
    Von Neumann relative entropy S(ρ‖σ) = tr(ρ ln ρ) − tr(ρ ln σ), natural log

    Args:
        rho: density matrix
        sigma: density matrix
        fast_path: use Bell weights when both inputs are Bell-diagonal

    Returns:
        RelEntropyResult; value = +inf with support_ok False when the support
        of rho is not contained in the support of sigma

    Raises:
        NotDensityMatrix: if either input fails validation
    """
    r = _require_density(rho, "rho")
    s = _require_density(sigma, "sigma")

    if fast_path:
        p, q = _bell_weights(r), _bell_weights(s)
        if p is not None and q is not None:
            log_debug("Relative entropy via Bell weights")
            return relative_entropy_bd(p, q)

    kernel = np.eye(4) - support_projector(s)
    leak = float(np.real(np.trace(kernel @ r)))
    if leak > MATRIX_CONFIG["rank_tol"]:
        log_debug(f"Support mismatch: tr(P_ker(σ) ρ) = {leak:.3e}")
        return RelEntropyResult(value=float("inf"), support_ok=False)

    value = float(np.real(np.trace(r @ mat_log_psd(r)) - np.trace(r @ mat_log_psd(s))))
    return RelEntropyResult(value=value, support_ok=True)


def closest_separable_bd(s: BDState, strict: bool = False) -> BDState:
    """
    Separable BD state minimizing S(ρ‖σ): q_i = p_i/(2(1 − p_4)) in the singlet frame

    Args:
        s: Bell-diagonal state
        strict: raise SeparableInput for separable s instead of returning s

    Raises:
        SeparableInput: separable input with strict=True
        DegenerateVertex: pure Bell input (p_4 = 1)
    """
    if s.separable:
        if strict:
            raise SeparableInput("state is already separable")
        log_warning("Closest separable state requested for a separable input; returning it unchanged")
        return s

    canonical, frame = canonicalize(s)
    p = canonical.p
    rest = 1.0 - p[3]
    if rest <= TOLERANCES["degenerate_vertex"]:
        raise DegenerateVertex("p4 = 1, the minimizer is not unique")
    q = np.array([p[0] / (2.0 * rest), p[1] / (2.0 * rest), p[2] / (2.0 * rest), 0.5])
    return frame.map_state(BDState.from_p(q / np.sum(q)))


def relative_entropy_of_entanglement(s: BDState) -> RelEntropyResult:
    """min over separable σ of S(ρ‖σ), evaluated at the closed-form minimizer"""
    if s.separable:
        return RelEntropyResult(value=0.0, support_ok=True)
    return relative_entropy_bd(s.p, closest_separable_bd(s).p)


def to_bits(nats: float) -> float:
    return nats / LN2
