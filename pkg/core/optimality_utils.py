"""
Optimality verification for Lewenstein–Sanpera decompositions

A decomposition ρ = Σ Λ_α P_α + (1 − λ)|ψ⟩⟨ψ| is optimal iff every Λ_α is
maximal with respect to ρ_α = ρ − Σ_{α′≠α} Λ_α′ P_α′ and every pair (Λ_α, Λ_β)
is maximal with respect to ρ_αβ. Both maxima are read from pseudo-inverses
restricted to the range; nothing here relies on the closed forms.
"""

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

try:
    from ..config import MATRIX_CONFIG, VERIFY_CONFIG
    from ..logger import log_debug, log_info, log_warning
    from .bell_utils import BELL_KETS
    from .decomposition_utils import EnsembleMember, LSDecomposition, canonical_view, reconstruct
    from .exceptions import BsaLabError, DegeneratePair, RankNotThree, ReconstructionMismatch
    from .matrix_utils import (
        dagger, frobenius, herm_eigen, partial_transpose_b, projector, support_mask,
    )
except ImportError:
    from config import MATRIX_CONFIG, VERIFY_CONFIG
    from logger import log_debug, log_info, log_warning
    from core.bell_utils import BELL_KETS
    from core.decomposition_utils import EnsembleMember, LSDecomposition, canonical_view, reconstruct
    from core.exceptions import BsaLabError, DegeneratePair, RankNotThree, ReconstructionMismatch
    from core.matrix_utils import (
        dagger, frobenius, herm_eigen, partial_transpose_b, projector, support_mask,
    )

# maximal-pair cases
CASE_OUTSIDE = "a"
CASE_ONE_INSIDE = "b"
CASE_ORTHOGONAL = "c"
CASE_CORRELATED = "d"


@dataclass(frozen=True, eq=False)
class ProjectorEntry:
    """Λ P with P = |e, f⟩⟨e, f|"""

    weight: float
    ket: np.ndarray

    @classmethod
    def from_member(cls, member: EnsembleMember) -> "ProjectorEntry":
        return cls(weight=member.weight, ket=member.ket)

    @property
    def projector(self) -> np.ndarray:
        return projector(self.ket)


@dataclass(frozen=True)
class Lemma1Check:
    alpha: int
    expected: float
    computed: float
    residual: float

    def to_json(self) -> Dict:
        return {"alpha": self.alpha, "expected": self.expected, "computed": self.computed, "residual": self.residual}


@dataclass(frozen=True)
class PairCheck:
    alpha: int
    beta: int
    case: str
    expected: Tuple[float, float]
    computed: Tuple[float, float]
    residual: float

    def to_json(self) -> Dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "case": self.case,
            "expected": list(self.expected),
            "computed": list(self.computed),
            "residual": self.residual,
        }


@dataclass(frozen=True, eq=False)
class RankReport:
    """Rank data of ρ_s^{T_B} and the two alternative kernel conditions"""

    pt_rank: int
    pt_eigenvalues: np.ndarray
    kernel_vector: np.ndarray
    rho_s_rank: int
    condition_i_alpha: Optional[float]
    condition_i_residual: float
    condition_ii: Optional[Dict] = None

    @property
    def holds(self) -> Optional[str]:
        if self.condition_i_alpha is not None:
            return "i"
        if self.condition_ii is not None and self.condition_ii.get("holds"):
            return "ii"
        return None

    def kernel_fidelity(self, ket: np.ndarray) -> float:
        return float(abs(np.vdot(ket, self.kernel_vector)) ** 2)

    def to_json(self) -> Dict:
        return {
            "pt_rank": self.pt_rank,
            "pt_eigenvalues": [float(x) for x in self.pt_eigenvalues],
            "fourth_eigenvalue": float(self.pt_eigenvalues[0]),
            "kernel_fidelity_phi_plus": self.kernel_fidelity(BELL_KETS[0]),
            "rho_s_rank": self.rho_s_rank,
            "condition_i_alpha": self.condition_i_alpha,
            "condition_i_residual": self.condition_i_residual,
            "condition_ii": self.condition_ii,
            "holds": self.holds,
        }


@dataclass(frozen=True, eq=False)
class VerificationReport:
    lemma1_checks: List[Lemma1Check]
    pair_checks: List[PairCheck]
    rank_check: Optional[RankReport]
    reconstruction_residual: float
    min_subtraction_eigenvalue: float
    tolerance: float
    passed: bool
    informational: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def worst_residual(self) -> float:
        residuals = [c.residual for c in self.lemma1_checks] + [c.residual for c in self.pair_checks]
        return max(residuals) if residuals else 0.0

    def to_json(self) -> Dict:
        return {
            "passed": self.passed,
            "informational": self.informational,
            "tolerance": self.tolerance,
            "worst_residual": self.worst_residual,
            "reconstruction_residual": self.reconstruction_residual,
            "min_subtraction_eigenvalue": self.min_subtraction_eigenvalue,
            "lemma1_checks": [c.to_json() for c in self.lemma1_checks],
            "pair_checks": [c.to_json() for c in self.pair_checks],
            "rank_check": self.rank_check.to_json() if self.rank_check else None,
            "notes": list(self.notes),
        }


class _RangeView:
    """Range projector and range pseudo-inverse of a PSD matrix from one eigensolve"""

    def __init__(self, rho: np.ndarray):
        eig = herm_eigen(rho)
        mask = support_mask(eig.eigenvalues)
        vecs = eig.eigenvectors[:, mask]
        self.rank = int(np.sum(mask))
        self.projector = vecs @ dagger(vecs)
        self.inverse = (vecs / eig.eigenvalues[mask]) @ dagger(vecs)

    def contains(self, ket: np.ndarray, range_tol: float) -> bool:
        if self.rank == 0:
            return False
        return float(np.linalg.norm(ket - self.projector @ ket)) <= range_tol

    def elements(self, kets: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([[np.vdot(a, self.inverse @ b) for b in kets] for a in kets])


def _inverse_elements(rho: np.ndarray, kets: Sequence[np.ndarray]) -> np.ndarray:
    return _RangeView(rho).elements(kets)


def lemma1_max(rho: np.ndarray, psi: np.ndarray, range_tol: float = VERIFY_CONFIG["range_tol"]) -> float:
    """
    Maximal Λ with ρ − Λ|ψ⟩⟨ψ| ≥ 0

    Returns:
        0 when ψ leaves the range of ρ, otherwise 1/⟨ψ|ρ⁺|ψ⟩
    """
    view = _RangeView(rho)
    if not view.contains(psi, range_tol):
        return 0.0
    return 1.0 / float(np.real(view.elements([psi])[0, 0]))


def lemma2_pair(
    rho: np.ndarray,
    psi1: np.ndarray,
    psi2: np.ndarray,
    range_tol: float = VERIFY_CONFIG["range_tol"],
) -> Tuple[float, float, str]:
    """
    Maximal pair (Λ₁, Λ₂) with respect to ρ and (|ψ₁⟩⟨ψ₁|, |ψ₂⟩⟨ψ₂|)

    Returns:
        Tuple of (Λ₁, Λ₂, case tag a–d)

    Raises:
        DegeneratePair: if D vanishes in the correlated case
    """
    view = _RangeView(rho)
    in1 = view.contains(psi1, range_tol)
    in2 = view.contains(psi2, range_tol)
    if not in1 and not in2:
        return 0.0, 0.0, CASE_OUTSIDE
    if in1 and not in2:
        return 1.0 / float(np.real(view.elements([psi1])[0, 0])), 0.0, CASE_ONE_INSIDE
    if in2 and not in1:
        return 0.0, 1.0 / float(np.real(view.elements([psi2])[0, 0])), CASE_ONE_INSIDE

    m = view.elements([psi1, psi2])
    m11, m22 = float(np.real(m[0, 0])), float(np.real(m[1, 1]))
    cross = float(abs(m[0, 1]))
    rank_tol = MATRIX_CONFIG["rank_tol"]
    if cross <= rank_tol * np.sqrt(m11 * m22):
        return 1.0 / m11, 1.0 / m22, CASE_ORTHOGONAL

    d = m11 * m22 - cross * cross
    if d <= rank_tol * m11 * m22:
        raise DegeneratePair(f"D = {d:.3e}")
    return (m22 - cross) / d, (m11 - cross) / d, CASE_CORRELATED


def _clean_subtraction(m: np.ndarray) -> Tuple[np.ndarray, float]:
    """Zero the spectrum below the subtraction clamp; returns (matrix, smallest raw eigenvalue)"""
    eig = herm_eigen(0.5 * (m + dagger(m)))
    w = eig.eigenvalues.copy()
    w[w < VERIFY_CONFIG["subtraction_clamp"]] = 0.0
    return (eig.eigenvectors * w) @ dagger(eig.eigenvectors), float(eig.eigenvalues[0])


def _find_nu(pt_kernel: np.ndarray, rho_s_kernel: np.ndarray, psi: np.ndarray) -> Dict:
    """Scan ν ∈ [0, ν_max] for (ν|φ̃⟩⟨φ̃| + (|φ⟩⟨φ|)^{T_B})|ψ⟩ = −α|ψ⟩ with α ≥ 0"""
    base = partial_transpose_b(projector(pt_kernel))
    tilde = projector(rho_s_kernel)

    def misalignment(nu: float) -> float:
        v = (nu * tilde + base) @ psi
        return float(np.linalg.norm(v - np.vdot(psi, v) * psi))

    grid = np.linspace(0.0, VERIFY_CONFIG["nu_max"], VERIFY_CONFIG["nu_grid"])
    values = np.array([misalignment(nu) for nu in grid])
    best = int(np.argmin(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, grid.size - 1)]
    nu, residual = float(grid[best]), float(values[best])
    if hi > lo:
        refined = minimize_scalar(misalignment, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        if refined.fun < residual:
            nu, residual = float(refined.x), float(refined.fun)

    ratio = complex(np.vdot(psi, (nu * tilde + base) @ psi))
    alpha = -ratio.real
    holds = residual <= VERIFY_CONFIG["condition_tol"] and alpha >= -VERIFY_CONFIG["condition_tol"]
    return {"nu": nu, "alpha": alpha, "residual": residual, "holds": bool(holds)}


def rank_conditions(rho_s: np.ndarray, psi: np.ndarray) -> RankReport:
    """
    Rank test on ρ_s^{T_B} and the kernel conditions for the pure part ψ

    Raises:
        RankNotThree: if rank(ρ_s^{T_B}) ≠ 3
    """
    pt = herm_eigen(partial_transpose_b(rho_s))
    magnitudes = np.abs(pt.eigenvalues)
    pt_rank = int(np.sum(support_mask(magnitudes)))
    if pt_rank != 3:
        raise RankNotThree(f"rank(ρ_s^T_B) = {pt_rank}")
    kernel = pt.eigenvectors[:, int(np.argmin(magnitudes))]

    v = partial_transpose_b(projector(kernel)) @ psi
    ratio = complex(np.vdot(psi, v))
    residual = float(np.linalg.norm(v - ratio * psi))
    tol = VERIFY_CONFIG["condition_tol"]
    alpha = -ratio.real if residual <= tol and ratio.real < -tol else None

    rho_eig = herm_eigen(rho_s)
    rho_mask = support_mask(np.clip(rho_eig.eigenvalues, 0.0, None))
    rho_s_rank = int(np.sum(rho_mask))
    condition_ii = None
    if rho_s_rank == 3:
        rho_kernel = rho_eig.eigenvectors[:, int(np.argmin(rho_eig.eigenvalues))]
        condition_ii = _find_nu(kernel, rho_kernel, psi)

    log_debug(f"Rank conditions: PT rank {pt_rank}, rho_s rank {rho_s_rank}, alpha {alpha}")
    return RankReport(
        pt_rank=pt_rank,
        pt_eigenvalues=pt.eigenvalues,
        kernel_vector=kernel,
        rho_s_rank=rho_s_rank,
        condition_i_alpha=alpha,
        condition_i_residual=residual,
        condition_ii=condition_ii,
    )


def verify_bsa(
    rho: np.ndarray,
    d: LSDecomposition,
    strict: bool = False,
    allow_mismatch: bool = False,
    with_rank: bool = True,
) -> VerificationReport:
    """
    Check maximality of every weight and every pair of weights of a decomposition

    Args:
        rho: the decomposed density matrix
        d: decomposition (any object with lam, ensemble, pure_part and rho_s_matrix())
        strict: tighten the residual tolerance by VERIFY_CONFIG["strict_factor"]
        allow_mismatch: verify even when d does not reconstruct rho
        with_rank: attach the rank-condition report (informational)

    Returns:
        VerificationReport; passed iff every residual is within tolerance

    Raises:
        ReconstructionMismatch: if d does not reconstruct rho and allow_mismatch is False
    """
    rho = np.asarray(rho, dtype=complex)
    tol = VERIFY_CONFIG["residual_tol"] * (VERIFY_CONFIG["strict_factor"] if strict else 1.0)
    recon = frobenius(reconstruct(d) - rho)
    if recon > VERIFY_CONFIG["reconstruction_tol"] and not allow_mismatch:
        raise ReconstructionMismatch(f"‖Σ Λ P + (1−λ)|ψ⟩⟨ψ| − ρ‖_F = {recon:.3e}")

    entries = [ProjectorEntry.from_member(m) for m in d.ensemble]
    total = sum((e.weight * e.projector for e in entries), np.zeros((4, 4), dtype=complex))
    min_eig = 0.0
    notes: List[str] = []

    lemma1_checks: List[Lemma1Check] = []
    for alpha, entry in enumerate(entries):
        rho_alpha, low = _clean_subtraction(rho - total + entry.weight * entry.projector)
        min_eig = min(min_eig, low)
        computed = lemma1_max(rho_alpha, entry.ket)
        lemma1_checks.append(Lemma1Check(alpha, entry.weight, computed, abs(computed - entry.weight)))

    pair_checks: List[PairCheck] = []
    for alpha, beta in combinations(range(len(entries)), 2):
        ea, eb = entries[alpha], entries[beta]
        rho_ab, low = _clean_subtraction(rho - total + ea.weight * ea.projector + eb.weight * eb.projector)
        min_eig = min(min_eig, low)
        try:
            l1, l2, case = lemma2_pair(rho_ab, ea.ket, eb.ket)
            residual = max(abs(l1 - ea.weight), abs(l2 - eb.weight))
        except DegeneratePair:
            l1, l2, case, residual = float("nan"), float("nan"), "degenerate", float("inf")
        pair_checks.append(PairCheck(alpha, beta, case, (ea.weight, eb.weight), (l1, l2), residual))

    rank_check = None
    if with_rank and d.lam < 1.0:
        try:
            rank_check = rank_conditions(d.rho_s_matrix(), d.pure_part)
        except BsaLabError as e:
            notes.append(str(e))
            log_warning(f"Rank conditions not evaluated: {e}")

    residuals = [c.residual for c in lemma1_checks] + [c.residual for c in pair_checks]
    passed = all(r <= tol for r in residuals) and recon <= max(tol, VERIFY_CONFIG["reconstruction_tol"])
    if d.lam >= 1.0:
        notes.append("separable input: no entangled part, pair checks involve the ensemble only")
    log_info(f"Verification {'passed' if passed else 'failed'}: worst residual {max(residuals, default=0.0):.3e}")
    return VerificationReport(
        lemma1_checks=lemma1_checks,
        pair_checks=pair_checks,
        rank_check=rank_check,
        reconstruction_residual=recon,
        min_subtraction_eigenvalue=min_eig,
        tolerance=tol,
        passed=passed,
        notes=notes,
    )


def perturb_decomposition(d: LSDecomposition, alpha: int, eps: float) -> LSDecomposition:
    """
    Move ε of weight from the pure part onto P_α

    The result no longer reconstructs the source state; verify it with
    allow_mismatch=True against the original matrix.
    """
    if not 0 <= alpha < len(d.ensemble):
        raise BsaLabError(f"alpha = {alpha} outside 0..{len(d.ensemble) - 1}")
    if eps < 0.0 or eps > 1.0 - d.lam:
        raise BsaLabError(f"eps = {eps} must lie in [0, 1 − λ] = [0, {1.0 - d.lam:.12g}]")
    members = list(d.ensemble)
    target = members[alpha]
    members[alpha] = EnsembleMember(weight=target.weight + eps, ket=target.ket, label=target.label)
    note = f"perturbed: +{eps:g} on member {alpha}"
    return replace(d, lam=d.lam + eps, ensemble=tuple(members), note=note)


def _printed_gammas(lam_i: float, lam_j: float, lam: float) -> Dict[str, float]:
    c = 0.5 * (1.0 - lam)
    return {
        "product_plus_half": lam_i * lam_j + c,
        "product_times_half": lam_i * lam_j + c * lam_i * lam_j,
        "sum_form": lam_i * lam_j + c * (lam_i + lam_j),
    }


def gamma_cross_check(d: LSDecomposition) -> List[Dict]:
    """
    Compare the inverse elements of ρ_{i,i+1} with the printed closed forms

    Works on the singlet-frame view of an entangled decomposition; members come in
    consecutive same-axis pairs. Reported only, never used for pass/fail.
    """
    if d.lam >= 1.0:
        return []
    view = canonical_view(d)
    lam = view.lam
    psi = view.pure_part
    rows = []
    for i in range(0, len(view.ensemble) - 1, 2):
        a, b = view.ensemble[i], view.ensemble[i + 1]
        if a.weight <= 0.0 or b.weight <= 0.0:
            continue
        rho_pair = a.weight * projector(a.ket) + b.weight * projector(b.ket) + (1.0 - lam) * projector(psi)
        m = _inverse_elements(rho_pair, [a.ket, b.ket])
        numeric = {"m11": float(np.real(m[0, 0])), "m22": float(np.real(m[1, 1])), "m12_abs": float(abs(m[0, 1]))}
        variants = {}
        for name, gamma in _printed_gammas(a.weight, b.weight, lam).items():
            predicted = {
                "m11": (b.weight + (1.0 - lam)) / gamma,
                "m11_half": (b.weight + 0.5 * (1.0 - lam)) / gamma,
                "m12_abs": (1.0 - lam) / (2.0 * gamma),
            }
            variants[name] = {
                "gamma": gamma,
                "m11_residual": abs(predicted["m11"] - numeric["m11"]),
                "m11_half_residual": abs(predicted["m11_half"] - numeric["m11"]),
                "m12_residual": abs(predicted["m12_abs"] - numeric["m12_abs"]),
            }
        rows.append({"pair": [i, i + 1], "labels": [a.label, b.label], "numeric": numeric, "variants": variants})
    return rows
