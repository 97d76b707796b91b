"""
Fixed-size complex linear algebra for two-qubit work

Basis order is |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ with σ_z|↑⟩ = +|↑⟩ everywhere in the lab.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

try:
    from ..config import MATRIX_CONFIG
    from ..logger import log_debug
    from .exceptions import NegativeEigenvalue, NotHermitian
except ImportError:
    from config import MATRIX_CONFIG
    from logger import log_debug
    from core.exceptions import NegativeEigenvalue, NotHermitian

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

_INV_SQRT2 = 1.0 / np.sqrt(2.0)
PAULI_EIGENKETS = {
    ("x", 1): np.array([_INV_SQRT2, _INV_SQRT2], dtype=complex),
    ("x", -1): np.array([_INV_SQRT2, -_INV_SQRT2], dtype=complex),
    ("y", 1): np.array([_INV_SQRT2, 1j * _INV_SQRT2], dtype=complex),
    ("y", -1): np.array([_INV_SQRT2, -1j * _INV_SQRT2], dtype=complex),
    ("z", 1): np.array([1, 0], dtype=complex),
    ("z", -1): np.array([0, 1], dtype=complex),
}


@dataclass(frozen=True, eq=False)
class HermEigen:
    """Spectral decomposition of a Hermitian matrix.

    eigenvalues are ascending; column k of eigenvectors belongs to eigenvalues[k].
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    def apply(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Matrix function V f(w) V†"""
        return (self.eigenvectors * fn(self.eigenvalues)) @ self.eigenvectors.conj().T


def as_matrix(m: Sequence, size: int) -> np.ndarray:
    """Coerce to a finite complex (size × size) array"""
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (size, size):
        raise ValueError(f"Expected a {size}x{size} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix entries must be finite")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def normalize_ket(amplitudes: Sequence) -> np.ndarray:
    """Return the unit-norm complex vector along amplitudes"""
    vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if vec.size not in (2, 4):
        raise ValueError(f"Kets must have 2 or 4 amplitudes, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("Ket amplitudes must be finite")
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("Cannot normalize the zero vector")
    return vec / norm


def projector(ket: np.ndarray) -> np.ndarray:
    """|ψ⟩⟨ψ| of a ket"""
    return np.outer(ket, np.conj(ket))


def pauli_eigenket(axis: str, sign: int) -> np.ndarray:
    """Eigenstate of σ_axis with eigenvalue sign (±1)"""
    return PAULI_EIGENKETS[(axis, sign)].copy()


def bloch_operator(vec: Sequence[float]) -> np.ndarray:
    """m·σ for a real 3-vector m"""
    m = np.asarray(vec, dtype=float)
    return m[0] * PAULI_X + m[1] * PAULI_Y + m[2] * PAULI_Z


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a ⊗ b in the lab basis order"""
    return np.kron(a, b)


def tensor_ket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def partial_transpose_b(m: np.ndarray) -> np.ndarray:
    """Transpose on the second qubit: ⟨ij|M^{T_B}|kl⟩ = ⟨il|M|kj⟩"""
    arr = as_matrix(m, 4).reshape(2, 2, 2, 2)
    return arr.transpose(0, 3, 2, 1).reshape(4, 4)


def schmidt_coefficients(ket: np.ndarray) -> np.ndarray:
    """Singular values of the 2×2 amplitude matrix, descending"""
    return np.linalg.svd(np.asarray(ket, dtype=complex).reshape(2, 2), compute_uv=False)


def schmidt_rank(ket: np.ndarray, tol: float = 1e-12) -> int:
    coeffs = schmidt_coefficients(ket)
    return int(np.sum(coeffs > tol * max(coeffs[0], 1e-300)))


def _jacobi_hermitian(m: np.ndarray, max_sweeps: int, tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi; returns unsorted (w, V) with M = V diag(w) V†"""
    a = np.array(m, dtype=complex, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1e-300)
    for sweep in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300 or r <= 1e-3 * tol * scale:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) on (p, q) followed by the real rotation
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c * np.conj(phase)
                a = dagger(g) @ a @ g
                a[p, q] = 0.0
                a[q, p] = 0.0
                v = v @ g
    else:
        log_debug(f"Jacobi reached {max_sweeps} sweeps without meeting tolerance {tol}")
    return np.real(np.diag(a)).copy(), v


def herm_eigen(m: np.ndarray, tol: Optional[float] = None, solver: Optional[str] = None) -> HermEigen:
    """
    Full spectral decomposition of a Hermitian matrix

    Args:
        m: square Hermitian matrix (2×2 or 4×4)
        tol: relative Hermiticity tolerance ‖m − m†‖_F ≤ tol·‖m‖_F
        solver: "jacobi" (default kernel) or "lapack" (numpy.linalg.eigh)

    Returns:
        HermEigen with ascending eigenvalues

    Raises:
        NotHermitian: if the Hermiticity precondition fails
    """
    tol = MATRIX_CONFIG["hermitian_tol"] if tol is None else tol
    solver = solver or MATRIX_CONFIG["eigensolver"]
    arr = np.asarray(m, dtype=complex)
    norm = np.linalg.norm(arr)
    skew = np.linalg.norm(arr - dagger(arr))
    if skew > tol * norm:
        raise NotHermitian(f"‖m − m†‖_F = {skew:.3e} exceeds {tol:.1e}·‖m‖_F")
    arr = 0.5 * (arr + dagger(arr))

    if solver == "lapack":
        w, vecs = np.linalg.eigh(arr)
    elif solver == "jacobi":
        w, vecs = _jacobi_hermitian(arr, MATRIX_CONFIG["jacobi_max_sweeps"], MATRIX_CONFIG["jacobi_tol"])
        order = np.argsort(w, kind="stable")
        w, vecs = w[order], vecs[:, order]
    else:
        raise ValueError(f"Unknown eigensolver '{solver}'")
    return HermEigen(eigenvalues=np.asarray(w, dtype=float), eigenvectors=vecs)


def eigenvalues(m: np.ndarray, solver: Optional[str] = None) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix"""
    return herm_eigen(m, solver=solver).eigenvalues


def min_eigenvalue(m: np.ndarray, solver: Optional[str] = None) -> float:
    return float(eigenvalues(m, solver=solver)[0])


def _clamped_spectrum(eig: HermEigen) -> np.ndarray:
    window = MATRIX_CONFIG["clamp_window"]
    w = eig.eigenvalues
    if w[0] < -window:
        raise NegativeEigenvalue(f"smallest eigenvalue {w[0]:.3e} < -{window:.0e}")
    return np.clip(w, 0.0, None)


def mat_sqrt_psd(m: np.ndarray, solver: Optional[str] = None) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix"""
    eig = herm_eigen(m, solver=solver)
    w = _clamped_spectrum(eig)
    return (eig.eigenvectors * np.sqrt(w)) @ dagger(eig.eigenvectors)


def support_mask(w: np.ndarray, rank_tol: Optional[float] = None) -> np.ndarray:
    """Eigenvalues counted as nonzero: w > rank_tol · max(w)"""
    rank_tol = MATRIX_CONFIG["rank_tol"] if rank_tol is None else rank_tol
    top = float(np.max(w)) if w.size else 0.0
    if top <= 0.0:
        return np.zeros_like(w, dtype=bool)
    return w > rank_tol * top


def mat_log_psd(m: np.ndarray, rank_tol: Optional[float] = None, solver: Optional[str] = None) -> np.ndarray:
    """
    Natural logarithm of a PSD matrix restricted to its support

    Eigenvalues outside the support contribute zero; callers pair this with
    support_projector when the kernel matters.
    """
    eig = herm_eigen(m, solver=solver)
    w = _clamped_spectrum(eig)
    mask = support_mask(w, rank_tol)
    logs = np.zeros_like(w)
    logs[mask] = np.log(w[mask])
    return (eig.eigenvectors * logs) @ dagger(eig.eigenvectors)


def support_projector(m: np.ndarray, rank_tol: Optional[float] = None, solver: Optional[str] = None) -> np.ndarray:
    """Orthogonal projector onto the range of a Hermitian PSD matrix"""
    eig = herm_eigen(m, solver=solver)
    mask = support_mask(eig.eigenvalues, rank_tol)
    vecs = eig.eigenvectors[:, mask]
    return vecs @ dagger(vecs)


def pinv_on_range(m: np.ndarray, rank_tol: Optional[float] = None, solver: Optional[str] = None) -> Tuple[np.ndarray, int]:
    """
    Moore–Penrose pseudo-inverse of a Hermitian PSD matrix via its spectrum

    Args:
        m: Hermitian PSD matrix
        rank_tol: eigenvalues ≤ rank_tol · (largest eigenvalue) are treated as zero

    Returns:
        Tuple of (pseudo-inverse, rank)
    """
    eig = herm_eigen(m, solver=solver)
    mask = support_mask(eig.eigenvalues, rank_tol)
    vecs = eig.eigenvectors[:, mask]
    inv = (vecs / eig.eigenvalues[mask]) @ dagger(vecs)
    return inv, int(np.sum(mask))


def outside_range_norm(m: np.ndarray, ket: np.ndarray, rank_tol: Optional[float] = None) -> float:
    """Norm of the component of ket orthogonal to the range of m"""
    proj = support_projector(m, rank_tol)
    return float(np.linalg.norm(ket - proj @ ket))


def is_unitary(u: np.ndarray, tol: float) -> bool:
    n = u.shape[0]
    return bool(np.linalg.norm(dagger(u) @ u - np.eye(n)) <= tol)


def to_pairs(values: np.ndarray) -> list:
    """Complex array → nested lists of [re, im] pairs for JSON"""
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [to_pairs(row) for row in arr]
