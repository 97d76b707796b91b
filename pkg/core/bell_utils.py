"""
Bell-diagonal two-qubit states

A Bell-diagonal (BD) state is carried in both of its coordinate systems: the Bell
weights p = (p1..p4) and the correlation vector t = (t1, t2, t3) with
ρ = ¼(I⊗I + Σ t_i σ_i⊗σ_i).
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

try:
    from ..config import TOLERANCES
    from ..logger import log_debug
    from .exceptions import InvalidProbVec, NonBellDiagonal, NotDensityMatrix, SeparableInput, Unphysical
    from .matrix_utils import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, PAULIS, dagger, projector, tensor
    from .validation_utils import tetrahedron_margins, validate_density_matrix, validate_prob_vec, validate_t_vec
except ImportError:
    from config import TOLERANCES
    from logger import log_debug
    from core.exceptions import InvalidProbVec, NonBellDiagonal, NotDensityMatrix, SeparableInput, Unphysical
    from core.matrix_utils import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, PAULIS, dagger, projector, tensor
    from core.validation_utils import tetrahedron_margins, validate_density_matrix, validate_prob_vec, validate_t_vec

BELL_LABELS = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")

_S = 1.0 / np.sqrt(2.0)
BELL_KETS = (
    np.array([_S, 0, 0, _S], dtype=complex),
    np.array([_S, 0, 0, -_S], dtype=complex),
    np.array([0, _S, _S, 0], dtype=complex),
    np.array([0, _S, -_S, 0], dtype=complex),
)
# columns are the Bell kets
BELL_MATRIX = np.column_stack(BELL_KETS)

SINGLET_ID = 3
SINGLET_VERTEX = np.array([-1.0, -1.0, -1.0])

P_TO_T = np.array([
    [1.0, -1.0, 1.0, -1.0],
    [-1.0, 1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0, -1.0],
])

BELL_VERTICES = np.array([
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0],
    [-1.0, -1.0, -1.0],
])


def octahedron_margins(t: Sequence[float]) -> np.ndarray:
    """
    PPT inequalities ordered by Bell index

    Entry i equals 2(1 − 2p_i); a negative entry means the state lies in the
    entangled tetrahedron of Bell state i.
    """
    t1, t2, t3 = np.asarray(t, dtype=float)
    return np.array([
        1.0 - t1 + t2 - t3,
        1.0 + t1 - t2 - t3,
        1.0 - t1 - t2 + t3,
        1.0 + t1 + t2 + t3,
    ])


def _is_separable_t(t: np.ndarray) -> bool:
    return bool(np.all(octahedron_margins(t) >= -TOLERANCES["separable"]))


@dataclass(frozen=True, eq=False)
class BDState:
    """Bell-diagonal state with reconciled (p, t) coordinates"""

    p: np.ndarray
    t: np.ndarray
    tetra_id: Optional[int]

    @classmethod
    def from_p(cls, p: Sequence[float]) -> "BDState":
        probs = np.asarray(p, dtype=float)
        t = p_to_t(probs)
        return cls(p=probs.copy(), t=t, tetra_id=_tetra_id(probs, t))

    @classmethod
    def from_t(cls, t: Sequence[float]) -> "BDState":
        corr = np.asarray(t, dtype=float)
        p = t_to_p(corr)
        return cls(p=p, t=corr.copy(), tetra_id=_tetra_id(p, corr))

    @classmethod
    def from_density_matrix(cls, m: np.ndarray) -> "BDState":
        """Read the Bell weights of a density matrix that is Bell-diagonal"""
        is_valid, error_msg = validate_density_matrix(m)
        if not is_valid:
            raise NotDensityMatrix(error_msg)
        in_bell = dagger(BELL_MATRIX) @ np.asarray(m, dtype=complex) @ BELL_MATRIX
        off = in_bell - np.diag(np.diag(in_bell))
        worst = float(np.max(np.abs(off)))
        if worst >= TOLERANCES["bell_offdiag"]:
            raise NonBellDiagonal(f"largest off-diagonal Bell-basis entry {worst:.3e}")
        p = np.clip(np.real(np.diag(in_bell)), 0.0, None)
        return cls.from_p(p / np.sum(p))

    @classmethod
    def from_json(cls, data: Dict) -> "BDState":
        if "p" in data:
            return cls.from_p(data["p"])
        if "t" in data:
            return cls.from_t(data["t"])
        raise InvalidProbVec("JSON state needs a 'p' or 't' entry")

    @property
    def separable(self) -> bool:
        return self.tetra_id is None

    @property
    def label(self) -> Optional[str]:
        return None if self.tetra_id is None else BELL_LABELS[self.tetra_id]

    def density_matrix(self) -> np.ndarray:
        return to_density_matrix(self)

    def to_json(self) -> Dict:
        return {
            "p": [float(x) for x in self.p],
            "t": [float(x) for x in self.t],
            "separable": self.separable,
            "tetra_id": self.tetra_id,
        }


def _tetra_id(p: np.ndarray, t: np.ndarray) -> Optional[int]:
    if _is_separable_t(t):
        return None
    return int(np.argmax(p))


def p_to_t(p: Sequence[float]) -> np.ndarray:
    """
    Correlation vector of Bell weights

    Raises:
        InvalidProbVec: if p is not a probability 4-vector
    """
    is_valid, error_msg = validate_prob_vec(p)
    if not is_valid:
        raise InvalidProbVec(error_msg)
    return P_TO_T @ np.asarray(p, dtype=float)


def t_to_p(t: Sequence[float]) -> np.ndarray:
    """
    Bell weights of a correlation vector, p_i = (positivity margin i)/4

    Raises:
        Unphysical: if t lies outside the positivity tetrahedron
    """
    is_valid, error_msg = validate_t_vec(t)
    if not is_valid:
        raise Unphysical(error_msg)
    return tetrahedron_margins(t) / 4.0


def is_separable(s: BDState) -> bool:
    """PPT octahedron test; boundary states count as separable"""
    return _is_separable_t(s.t)


def to_density_matrix(s: BDState) -> np.ndarray:
    """¼(I⊗I + Σ t_i σ_i⊗σ_i)"""
    rho = tensor(PAULI_I, PAULI_I)
    for t_i, sigma in zip(s.t, PAULIS):
        rho = rho + t_i * tensor(sigma, sigma)
    return rho / 4.0


def bell_mixture(p: Sequence[float]) -> np.ndarray:
    """Σ p_i |ψ_i⟩⟨ψ_i| assembled directly from the Bell projectors"""
    rho = np.zeros((4, 4), dtype=complex)
    for weight, ket in zip(p, BELL_KETS):
        rho += weight * projector(ket)
    return rho


def werner_state(x: float) -> BDState:
    """Werner state t = (−x, −x, −x), x ∈ [−1/3, 1]; entangled for x > 1/3"""
    return BDState.from_t((-x, -x, -x))


_FRAME_PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
# σ⊗I conjugation swaps Bell labels pairwise; each map is an involution
_FRAME_PERMUTATIONS = {
    "I": (0, 1, 2, 3),
    "X": (2, 3, 0, 1),
    "Y": (3, 2, 1, 0),
    "Z": (1, 0, 3, 2),
}
_FRAME_FOR_VERTEX = {0: "Y", 1: "X", 2: "Z", 3: "I"}


@dataclass(frozen=True)
class CanonicalFrame:
    """Local Pauli relabeling σ⊗I that moves a tetrahedron onto the singlet one"""

    label: str
    source_id: int

    @property
    def permutation(self) -> Tuple[int, int, int, int]:
        return _FRAME_PERMUTATIONS[self.label]

    def local_operator(self) -> np.ndarray:
        return _FRAME_PAULIS[self.label]

    def operator(self) -> np.ndarray:
        return tensor(self.local_operator(), PAULI_I)

    def permute_p(self, p: Sequence[float]) -> np.ndarray:
        arr = np.asarray(p, dtype=float)
        return arr[list(self.permutation)]

    def map_state(self, s: BDState) -> BDState:
        """Apply the relabeling (it is its own inverse)"""
        return BDState.from_p(self.permute_p(s.p))

    def map_matrix(self, m: np.ndarray) -> np.ndarray:
        k = self.operator()
        return k @ m @ dagger(k)

    def map_ket(self, ket: np.ndarray) -> np.ndarray:
        return self.operator() @ ket

    def to_json(self) -> Dict:
        return {"local_pauli": self.label, "source_tetra_id": self.source_id}


IDENTITY_FRAME = CanonicalFrame(label="I", source_id=SINGLET_ID)


def frame_for(tetra_id: int) -> CanonicalFrame:
    return CanonicalFrame(label=_FRAME_FOR_VERTEX[tetra_id], source_id=tetra_id)


def canonicalize(s: BDState) -> Tuple[BDState, CanonicalFrame]:
    """
    Move an entangled BD state into the singlet tetrahedron

    Returns:
        Tuple of (state with p4 maximal, frame record); frame.map_state inverts it

    Raises:
        SeparableInput: if max p_i ≤ 1/2
    """
    if s.separable:
        raise SeparableInput(f"max p_i = {float(np.max(s.p)):.12g}")
    frame = frame_for(s.tetra_id)
    canonical = frame.map_state(s)
    log_debug(f"Canonicalized tetra {s.label} with local Pauli {frame.label}")
    return canonical, frame


def nearest_bell_id(s: BDState) -> int:
    """Bell vertex owning the state, or the heaviest Bell weight when separable"""
    return s.tetra_id if s.tetra_id is not None else int(np.argmax(s.p))


def region_label(s: BDState) -> str:
    return "separable" if s.separable else f"entangled:{s.label}"
