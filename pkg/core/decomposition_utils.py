"""
Closed-form best separable approximation of Bell-diagonal states

Inside the singlet tetrahedron the separable part is found by extending the
segment from the singlet vertex through t until it meets the face
t1 + t2 + t3 = −1; the other three tetrahedra are handled by a local Pauli
relabeling (see bell_utils.canonicalize).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from ..config import TOLERANCES
    from ..logger import log_debug, log_info
    from .bell_utils import (
        BELL_KETS, BELL_LABELS, IDENTITY_FRAME, SINGLET_ID, SINGLET_VERTEX,
        BDState, CanonicalFrame, canonicalize, nearest_bell_id, to_density_matrix,
    )
    from .exceptions import DegenerateVertex, NotInSingletTetra, NotOnFace, Unphysical
    from .matrix_utils import pauli_eigenket, projector, tensor_ket, to_pairs
    from .validation_utils import validate_t_vec
except ImportError:
    from config import TOLERANCES
    from logger import log_debug, log_info
    from core.bell_utils import (
        BELL_KETS, BELL_LABELS, IDENTITY_FRAME, SINGLET_ID, SINGLET_VERTEX,
        BDState, CanonicalFrame, canonicalize, nearest_bell_id, to_density_matrix,
    )
    from core.exceptions import DegenerateVertex, NotInSingletTetra, NotOnFace, Unphysical
    from core.matrix_utils import pauli_eigenket, projector, tensor_ket, to_pairs
    from core.validation_utils import validate_t_vec

AXES = ("x", "y", "z")
FACE_CENTROID = np.array([-1.0, -1.0, -1.0]) / 3.0
FACE_HEIGHT = np.sqrt(1.5)

PURE_BELL_NOTE = "pure Bell input: separable part set to the face centroid (weight 0)"
SEPARABLE_NOTE = "separable input: lambda = 1 and the separable part is the state itself"


@dataclass(frozen=True, eq=False)
class EnsembleMember:
    """Weighted product ket |e, f⟩ = |a_s⟩ ⊗ |a_s'⟩"""

    weight: float
    ket: np.ndarray
    label: str

    def projector(self) -> np.ndarray:
        return projector(self.ket)

    def to_json(self) -> Dict:
        return {"weight": float(self.weight), "label": self.label, "ket": to_pairs(self.ket)}


@dataclass(frozen=True, eq=False)
class LSDecomposition:
    """ρ = λ ρ_s + (1 − λ)|ψ⟩⟨ψ| with ρ_s = Σ Λ_α |e_α f_α⟩⟨e_α f_α| / λ"""

    lam: float
    rho_s: BDState
    pure_part: np.ndarray
    pure_label: str
    ensemble: Tuple[EnsembleMember, ...]
    frame: CanonicalFrame = IDENTITY_FRAME
    note: Optional[str] = None

    @property
    def weights(self) -> np.ndarray:
        return np.array([member.weight for member in self.ensemble])

    def rho_s_matrix(self) -> np.ndarray:
        return to_density_matrix(self.rho_s)

    def to_json(self) -> Dict:
        data = {
            "lambda": float(self.lam),
            "rho_s": dict(self.rho_s.to_json(), matrix=to_pairs(self.rho_s_matrix())),
            "pure_part": self.pure_label,
            "ensemble": [member.to_json() for member in self.ensemble],
            "frame": self.frame.to_json(),
        }
        if self.note:
            data["note"] = self.note
        return data


def _member(weight: float, first: Tuple[str, int], second: Tuple[str, int]) -> EnsembleMember:
    ket = tensor_ket(pauli_eigenket(*first), pauli_eigenket(*second))
    label = f"{first[0]}{'+' if first[1] > 0 else '-'}{second[0]}{'+' if second[1] > 0 else '-'}"
    return EnsembleMember(weight=float(weight), ket=ket, label=label)


def _vertex_members(axis: str, weight: float, sign: int) -> List[EnsembleMember]:
    """Two product kets of octahedron vertex O_axis^sign, each carrying weight/2"""
    if sign < 0:
        pairs = (((axis, 1), (axis, -1)), ((axis, -1), (axis, 1)))
    else:
        pairs = (((axis, 1), (axis, 1)), ((axis, -1), (axis, -1)))
    return [_member(weight / 2.0, first, second) for first, second in pairs]


def project_to_face(t: Sequence[float]) -> np.ndarray:
    """
    Extend the segment from the singlet vertex through t to the face t1+t2+t3 = −1

    Raises:
        Unphysical: if t is outside the positivity tetrahedron
        NotInSingletTetra: if 1 + t1 + t2 + t3 > 0 beyond the face tolerance
        DegenerateVertex: if t is the singlet vertex itself
    """
    arr = np.asarray(t, dtype=float)
    is_valid, error_msg = validate_t_vec(arr)
    if not is_valid:
        raise Unphysical(error_msg)
    margin = 1.0 + float(np.sum(arr))
    if margin > TOLERANCES["face"]:
        raise NotInSingletTetra(f"1 + t1 + t2 + t3 = {margin:.3e}")
    if float(np.max(np.abs(arr - SINGLET_VERTEX))) <= TOLERANCES["degenerate_vertex"]:
        raise DegenerateVertex("t = (−1, −1, −1)")
    t1, t2, t3 = arr
    denom = 3.0 + t1 + t2 + t3
    return np.array([
        -1.0 + t1 - t2 - t3,
        -1.0 - t1 + t2 - t3,
        -1.0 - t1 - t2 + t3,
    ]) / denom


def face_heights(t_face: Sequence[float]) -> np.ndarray:
    """Distances from a singlet-face point to the three edges; they sum to √(3/2)"""
    return -FACE_HEIGHT * np.asarray(t_face, dtype=float)


def separability_weight(t: Sequence[float]) -> float:
    """λ = (3 + t1 + t2 + t3)/2 for a state in the singlet tetrahedron"""
    return 0.5 * (3.0 + float(np.sum(t)))


def segment_ratio(t: Sequence[float], t_face: Sequence[float], vertex: Sequence[float] = SINGLET_VERTEX) -> float:
    """|vertex → t| / |vertex → t′|, the geometric reading of λ"""
    v = np.asarray(vertex, dtype=float)
    return float(np.linalg.norm(np.asarray(t) - v) / np.linalg.norm(np.asarray(t_face) - v))


def line_residuals(t: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """The two plane equations of the line through the singlet vertex and t, evaluated at x"""
    t1, t2, t3 = np.asarray(t, dtype=float)
    x1, x2, x3 = np.asarray(x, dtype=float)
    return np.array([
        (1.0 + t2) * (x1 - t1) - (1.0 + t1) * (x2 - t2),
        (1.0 + t3) * (x2 - t2) - (1.0 + t2) * (x3 - t3),
    ])


def closed_form_rho_s(t: Sequence[float]) -> np.ndarray:
    """Explicit matrix of the separable part for t in the singlet tetrahedron"""
    t1, t2, t3 = np.asarray(t, dtype=float)
    m = np.array([
        [1 + t3, 0, 0, t1 - t2],
        [0, 2 + t1 + t2, -1 - t3, 0],
        [0, -1 - t3, 2 + t1 + t2, 0],
        [t1 - t2, 0, 0, 1 + t3],
    ], dtype=complex)
    return m / (2.0 * (3.0 + t1 + t2 + t3))


def on_singlet_face(t: Sequence[float], tol: float = TOLERANCES["face"]) -> bool:
    arr = np.asarray(t, dtype=float)
    return abs(1.0 + float(np.sum(arr))) <= tol and bool(np.all(arr <= tol))


def product_ensemble(face_state: BDState, weight: float = 1.0) -> List[EnsembleMember]:
    """
    Product-state ensemble of a separable BD state

    On the singlet face the state is the mixture Σ λ_i⁻ ρ_i⁻ of the three vertices
    O_i⁻ with λ_i⁻ = −t′_i (proportional to the face heights), giving six members.
    Elsewhere in the octahedron each axis carries w_i = |t_i|, split as ½(w_i − t_i) on O_i⁻
    and ½(w_i + t_i) on O_i⁺. The slack 1 − Σ|t| is added to the single axis of largest
    |t_i|, so the support is that axis pair plus one vertex per other nonzero t_i.
    Zero-weight vertices are dropped.

    Args:
        face_state: separable BD state in the canonical frame
        weight: overall scale, λ when the ensemble is embedded in a decomposition

    Raises:
        NotOnFace: if the state is not separable
    """
    if not face_state.separable:
        raise NotOnFace(f"t = {face_state.t.tolist()} is outside the octahedron")
    t = face_state.t
    members: List[EnsembleMember] = []
    if on_singlet_face(t):
        lambdas = np.clip(-t, 0.0, None)
        for axis, lam_i in zip(AXES, lambdas):
            members.extend(_vertex_members(axis, weight * lam_i, -1))
        return members

    w = np.abs(t)
    w[int(np.argmax(w))] += max(0.0, 1.0 - float(np.sum(w)))
    for axis, t_i, w_i in zip(AXES, t, w):
        for sign, share in ((-1, 0.5 * (w_i - t_i)), (1, 0.5 * (w_i + t_i))):
            if share > 0.0:
                members.extend(_vertex_members(axis, weight * share, sign))
    return members


def _map_label(label: str, frame: CanonicalFrame) -> str:
    """σ_k on the first qubit flips the first-qubit eigenstate of every axis other than k"""
    if frame.label == "I":
        return label
    axis, sign = label[0], label[1]
    if axis != frame.label.lower():
        sign = "-" if sign == "+" else "+"
    return f"{axis}{sign}{label[2:]}"


def map_decomposition(d: LSDecomposition, frame: CanonicalFrame) -> LSDecomposition:
    """Carry a decomposition through a Pauli relabeling (an involution)"""
    if frame.label == "I":
        return d
    ensemble = tuple(
        EnsembleMember(weight=m.weight, ket=frame.map_ket(m.ket), label=_map_label(m.label, frame))
        for m in d.ensemble
    )
    pure_id = frame.permutation[BELL_LABELS.index(d.pure_label)]
    return LSDecomposition(
        lam=d.lam,
        rho_s=frame.map_state(d.rho_s),
        pure_part=BELL_KETS[pure_id].copy(),
        pure_label=BELL_LABELS[pure_id],
        ensemble=ensemble,
        frame=frame,
        note=d.note,
    )


def canonical_view(d: LSDecomposition) -> LSDecomposition:
    """The same decomposition expressed in the singlet frame"""
    mapped = map_decomposition(d, d.frame)
    return LSDecomposition(
        lam=mapped.lam, rho_s=mapped.rho_s, pure_part=mapped.pure_part, pure_label=mapped.pure_label,
        ensemble=mapped.ensemble, frame=IDENTITY_FRAME, note=mapped.note,
    )


def bsa_bd(s: BDState) -> LSDecomposition:
    """
    Optimal Lewenstein–Sanpera decomposition of a Bell-diagonal state

    Args:
        s: physical BD state

    Returns:
        LSDecomposition in the frame of s
    """
    if s.separable:
        vertex = nearest_bell_id(s)
        log_debug("Separable input: returning the trivial decomposition")
        return LSDecomposition(
            lam=1.0,
            rho_s=s,
            pure_part=BELL_KETS[vertex].copy(),
            pure_label=BELL_LABELS[vertex],
            ensemble=tuple(product_ensemble(s)),
            note=SEPARABLE_NOTE,
        )

    canonical, frame = canonicalize(s)
    note = None
    if float(np.max(np.abs(canonical.t - SINGLET_VERTEX))) <= TOLERANCES["degenerate_vertex"]:
        t_face = FACE_CENTROID.copy()
        lam = 0.0
        note = PURE_BELL_NOTE
    else:
        t_face = project_to_face(canonical.t)
        lam = min(1.0, max(0.0, separability_weight(canonical.t)))

    rho_s = BDState.from_t(t_face)
    decomposition = LSDecomposition(
        lam=lam,
        rho_s=rho_s,
        pure_part=BELL_KETS[SINGLET_ID].copy(),
        pure_label=BELL_LABELS[SINGLET_ID],
        ensemble=tuple(product_ensemble(rho_s, weight=lam)),
        note=note,
    )
    log_info(f"Decomposed {s.label} state: lambda = {lam:.12g}")
    if frame.label == "I":
        return decomposition
    return map_decomposition(decomposition, frame)


def reconstruct(d: LSDecomposition) -> np.ndarray:
    """Σ Λ_α P_α + (1 − λ)|ψ⟩⟨ψ|"""
    rho = (1.0 - d.lam) * projector(d.pure_part)
    for member in d.ensemble:
        rho = rho + member.weight * member.projector()
    return rho


def ensemble_sum(d: LSDecomposition) -> np.ndarray:
    """Σ Λ_α P_α, which equals λ ρ_s"""
    total = np.zeros((4, 4), dtype=complex)
    for member in d.ensemble:
        total = total + member.weight * member.projector()
    return total
