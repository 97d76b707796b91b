"""
Local filtering operations on two-qubit states and their decompositions

A pair acts as ρ′ = (A⊗B)ρ(A⊗B)†/t(ρ) with A = U_A f^{μ,a,m}, B = U_B f^{ν,b,n}
and f^{μ,a,m} = μ(I + a m·σ).
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

try:
    from ..config import LQCC_CONFIG
    from ..logger import log_debug, log_info
    from .bell_utils import IDENTITY_FRAME, CanonicalFrame
    from .decomposition_utils import EnsembleMember, LSDecomposition, reconstruct
    from .exceptions import InvalidFiltration, VanishingNorm
    from .matrix_utils import (
        PAULI_I, PAULIS, bloch_operator, dagger, frobenius, is_unitary, projector, tensor, to_pairs,
    )
    from .measure_utils import wootters_concurrence
    from .optimality_utils import VerificationReport, _inverse_elements, verify_bsa
    from .validation_utils import validate_filtration
except ImportError:
    from config import LQCC_CONFIG
    from logger import log_debug, log_info
    from core.bell_utils import IDENTITY_FRAME, CanonicalFrame
    from core.decomposition_utils import EnsembleMember, LSDecomposition, reconstruct
    from core.exceptions import InvalidFiltration, VanishingNorm
    from core.matrix_utils import (
        PAULI_I, PAULIS, bloch_operator, dagger, frobenius, is_unitary, projector, tensor, to_pairs,
    )
    from core.measure_utils import wootters_concurrence
    from core.optimality_utils import VerificationReport, _inverse_elements, verify_bsa
    from core.validation_utils import validate_filtration

AXIS_VECTORS = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}


def _unit(vec: Sequence[float]) -> np.ndarray:
    arr = np.asarray(vec, dtype=float)
    return arr / np.linalg.norm(arr)


def parse_axis(axis) -> np.ndarray:
    """'x' | 'y' | 'z' | 'mx,my,mz' | 3-sequence → unit 3-vector"""
    if isinstance(axis, str):
        key = axis.strip().lower()
        if key in AXIS_VECTORS:
            return np.array(AXIS_VECTORS[key])
        axis = [float(x) for x in key.split(",")]
    arr = np.asarray(axis, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)) or np.linalg.norm(arr) == 0.0:
        raise InvalidFiltration(f"axis {axis!r} is not a nonzero real 3-vector")
    return _unit(arr)


def pauli_reflect(vec: Sequence[float], pauli: str) -> np.ndarray:
    """σ_k (v·σ) σ_k = (R_k v)·σ, R_k keeps component k and negates the others"""
    arr = np.asarray(vec, dtype=float)
    if pauli == "I":
        return arr.copy()
    keep = "XYZ".index(pauli)
    signs = -np.ones(3)
    signs[keep] = 1.0
    return signs * arr


@dataclass(frozen=True, eq=False)
class Filtration:
    """f^{μ,a,m} = μ(I + a m·σ), invertible for |a| < 1"""

    mu: float = 1.0
    a: float = 0.0
    m: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        is_valid, error_msg = validate_filtration(self.mu, self.a, self.m)
        if not is_valid:
            raise InvalidFiltration(error_msg)
        object.__setattr__(self, "m", _unit(self.m))

    def operator(self) -> np.ndarray:
        return self.mu * (PAULI_I + self.a * bloch_operator(self.m))

    @property
    def determinant(self) -> float:
        return self.mu ** 2 * (1.0 - self.a ** 2)

    def to_json(self) -> Dict:
        return {"mu": float(self.mu), "a": float(self.a), "m": [float(x) for x in self.m]}

    @classmethod
    def from_json(cls, data: Dict) -> "Filtration":
        return cls(mu=float(data.get("mu", 1.0)), a=float(data.get("a", 0.0)), m=parse_axis(data.get("m", "z")))


@dataclass(frozen=True, eq=False)
class UnitarySpec:
    """e^{iφ}(cos(θ/2) I − i sin(θ/2) n·σ)"""

    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    angle: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "axis", parse_axis(self.axis))

    def matrix(self) -> np.ndarray:
        half = 0.5 * self.angle
        u = np.cos(half) * PAULI_I - 1j * np.sin(half) * bloch_operator(self.axis)
        return np.exp(1j * self.phase) * u

    def inverse(self) -> "UnitarySpec":
        return UnitarySpec(axis=self.axis, angle=-self.angle, phase=-self.phase)

    def rotation(self) -> np.ndarray:
        """R with U (m·σ) U† = (R m)·σ"""
        u = self.matrix()
        return np.array([
            [0.5 * np.real(np.trace(si @ u @ sj @ dagger(u))) for sj in PAULIS]
            for si in PAULIS
        ])

    def to_json(self) -> Dict:
        return {"axis": [float(x) for x in self.axis], "angle": float(self.angle), "phase": float(self.phase)}

    @classmethod
    def from_json(cls, data: Dict) -> "UnitarySpec":
        return cls(axis=parse_axis(data.get("axis", "z")), angle=float(data.get("angle", 0.0)),
                   phase=float(data.get("phase", 0.0)))


@dataclass(frozen=True, eq=False)
class LocalOperation:
    """U f on one qubit"""

    unitary: UnitarySpec = field(default_factory=UnitarySpec)
    filtration: Filtration = field(default_factory=Filtration)

    def __post_init__(self):
        if not is_unitary(self.unitary.matrix(), LQCC_CONFIG["unitary_tol"]):
            raise InvalidFiltration("local unitary fails ‖U†U − I‖ ≤ tol")

    def operator(self) -> np.ndarray:
        return self.unitary.matrix() @ self.filtration.operator()

    def inverse(self) -> "LocalOperation":
        """(U f)⁻¹ = f⁻¹ U† = U† f^{1/(μ(1−a²)), −a, R m}"""
        f = self.filtration
        inv_filtration = Filtration(
            mu=1.0 / (f.mu * (1.0 - f.a ** 2)),
            a=-f.a,
            m=self.unitary.rotation() @ f.m,
        )
        return LocalOperation(unitary=self.unitary.inverse(), filtration=inv_filtration)

    def conjugated(self, pauli: str) -> "LocalOperation":
        """σ_k (U f) σ_k, again of the form U′ f′"""
        if pauli == "I":
            return self
        u, f = self.unitary, self.filtration
        return LocalOperation(
            unitary=UnitarySpec(axis=pauli_reflect(u.axis, pauli), angle=u.angle, phase=u.phase),
            filtration=Filtration(mu=f.mu, a=f.a, m=pauli_reflect(f.m, pauli)),
        )

    def to_json(self) -> Dict:
        return {"unitary": self.unitary.to_json(), "filtration": self.filtration.to_json()}

    @classmethod
    def from_json(cls, data: Dict) -> "LocalOperation":
        return cls(
            unitary=UnitarySpec.from_json(data.get("unitary", {})),
            filtration=Filtration.from_json(data.get("filtration", {})),
        )


@dataclass(frozen=True, eq=False)
class LqccPair:
    op_a: LocalOperation = field(default_factory=LocalOperation)
    op_b: LocalOperation = field(default_factory=LocalOperation)

    def operator(self) -> np.ndarray:
        return tensor(self.op_a.operator(), self.op_b.operator())

    def to_json(self) -> Dict:
        return {"A": self.op_a.to_json(), "B": self.op_b.to_json()}

    @classmethod
    def from_json(cls, data: Dict) -> "LqccPair":
        op_a = LocalOperation.from_json(data.get("A", {}))
        op_b = LocalOperation.from_json(data["B"]) if "B" in data else op_a
        return cls(op_a=op_a, op_b=op_b)

    @classmethod
    def symmetric(cls, op: LocalOperation, frame: CanonicalFrame = IDENTITY_FRAME) -> "LqccPair":
        """The pair that reads A = B = op once the state is in the singlet frame"""
        return cls(op_a=op.conjugated(frame.label), op_b=op)


IDENTITY_PAIR = LqccPair()


def lqcc_inverse(pair: LqccPair) -> LqccPair:
    return LqccPair(op_a=pair.op_a.inverse(), op_b=pair.op_b.inverse())


def canonical_pair(pair: LqccPair, frame: CanonicalFrame) -> LqccPair:
    """
    The pair as it acts on the singlet-frame state

    With ρ = (σ_k⊗I) ρ_c (σ_k⊗I), (A⊗B) ρ (A⊗B)† is the relabeled image of
    (σ_k A σ_k ⊗ B) ρ_c (σ_k A σ_k ⊗ B)†.
    """
    return LqccPair(op_a=pair.op_a.conjugated(frame.label), op_b=pair.op_b)


def pair_is_symmetric(pair: LqccPair, tol: float = LQCC_CONFIG["symmetric_pair_tol"]) -> bool:
    """A = B up to a global phase, within tol in Frobenius norm"""
    a, b = pair.op_a.operator(), pair.op_b.operator()
    overlap = np.trace(dagger(b) @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 0.0 else 1.0
    return frobenius(a - phase * b) <= tol * max(frobenius(a), 1.0)


def guarantee_applies(pair: LqccPair, frame: CanonicalFrame = IDENTITY_FRAME) -> bool:
    """A = B in the singlet frame of the decomposed state"""
    return pair_is_symmetric(canonical_pair(pair, frame))


def _trace_weight(k: np.ndarray, ket: np.ndarray) -> float:
    """‖K|v⟩‖² = ⟨v|K†K|v⟩"""
    return float(np.real(np.vdot(ket, dagger(k) @ k @ ket)))


def apply_lqcc(rho: np.ndarray, pair: LqccPair) -> Tuple[np.ndarray, float]:
    """
    Transform a density matrix by a local pair

    Returns:
        Tuple of (normalized ρ′, t(ρ) = tr((A⊗B)ρ(A⊗B)†))

    Raises:
        VanishingNorm: if t(ρ) ≤ LQCC_CONFIG["vanishing_norm"]
    """
    k = pair.operator()
    out = k @ np.asarray(rho, dtype=complex) @ dagger(k)
    norm = float(np.real(np.trace(out)))
    if norm <= LQCC_CONFIG["vanishing_norm"]:
        raise VanishingNorm(f"t(ρ) = {norm:.3e}")
    out = out / norm
    return 0.5 * (out + dagger(out)), norm


def predict_concurrence(rho: np.ndarray, pair: LqccPair) -> float:
    """C(ρ′) = μ²ν²(1 − a²)(1 − b²)/t(ρ) · C(ρ)"""
    _, norm = apply_lqcc(rho, pair)
    factor = pair.op_a.filtration.determinant * pair.op_b.filtration.determinant
    return factor / norm * wootters_concurrence(rho).value


@dataclass(frozen=True, eq=False)
class TransformedDecomposition:
    """λ′ ρ_s′ + (1 − λ′)|ψ′⟩⟨ψ′|; ρ_s′ is generally not Bell-diagonal"""

    lam: float
    rho_s: np.ndarray
    pure_part: np.ndarray
    ensemble: Tuple[EnsembleMember, ...]
    norm: float
    pair: LqccPair
    source: Optional[LSDecomposition] = None

    def rho_s_matrix(self) -> np.ndarray:
        return self.rho_s

    def to_json(self) -> Dict:
        return {
            "lambda": float(self.lam),
            "rho_s": to_pairs(self.rho_s),
            "pure_part": to_pairs(self.pure_part),
            "ensemble": [m.to_json() for m in self.ensemble],
            "norm": float(self.norm),
            "pair": self.pair.to_json(),
        }


def transform_decomposition(d: LSDecomposition, pair: LqccPair) -> TransformedDecomposition:
    """
    Carry a decomposition through a local pair

    Λ′_α = t(P_α)/t(ρ)·Λ_α with kets K|e_α f_α⟩ renormalized; the pure part becomes
    K|ψ⟩/‖K|ψ⟩‖ with weight (1 − λ)t(ψ)/t(ρ).

    Raises:
        VanishingNorm: if the pair annihilates the state
    """
    rho = reconstruct(d)
    k = pair.operator()
    _, norm = apply_lqcc(rho, pair)

    members = []
    for member in d.ensemble:
        t_p = _trace_weight(k, member.ket)
        new_ket = k @ member.ket
        new_ket = new_ket / np.sqrt(t_p)
        members.append(EnsembleMember(weight=member.weight * t_p / norm, ket=new_ket, label=member.label))

    t_psi = _trace_weight(k, d.pure_part)
    if t_psi <= LQCC_CONFIG["vanishing_norm"]:
        raise VanishingNorm(f"t(ψ) = {t_psi:.3e}")
    pure = k @ d.pure_part / np.sqrt(t_psi)
    weight_entangled = (1.0 - d.lam) * t_psi / norm
    lam = 1.0 - weight_entangled

    if lam > LQCC_CONFIG["vanishing_norm"]:
        rho_s, t_s = apply_lqcc(d.rho_s_matrix(), pair)
    else:
        rho_s, t_s = d.rho_s_matrix(), 1.0
    log_debug(f"LQCC transform: t(rho) = {norm:.6g}, t(rho_s) = {t_s:.6g}, lambda' = {lam:.12g}")
    return TransformedDecomposition(
        lam=lam,
        rho_s=rho_s,
        pure_part=pure,
        ensemble=tuple(members),
        norm=norm,
        pair=pair,
        source=d,
    )


def trace_weights(d: LSDecomposition, pair: LqccPair) -> Dict:
    """t(ρ), t(ρ_s), t(P_α) and t(ψ) for a decomposition"""
    k = pair.operator()
    _, t_rho = apply_lqcc(reconstruct(d), pair)
    t_rho_s = float(np.real(np.trace(k @ d.rho_s_matrix() @ dagger(k))))
    return {
        "t_rho": t_rho,
        "t_rho_s": t_rho_s,
        "t_members": [_trace_weight(k, m.ket) for m in d.ensemble],
        "t_pure": _trace_weight(k, d.pure_part),
    }


def scaled_inverse_check(d: LSDecomposition, pair: LqccPair) -> Dict:
    """
    ⟨e′|ρ′_α⁻¹|e′⟩ against t(ρ)/t(P_α)·⟨e|ρ_α⁻¹|e⟩ for every member α

    ρ_α = Λ_α P_α + (1 − λ)|ψ⟩⟨ψ|, primes denote the transformed quantities.
    """
    transformed = transform_decomposition(d, pair)
    k = pair.operator()
    rows = []
    for member, new_member in zip(d.ensemble, transformed.ensemble):
        if member.weight <= 0.0:
            continue
        rho_alpha = member.weight * projector(member.ket) + (1.0 - d.lam) * projector(d.pure_part)
        new_alpha = (new_member.weight * projector(new_member.ket)
                     + (1.0 - transformed.lam) * projector(transformed.pure_part))
        before = float(np.real(_inverse_elements(rho_alpha, [member.ket])[0, 0]))
        after = float(np.real(_inverse_elements(new_alpha, [new_member.ket])[0, 0]))
        predicted = transformed.norm / _trace_weight(k, member.ket) * before
        rows.append({"label": member.label, "measured": after, "predicted": predicted,
                     "residual": abs(after - predicted)})
    return {"rows": rows, "worst_residual": max((r["residual"] for r in rows), default=0.0)}


def member_weight_gaps(d: LSDecomposition, pair: LqccPair) -> Dict[str, float]:
    """
    Relative gap |t(P_i) − t(P_{i+1})| / max for the two product kets of each octahedron vertex

    The maximality argument for transformed decompositions needs every gap to vanish.
    """
    k = pair.operator()
    gaps = {}
    for first, second in zip(d.ensemble[0::2], d.ensemble[1::2]):
        if first.weight <= 0.0 and second.weight <= 0.0:
            continue
        t1, t2 = _trace_weight(k, first.ket), _trace_weight(k, second.ket)
        gaps[f"{first.label}|{second.label}"] = abs(t1 - t2) / max(t1, t2)
    return gaps


def verify_transformed_optimality(
    transformed: TransformedDecomposition,
    strict: bool = False,
) -> VerificationReport:
    """
    Re-run the maximality checks on a transformed decomposition

    The outcome is guaranteed only when A = B in the singlet frame of the source
    state; otherwise the report is informational.
    """
    rho = reconstruct(transformed)
    report = verify_bsa(rho, transformed, strict=strict)
    frame = transformed.source.frame if transformed.source is not None else IDENTITY_FRAME
    symmetric = guarantee_applies(transformed.pair, frame)
    if not symmetric:
        log_info(f"A != B in the singlet frame: optimality report is informational (passed = {report.passed})")
    notes = list(report.notes)
    notes.append("A = B in the singlet frame: maximality guaranteed" if symmetric
                 else "A != B in the singlet frame: outcome recorded, not guaranteed")
    if transformed.source is not None:
        worst_gap = max(member_weight_gaps(transformed.source, transformed.pair).values(), default=0.0)
        notes.append(f"largest t(P_i) vs t(P_i+1) gap: {worst_gap:.3e}")
    return VerificationReport(
        lemma1_checks=report.lemma1_checks,
        pair_checks=report.pair_checks,
        rank_check=report.rank_check,
        reconstruction_residual=report.reconstruction_residual,
        min_subtraction_eigenvalue=report.min_subtraction_eigenvalue,
        tolerance=report.tolerance,
        passed=report.passed,
        informational=not symmetric,
        notes=notes,
    )
