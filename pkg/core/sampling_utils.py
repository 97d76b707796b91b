"""
Seeded random generators for states, local unitaries and LQCC pairs
"""

from typing import List, Optional

import numpy as np

try:
    from ..config import DEFAULT_SEED
    from .bell_utils import BELL_VERTICES, SINGLET_ID, BDState, frame_for
    from .lqcc_utils import Filtration, LocalOperation, LqccPair, UnitarySpec
    from .matrix_utils import dagger
except ImportError:
    from config import DEFAULT_SEED
    from core.bell_utils import BELL_VERTICES, SINGLET_ID, BDState, frame_for
    from core.lqcc_utils import Filtration, LocalOperation, LqccPair, UnitarySpec
    from core.matrix_utils import dagger

SINGLET_FACE = np.array([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_bd_state(rng: np.random.Generator) -> BDState:
    """Uniform over the positivity tetrahedron"""
    return BDState.from_p(rng.dirichlet(np.ones(4)))


def random_entangled_bd(rng: np.random.Generator, tetra_id: int = SINGLET_ID) -> BDState:
    """
    Uniform over the entangled tetrahedron spanned by a Bell vertex and the
    octahedron face opposite to it
    """
    weights = rng.dirichlet(np.ones(4))
    t = weights[0] * BELL_VERTICES[SINGLET_ID] + weights[1:] @ SINGLET_FACE
    state = BDState.from_t(t)
    if tetra_id == SINGLET_ID:
        return state
    return frame_for(tetra_id).map_state(state)


def random_boundary_entangled_bd(rng: np.random.Generator) -> BDState:
    """Singlet-tetrahedron state on the positivity boundary: one of p1..p3 is zero"""
    p4 = rng.uniform(0.55, 0.95)
    dropped = int(rng.integers(3))
    live = [k for k in range(3) if k != dropped]
    p = np.zeros(4)
    p[live] = rng.dirichlet(np.ones(2)) * (1.0 - p4)
    p[3] = p4
    return BDState.from_p(p / np.sum(p))


def random_separable_bd(rng: np.random.Generator) -> BDState:
    """Uniform over the octahedron |t1| + |t2| + |t3| ≤ 1"""
    while True:
        t = rng.uniform(-1.0, 1.0, size=3)
        if np.sum(np.abs(t)) <= 1.0:
            return BDState.from_t(t)


def random_density_matrix(rng: np.random.Generator, rank: int = 4) -> np.ndarray:
    """Ginibre ensemble G G†/tr"""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ dagger(g)
    return rho / np.real(np.trace(rho))


def random_unitary_spec(rng: np.random.Generator) -> UnitarySpec:
    return UnitarySpec(
        axis=random_unit_vector(rng),
        angle=float(rng.uniform(0.0, 2.0 * np.pi)),
        phase=float(rng.uniform(0.0, 2.0 * np.pi)),
    )


def random_local_operation(rng: np.random.Generator, max_strength: float = 0.9) -> LocalOperation:
    return LocalOperation(
        unitary=random_unitary_spec(rng),
        filtration=Filtration(
            mu=float(rng.uniform(0.5, 2.0)),
            a=float(rng.uniform(-max_strength, max_strength)),
            m=random_unit_vector(rng),
        ),
    )


def random_lqcc_pair(rng: np.random.Generator, max_strength: float = 0.9, symmetric: bool = False) -> LqccPair:
    op_a = random_local_operation(rng, max_strength)
    if symmetric:
        return LqccPair.symmetric(op_a)
    return LqccPair(op_a=op_a, op_b=random_local_operation(rng, max_strength))


def entangled_sample(rng: np.random.Generator, n: int, all_tetrahedra: bool = True) -> List[BDState]:
    """n entangled states, cycling through the four Bell tetrahedra when all_tetrahedra is set"""
    ids = [k % 4 if all_tetrahedra else SINGLET_ID for k in range(n)]
    return [random_entangled_bd(rng, tetra_id) for tetra_id in ids]
