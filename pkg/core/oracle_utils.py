"""
Numerical oracles for the closed forms

bsa_numeric maximizes λ over pure parts ψ by random-restart coordinate search,
reading the best λ for a fixed ψ from a feasibility bisection. The relative-entropy
oracle minimizes over the separable octahedron with a grid start and Nelder–Mead.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

try:
    from ..config import DEFAULT_SEED, ORACLE_CONFIG, SUCCESS_MESSAGES
    from ..logger import log_debug, log_info, log_warning
    from .bell_utils import BDState
    from .exceptions import BsaLabError, NonConvergence, NotDensityMatrix
    from .matrix_utils import dagger, herm_eigen, min_eigenvalue, partial_transpose_b, projector, to_pairs
    from .measure_utils import relative_entropy_bd
    from .validation_utils import tetrahedron_margins, validate_density_matrix, validate_search_config
except ImportError:
    from config import DEFAULT_SEED, ORACLE_CONFIG, SUCCESS_MESSAGES
    from logger import log_debug, log_info, log_warning
    from core.bell_utils import BDState
    from core.exceptions import BsaLabError, NonConvergence, NotDensityMatrix
    from core.matrix_utils import dagger, herm_eigen, min_eigenvalue, partial_transpose_b, projector, to_pairs
    from core.measure_utils import relative_entropy_bd
    from core.validation_utils import tetrahedron_margins, validate_density_matrix, validate_search_config

INFEASIBLE = -1.0


@dataclass(frozen=True)
class BsaSearchConfig:
    restarts: int = ORACLE_CONFIG["restarts"]
    max_iters: int = ORACLE_CONFIG["max_iters"]
    step_shrink: float = ORACLE_CONFIG["step_shrink"]
    seed: int = DEFAULT_SEED
    lambda_tol: float = ORACLE_CONFIG["lambda_tol"]
    initial_step: float = ORACLE_CONFIG["initial_step"]
    min_step: float = ORACLE_CONFIG["min_step"]
    bisection_depth: int = ORACLE_CONFIG["bisection_depth"]
    lambda_grid: int = ORACLE_CONFIG["lambda_grid"]
    workers: int = ORACLE_CONFIG["workers"]
    seed_top_eigvec: bool = ORACLE_CONFIG["seed_top_eigvec"]

    def __post_init__(self):
        is_valid, error_msg = validate_search_config(self.restarts, self.lambda_tol, self.max_iters)
        if not is_valid:
            raise BsaLabError(error_msg)

    def to_json(self) -> Dict:
        return {
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "step_shrink": self.step_shrink,
            "seed": self.seed,
            "lambda_tol": self.lambda_tol,
            "seed_top_eigvec": self.seed_top_eigvec,
        }


@dataclass(frozen=True, eq=False)
class OracleResult:
    lambda_star: float
    sigma_star: np.ndarray
    psi_star: np.ndarray
    objective_history: List[float]
    best_restart: int
    seed: int
    evaluations: int = 0

    def reconstruct(self) -> np.ndarray:
        return self.lambda_star * self.sigma_star + (1.0 - self.lambda_star) * projector(self.psi_star)

    def certificate(self) -> Dict[str, float]:
        return {
            "min_eigenvalue": min_eigenvalue(self.sigma_star, solver=ORACLE_CONFIG["eigensolver"]),
            "min_pt_eigenvalue": min_eigenvalue(partial_transpose_b(self.sigma_star), solver=ORACLE_CONFIG["eigensolver"]),
        }

    def to_json(self) -> Dict:
        return {
            "lambda_star": float(self.lambda_star),
            "sigma_star": to_pairs(self.sigma_star),
            "psi_star": to_pairs(self.psi_star),
            "objective_history": [float(x) for x in self.objective_history],
            "best_restart": self.best_restart,
            "seed": self.seed,
            "evaluations": self.evaluations,
            "certificate": self.certificate(),
        }


@dataclass
class _RestartOutcome:
    index: int
    best: float
    params: np.ndarray
    history: List[float] = field(default_factory=list)
    evaluations: int = 0


def params_to_ket(x: np.ndarray) -> np.ndarray:
    """8 reals → unit ket with its first nonzero amplitude real and positive"""
    v = np.asarray(x[0::2], dtype=float) + 1j * np.asarray(x[1::2], dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        v, norm = np.array([1, 0, 0, 0], dtype=complex), 1.0
    v = v / norm
    lead = int(np.argmax(np.abs(v) > 1e-12))
    return v * np.exp(-1j * np.angle(v[lead]))


def ket_to_params(ket: np.ndarray) -> np.ndarray:
    x = np.empty(8)
    x[0::2] = np.real(ket)
    x[1::2] = np.imag(ket)
    return x


class _Feasibility:
    """PSD and PPT test of ρ − (1 − λ)|ψ⟩⟨ψ|, which is λσ"""

    def __init__(self, rho: np.ndarray, cfg: BsaSearchConfig):
        self.rho = rho
        self.cfg = cfg
        self.tol = ORACLE_CONFIG["feasibility_tol"]
        self.solver = ORACLE_CONFIG["eigensolver"]
        self.evaluations = 0

    def violation(self, p: np.ndarray, lam: float) -> float:
        """How far λσ is from PSD and PPT; 0.0 exactly when feasible"""
        self.evaluations += 1
        x = self.rho - (1.0 - lam) * p
        psd = -min_eigenvalue(x, solver=self.solver) - self.tol
        ppt = -min_eigenvalue(partial_transpose_b(x), solver=self.solver) - self.tol
        return max(0.0, psd, ppt)

    def __call__(self, p: np.ndarray, lam: float) -> bool:
        self.evaluations += 1
        x = self.rho - (1.0 - lam) * p
        if min_eigenvalue(x, solver=self.solver) < -self.tol:
            return False
        return min_eigenvalue(partial_transpose_b(x), solver=self.solver) >= -self.tol

    def max_lambda(self, psi: np.ndarray, floor: Optional[float] = None) -> float:
        """
        Largest feasible λ for fixed ψ

        The feasible set is an interval. With a floor only λ ≥ floor is searched
        and a ψ infeasible at the floor returns INFEASIBLE after one test. Without
        a floor a ψ with no feasible grid point scores INFEASIBLE minus its smallest
        violation, so the search can climb towards the feasible region.
        """
        p = projector(psi)
        if floor is not None:
            if not self(p, floor):
                return INFEASIBLE
            if self(p, 1.0):
                return 1.0
            lo, hi = floor, 1.0
        else:
            grid = np.linspace(1.0, 0.0, self.cfg.lambda_grid)
            smallest = np.inf
            for k, lam in enumerate(grid):
                gap = self.violation(p, lam)
                if gap == 0.0:
                    break
                smallest = min(smallest, gap)
            else:
                return INFEASIBLE - smallest
            if k == 0:
                return 1.0
            lo, hi = float(grid[k]), float(grid[k - 1])
        for _ in range(self.cfg.bisection_depth):
            mid = 0.5 * (lo + hi)
            if self(p, mid):
                lo = mid
            else:
                hi = mid
        return lo


def _run_restart(rho: np.ndarray, cfg: BsaSearchConfig, index: int, start: Optional[np.ndarray]) -> _RestartOutcome:
    rng = np.random.default_rng([cfg.seed, index])
    feasible = _Feasibility(rho, cfg)
    x = start.copy() if start is not None else rng.normal(size=8)
    best = feasible.max_lambda(params_to_ket(x))
    history = [best]
    step = cfg.initial_step
    threshold = 1e-6 * cfg.lambda_tol
    for _ in range(cfg.max_iters):
        if step < cfg.min_step or best >= 1.0:
            break
        improved = False
        floor = min(best + threshold, 1.0) if best > INFEASIBLE else None
        for k in rng.permutation(8):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[k] += sign * step
                value = feasible.max_lambda(params_to_ket(cand), floor=floor)
                if value > best + threshold:
                    x, best, improved = cand, value, True
                    break
            if improved:
                break
        if not improved:
            step *= cfg.step_shrink
        history.append(best)
    return _RestartOutcome(index=index, best=best, params=x, history=history, evaluations=feasible.evaluations)


def bsa_numeric(rho: np.ndarray, cfg: Optional[BsaSearchConfig] = None) -> OracleResult:
    """
    Maximal λ in ρ = λσ + (1 − λ)|ψ⟩⟨ψ| with σ PSD and PPT

    With cfg.seed_top_eigvec restart 0 starts from the top eigenvector of ρ; every
    other restart starts from seeded Gaussian parameters. Restarts are independent;
    the best λ wins, ties to the lower index. History entries are clipped at
    INFEASIBLE while a restart is still outside the feasible region.

    Raises:
        NotDensityMatrix: if rho fails validation
        NonConvergence: if no restart found a feasible point
    """
    cfg = cfg or BsaSearchConfig()
    is_valid, error_msg = validate_density_matrix(rho)
    if not is_valid:
        raise NotDensityMatrix(error_msg)
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + dagger(rho))

    top = herm_eigen(rho, solver=ORACLE_CONFIG["eigensolver"]).eigenvectors[:, -1]
    top_ket = params_to_ket(ket_to_params(top))
    feasible = _Feasibility(rho, cfg)
    if feasible(projector(top_ket), 1.0):
        log_info("Oracle: input is PPT, lambda* = 1")
        return OracleResult(
            lambda_star=1.0, sigma_star=rho, psi_star=top_ket, objective_history=[1.0],
            best_restart=0, seed=cfg.seed, evaluations=feasible.evaluations,
        )

    starts: List[Optional[np.ndarray]] = [None] * cfg.restarts
    if cfg.seed_top_eigvec:
        starts[0] = ket_to_params(top_ket)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(lambda i: _run_restart(rho, cfg, i, starts[i]), range(cfg.restarts)))
    else:
        outcomes = [_run_restart(rho, cfg, i, starts[i]) for i in range(cfg.restarts)]
    outcomes.sort(key=lambda o: o.index)

    history: List[float] = []
    running = INFEASIBLE
    for outcome in outcomes:
        for value in outcome.history:
            running = max(running, value)
            history.append(running)
    winner = max(outcomes, key=lambda o: (o.best, -o.index))
    if winner.best <= INFEASIBLE:
        raise NonConvergence(f"no feasible point in {cfg.restarts} restarts")

    psi = params_to_ket(winner.params)
    lam = winner.best
    if lam > 0.0:
        sigma = (rho - (1.0 - lam) * projector(psi)) / lam
        sigma = 0.5 * (sigma + dagger(sigma))
    else:
        sigma = np.eye(4, dtype=complex) / 4.0
    log_info(f"{SUCCESS_MESSAGES['oracle_complete']}: lambda* = {lam:.10g} (restart {winner.index})")
    return OracleResult(
        lambda_star=lam,
        sigma_star=sigma,
        psi_star=psi,
        objective_history=history,
        best_restart=winner.index,
        seed=cfg.seed,
        evaluations=sum(o.evaluations for o in outcomes) + feasible.evaluations,
    )


def project_l1_ball(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection onto {x : |x1| + |x2| + |x3| ≤ radius}"""
    v = np.asarray(v, dtype=float)
    if np.sum(np.abs(v)) <= radius:
        return v.copy()
    u = np.sort(np.abs(v))[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, u.size + 1)
    k = int(np.nonzero(u * idx > css - radius)[0][-1])
    theta = (css[k] - radius) / (k + 1.0)
    return np.sign(v) * np.clip(np.abs(v) - theta, 0.0, None)


def _entropy_to(p: np.ndarray, t: np.ndarray) -> float:
    q = np.clip(tetrahedron_margins(t) / 4.0, 0.0, None)
    result = relative_entropy_bd(p, q)
    return result.value if result.support_ok else ORACLE_CONFIG["penalty"]


def rel_entropy_min_numeric(s: BDState, grid_n: int = ORACLE_CONFIG["grid_n"]) -> Tuple[BDState, float]:
    """
    Minimize S(ρ‖σ) over separable Bell-diagonal σ

    A grid of grid_n points per axis seeds Nelder–Mead on the objective composed
    with the projection onto the octahedron plus a quadratic penalty on the
    projection distance.

    Returns:
        Tuple of (argmin state, minimal value in nats)
    """
    if s.separable:
        return s, 0.0
    p = s.p
    axis = np.linspace(-1.0, 1.0, grid_n)
    best_t, best_value = None, np.inf
    for t1 in axis:
        for t2 in axis:
            for t3 in axis:
                t = np.array([t1, t2, t3])
                if np.sum(np.abs(t)) > 1.0:
                    continue
                value = _entropy_to(p, t)
                if value < best_value:
                    best_t, best_value = t, value
    log_debug(f"Grid minimum {best_value:.6g} at t = {best_t.tolist()}")

    penalty = ORACLE_CONFIG["penalty"]

    def objective(x: np.ndarray) -> float:
        proj = project_l1_ball(x)
        return _entropy_to(p, proj) + penalty * float(np.sum((x - proj) ** 2))

    refined = minimize(
        objective,
        best_t,
        method="Nelder-Mead",
        options={
            "xatol": ORACLE_CONFIG["nelder_mead_xatol"],
            "fatol": ORACLE_CONFIG["nelder_mead_fatol"],
            "maxiter": ORACLE_CONFIG["nelder_mead_maxiter"],
        },
    )
    if not refined.success:
        log_warning(f"Nelder-Mead stopped early: {refined.message}")
    t_star = project_l1_ball(refined.x)
    value = _entropy_to(p, t_star)
    if value > best_value:
        t_star, value = best_t, best_value
    return BDState.from_t(t_star), float(value)
