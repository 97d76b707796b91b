"""
Input validation utilities for the Bell-diagonal separability lab
"""

from typing import Dict, Sequence, Tuple

import numpy as np

try:
    from ..config import TOLERANCES, LQCC_CONFIG, MATRIX_CONFIG
    from ..logger import log_debug, log_warning
except ImportError:
    from config import TOLERANCES, LQCC_CONFIG, MATRIX_CONFIG
    from logger import log_debug, log_warning

TETRAHEDRON_INEQUALITIES = (
    "1+t1-t2+t3 >= 0",
    "1-t1+t2+t3 >= 0",
    "1+t1+t2-t3 >= 0",
    "1-t1-t2-t3 >= 0",
)


def tetrahedron_margins(t: Sequence[float]) -> np.ndarray:
    """Left-hand sides of the four positivity inequalities; entry i equals 4·p_i"""
    t1, t2, t3 = np.asarray(t, dtype=float)
    return np.array([
        1.0 + t1 - t2 + t3,
        1.0 - t1 + t2 + t3,
        1.0 + t1 + t2 - t3,
        1.0 - t1 - t2 - t3,
    ])


def validate_prob_vec(p: Sequence[float], tol: float = TOLERANCES["prob"]) -> Tuple[bool, str]:
    """
    Validate a Bell-weight probability vector

    Args:
        p: candidate (p1, p2, p3, p4)
        tol: absolute tolerance on bounds and normalization

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        arr = np.asarray(p, dtype=float)
        if arr.shape != (4,):
            log_warning(f"Probability validation failed: shape {arr.shape}")
            return False, "Probability vector must have exactly 4 entries"

        if not np.all(np.isfinite(arr)):
            log_warning("Probability validation failed: non-finite entry")
            return False, "Probability entries must be finite"

        for idx, value in enumerate(arr):
            if value < -tol or value > 1.0 + tol:
                log_warning(f"Probability validation failed: p{idx + 1} = {value}")
                return False, f"p{idx + 1} = {value} lies outside [0, 1]"

        total = float(np.sum(arr))
        if abs(total - 1.0) > tol:
            log_warning(f"Probability validation failed: sum {total}")
            return False, f"Probabilities sum to {total}, not 1"

        log_debug("Probability validation passed")
        return True, ""
    except (TypeError, ValueError) as e:
        log_warning(f"Error during probability validation: {e}")
        return False, f"Validation error: {str(e)}"


def validate_t_vec(t: Sequence[float], tol: float = TOLERANCES["physical"]) -> Tuple[bool, str]:
    """
    Validate a correlation vector against the positivity tetrahedron

    Returns:
        Tuple of (is_valid, error_message); the message names the violated inequality
    """
    try:
        arr = np.asarray(t, dtype=float)
        if arr.shape != (3,):
            log_warning(f"Correlation validation failed: shape {arr.shape}")
            return False, "Correlation vector must have exactly 3 entries"

        if not np.all(np.isfinite(arr)):
            log_warning("Correlation validation failed: non-finite entry")
            return False, "Correlation entries must be finite"

        margins = tetrahedron_margins(arr)
        for idx, margin in enumerate(margins):
            if margin < -tol:
                log_warning(f"Correlation validation failed: inequality {idx + 1} margin {margin}")
                return False, f"Positivity inequality {idx + 1} ({TETRAHEDRON_INEQUALITIES[idx]}) violated by {-margin:.3e}"

        log_debug("Correlation validation passed")
        return True, ""
    except (TypeError, ValueError) as e:
        log_warning(f"Error during correlation validation: {e}")
        return False, f"Validation error: {str(e)}"


def validate_density_matrix(
    m: Sequence,
    psd_tol: float = TOLERANCES["density_psd"],
    trace_tol: float = TOLERANCES["density_trace"],
) -> Tuple[bool, str]:
    """
    Validate a two-qubit density matrix

    Returns:
        Tuple of (is_valid, error_message); the message names the offending eigenvalue
    """
    try:
        arr = np.asarray(m, dtype=complex)
        if arr.shape != (4, 4):
            log_warning(f"Density validation failed: shape {arr.shape}")
            return False, "Density matrix must be 4x4"

        if not np.all(np.isfinite(arr)):
            log_warning("Density validation failed: non-finite entry")
            return False, "Density matrix entries must be finite"

        norm = np.linalg.norm(arr)
        skew = np.linalg.norm(arr - arr.conj().T)
        if skew > MATRIX_CONFIG["hermitian_tol"] * max(norm, 1.0):
            log_warning(f"Density validation failed: skew {skew}")
            return False, f"Density matrix is not Hermitian (‖m − m†‖ = {skew:.3e})"

        trace = complex(np.trace(arr))
        if abs(trace - 1.0) > trace_tol:
            log_warning(f"Density validation failed: trace {trace}")
            return False, f"Density matrix trace is {trace.real:.12g}, not 1"

        evals = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
        if evals[0] < -psd_tol:
            log_warning(f"Density validation failed: eigenvalue {evals[0]}")
            return False, f"Density matrix has negative eigenvalue {evals[0]:.3e}"

        log_debug("Density validation passed")
        return True, ""
    except (TypeError, ValueError) as e:
        log_warning(f"Error during density validation: {e}")
        return False, f"Validation error: {str(e)}"


def validate_filtration(mu: float, a: float, m: Sequence[float]) -> Tuple[bool, str]:
    """
    Validate filtration parameters μ(I + a m·σ)

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        if not np.isfinite(mu) or mu <= 0.0:
            log_warning(f"Filtration validation failed: mu = {mu}")
            return False, f"Filtration scale mu must be positive, got {mu}"

        if not np.isfinite(a) or abs(a) >= LQCC_CONFIG["max_filter_strength"]:
            log_warning(f"Filtration validation failed: a = {a}")
            return False, f"Filtration strength |a| must be < 1, got {a}"

        axis = np.asarray(m, dtype=float)
        if axis.shape != (3,) or not np.all(np.isfinite(axis)):
            log_warning("Filtration validation failed: malformed axis")
            return False, "Filtration axis must be a finite real 3-vector"

        if np.linalg.norm(axis) == 0.0:
            log_warning("Filtration validation failed: zero axis")
            return False, "Filtration axis must be nonzero"

        log_debug("Filtration validation passed")
        return True, ""
    except (TypeError, ValueError) as e:
        log_warning(f"Error during filtration validation: {e}")
        return False, f"Validation error: {str(e)}"


def validate_state_spec(spec: Dict) -> Tuple[bool, str]:
    """
    Validate the structure of a state specification

    Accepted forms: {"p": [4 reals]}, {"t": [3 reals]}, {"matrix": rows of [re, im]}

    Returns:
        Tuple of (is_valid, error_message)
    """
    try:
        if not isinstance(spec, dict):
            log_warning("State spec validation failed: not a dictionary")
            return False, "State specification must be a JSON object"

        keys = [key for key in ("p", "t", "matrix") if key in spec]
        if len(keys) != 1:
            log_warning(f"State spec validation failed: keys {sorted(spec)}")
            return False, "State specification needs exactly one of 'p', 't', 'matrix'"

        key = keys[0]
        if key == "p":
            return validate_prob_vec(spec["p"])
        if key == "t":
            return validate_t_vec(spec["t"])

        rows = spec["matrix"]
        if not isinstance(rows, list) or len(rows) != 4:
            return False, "Matrix must have 4 rows"
        for row in rows:
            if not isinstance(row, list) or len(row) != 4:
                return False, "Each matrix row must have 4 entries"
            for entry in row:
                if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                    return False, "Matrix entries must be [re, im] pairs"
        return validate_density_matrix(matrix_from_pairs(rows))
    except (TypeError, ValueError) as e:
        log_warning(f"Error during state spec validation: {e}")
        return False, f"Validation error: {str(e)}"


def matrix_from_pairs(rows: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    """Convert rows of [re, im] pairs to a complex array"""
    arr = np.asarray(rows, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def validate_search_config(restarts: int, lambda_tol: float, max_iters: int) -> Tuple[bool, str]:
    """
    Validate oracle search settings

    Returns:
        Tuple of (is_valid, error_message)
    """
    if int(restarts) < 1:
        log_warning(f"Search config validation failed: restarts = {restarts}")
        return False, "restarts must be at least 1"
    if not lambda_tol > 0.0:
        log_warning(f"Search config validation failed: lambda_tol = {lambda_tol}")
        return False, "lambda_tol must be positive"
    if int(max_iters) < 1:
        log_warning(f"Search config validation failed: max_iters = {max_iters}")
        return False, "max_iters must be at least 1"
    return True, ""
