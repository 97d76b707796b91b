"""
Configuration settings for the Bell-diagonal separability lab
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent

TOOL_NAME = "bsa-lab"
TOOL_VERSION = "1.0.0"

SEED_ENV_VAR = "BSA_LAB_SEED"
DEFAULT_SEED = int(os.environ.get(SEED_ENV_VAR, "20020101"))

MATRIX_CONFIG = {
    "eigensolver": "jacobi",
    "jacobi_max_sweeps": 50,
    "jacobi_tol": 1e-14,
    "hermitian_tol": 1e-10,
    "rank_tol": 1e-9,
    "clamp_window": 1e-10,
    "concurrence_cut": 1e-13,
    "ket_norm_tol": 1e-12,
}

TOLERANCES = {
    "prob": 1e-12,
    "physical": 1e-12,
    "separable": 1e-12,
    "face": 1e-10,
    "collinear": 1e-12,
    "reconstruction": 1e-12,
    "density_psd": 1e-10,
    "density_trace": 1e-10,
    "bell_offdiag": 1e-10,
    "degenerate_vertex": 1e-12,
}

VERIFY_CONFIG = {
    "range_tol": 1e-8,
    "residual_tol": 1e-8,
    "subtraction_clamp": 1e-9,
    "reconstruction_tol": 1e-10,
    "condition_tol": 1e-8,
    "nu_max": 10.0,
    "nu_grid": 201,
    "strict_factor": 0.1,
    "test_samples": 300,
}

LQCC_CONFIG = {
    "max_filter_strength": 1.0 - 1e-9,
    "vanishing_norm": 1e-12,
    "unitary_tol": 1e-12,
    "symmetric_pair_tol": 1e-12,
}

ORACLE_CONFIG = {
    "restarts": 32,
    "max_iters": 400,
    "step_shrink": 0.5,
    "initial_step": 0.5,
    "min_step": 1e-7,
    "lambda_tol": 1e-6,
    "bisection_depth": 40,
    "feasibility_tol": 1e-12,
    "workers": 1,
    "grid_n": 21,
    "nelder_mead_xatol": 1e-10,
    "nelder_mead_fatol": 1e-14,
    "nelder_mead_maxiter": 4000,
    "lambda_grid": 33,
    "eigensolver": "lapack",
    "penalty": 1e6,
    "seed_top_eigvec": True,
    "sweep_restarts": 8,
}

GEOMETRY_CONFIG = {
    "tetrahedron_vertices": {
        "phi_plus": (1.0, -1.0, 1.0),
        "phi_minus": (-1.0, 1.0, 1.0),
        "psi_plus": (1.0, 1.0, -1.0),
        "psi_minus": (-1.0, -1.0, -1.0),
    },
    "octahedron_vertices": {
        "O1+": (1.0, 0.0, 0.0),
        "O1-": (-1.0, 0.0, 0.0),
        "O2+": (0.0, 1.0, 0.0),
        "O2-": (0.0, -1.0, 0.0),
        "O3+": (0.0, 0.0, 1.0),
        "O3-": (0.0, 0.0, -1.0),
    },
}

CLI_CONFIG = {
    "float_digits": 17,
    "frames": ("original", "canonical"),
    "default_frame": "original",
    "batch_samples": 10000,
}

EXIT_CODES = {
    "ok": 0,
    "verification_failed": 1,
    "invalid_input": 2,
    "nonconvergence": 3,
}

PATHS = {
    "log_dir": os.environ.get("BSA_LAB_LOG_DIR", os.path.join(BASE_DIR, "logs")),
    "reports_dir": os.environ.get("BSA_LAB_REPORTS_DIR", os.path.join(BASE_DIR, "reports")),
}
PATHS["log_file"] = os.path.join(PATHS["log_dir"], "bsa_lab.log")

LOGGING_CONFIG = {
    "level": os.environ.get("BSA_LAB_LOG_LEVEL", "INFO"),
}

ERROR_MESSAGES = {
    "not_hermitian": "Matrix is not Hermitian within tolerance",
    "negative_eigenvalue": "Matrix has an eigenvalue below the clamping window",
    "invalid_prob_vec": "Probability vector must have 4 entries in [0,1] summing to 1",
    "unphysical": "Correlation vector violates a positivity inequality",
    "separable_input": "Operation requires an entangled Bell-diagonal state",
    "not_in_singlet_tetra": "Correlation vector is not inside the singlet tetrahedron",
    "degenerate_vertex": "State sits on a Bell vertex; the projection is undefined",
    "not_on_face": "State does not lie on the separable face",
    "not_density_matrix": "Input is not a two-qubit density matrix",
    "degenerate_pair": "Pair determinant vanishes in the correlated case",
    "reconstruction_mismatch": "Decomposition does not reconstruct the state",
    "rank_not_three": "Partial transpose of the separable part does not have rank 3",
    "vanishing_norm": "Local operation annihilates the state",
    "invalid_filtration": "Filtration parameters are invalid",
    "non_bell_diagonal": "Density matrix is not diagonal in the Bell basis",
    "nonconvergence": "Numerical search did not find a feasible point",
    "invalid_input": "Input validation failed",
}

SUCCESS_MESSAGES = {
    "decomposition_complete": "Decomposition completed successfully",
    "verification_passed": "Optimality verification passed",
    "oracle_complete": "Oracle search completed",
}
