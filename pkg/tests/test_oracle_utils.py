import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import ORACLE_CONFIG
from core.bell_utils import BELL_KETS, BDState, to_density_matrix, werner_state
from core.decomposition_utils import bsa_bd
from core.exceptions import BsaLabError
from core.lqcc_utils import LocalOperation, LqccPair, apply_lqcc
from core.matrix_utils import frobenius, projector
from core.measure_utils import closest_separable_bd, relative_entropy_bd
from core.oracle_utils import (
    BsaSearchConfig, bsa_numeric, ket_to_params, params_to_ket, project_l1_ball, rel_entropy_min_numeric,
)
from core.sampling_utils import make_rng, random_entangled_bd, random_unitary_spec

FAST = BsaSearchConfig(restarts=2, max_iters=40, seed=7)
RANDOM_STARTS = BsaSearchConfig(restarts=ORACLE_CONFIG["sweep_restarts"], seed=7, seed_top_eigvec=False)


def _sweep_states(n, seed):
    """Seeded entangled states over all four tetrahedra, skipping near-pure inputs"""
    rng = make_rng(seed)
    states = []
    while len(states) < n:
        s = random_entangled_bd(rng, len(states) % 4)
        if np.max(s.p) <= 0.9:
            states.append(s)
    return states


def test_config_validation():
    with pytest.raises(BsaLabError):
        BsaSearchConfig(restarts=0)
    with pytest.raises(BsaLabError):
        BsaSearchConfig(lambda_tol=0.0)


def test_config_json_carries_start_mode():
    assert BsaSearchConfig().to_json()["seed_top_eigvec"] is True
    assert RANDOM_STARTS.to_json()["seed_top_eigvec"] is False
    assert RANDOM_STARTS.to_json()["restarts"] == ORACLE_CONFIG["sweep_restarts"]


def test_params_phase_fixed(rng):
    ket = params_to_ket(rng.normal(size=8))
    assert np.linalg.norm(ket) == pytest.approx(1.0)
    lead = ket[np.argmax(np.abs(ket) > 1e-12)]
    assert lead.imag == pytest.approx(0.0, abs=1e-15)
    assert lead.real > 0.0
    assert_allclose(params_to_ket(ket_to_params(ket)), ket, atol=1e-15)


def test_l1_projection():
    inside = np.array([0.2, -0.3, 0.1])
    assert_allclose(project_l1_ball(inside), inside)
    assert_allclose(project_l1_ball(np.array([2.0, 0.0, 0.0])), [1.0, 0.0, 0.0])
    out = project_l1_ball(np.array([0.9, -0.8, 0.4]))
    assert float(np.sum(np.abs(out))) == pytest.approx(1.0)


def test_separable_input_is_immediate():
    result = bsa_numeric(to_density_matrix(BDState.from_t((0.1, 0.2, -0.3))), FAST)
    assert result.lambda_star == 1.0
    assert result.objective_history == [1.0]


def test_singlet_has_no_separable_part():
    result = bsa_numeric(projector(BELL_KETS[3]), FAST)
    assert result.lambda_star <= 1e-4


@pytest.mark.slow
def test_worked_state(worked_rho):
    result = bsa_numeric(worked_rho, RANDOM_STARTS)
    assert result.lambda_star == pytest.approx(0.6, abs=1e-4)
    assert abs(np.vdot(BELL_KETS[3], result.psi_star)) ** 2 >= 1.0 - 1e-4
    assert frobenius(result.reconstruct() - worked_rho) <= 1e-8
    certificate = result.certificate()
    assert certificate["min_eigenvalue"] >= -1e-9
    assert certificate["min_pt_eigenvalue"] >= -1e-9


@pytest.mark.slow
@pytest.mark.parametrize("p", [
    (0.05, 0.1, 0.15, 0.7),
    (0.6, 0.2, 0.1, 0.1),
    (0.1, 0.75, 0.05, 0.1),
    (0.2, 0.1, 0.55, 0.15),
])
def test_matches_closed_form(p):
    s = BDState.from_p(p)
    result = bsa_numeric(to_density_matrix(s), RANDOM_STARTS)
    d = bsa_bd(s)
    assert result.lambda_star == pytest.approx(d.lam, abs=1e-4)
    assert abs(np.vdot(d.pure_part, result.psi_star)) ** 2 >= 1.0 - 1e-4


@pytest.mark.slow
def test_random_starts_sweep():
    for s in _sweep_states(20, 2024):
        d = bsa_bd(s)
        result = bsa_numeric(to_density_matrix(s), RANDOM_STARTS)
        assert result.lambda_star == pytest.approx(d.lam, abs=1e-4)
        assert abs(np.vdot(d.pure_part, result.psi_star)) ** 2 >= 1.0 - 1e-4
        assert np.all(np.diff(result.objective_history) >= 0.0)


@pytest.mark.slow
def test_local_unitaries_keep_lambda(rng, worked_rho):
    pair = LqccPair(op_a=LocalOperation(unitary=random_unitary_spec(rng)),
                    op_b=LocalOperation(unitary=random_unitary_spec(rng)))
    rotated, _ = apply_lqcc(worked_rho, pair)
    assert bsa_numeric(rotated, RANDOM_STARTS).lambda_star == pytest.approx(0.6, abs=1e-4)


@pytest.mark.slow
def test_history_monotone_and_deterministic(worked_rho):
    first = bsa_numeric(worked_rho, FAST)
    second = bsa_numeric(worked_rho, FAST)
    assert np.all(np.diff(first.objective_history) >= 0.0)
    assert first.objective_history == second.objective_history
    assert first.lambda_star == second.lambda_star
    assert_allclose(first.psi_star, second.psi_star, atol=0.0)


@pytest.mark.slow
def test_threaded_restarts_agree(worked_rho):
    serial = bsa_numeric(worked_rho, FAST)
    threaded = bsa_numeric(worked_rho, BsaSearchConfig(restarts=2, max_iters=40, seed=7, workers=2))
    assert threaded.lambda_star == serial.lambda_star
    assert threaded.best_restart == serial.best_restart


@pytest.mark.slow
def test_relative_entropy_oracle_worked(worked_state):
    argmin, value = rel_entropy_min_numeric(worked_state, 21)
    assert np.max(np.abs(argmin.t - closest_separable_bd(worked_state).t)) <= 1e-4
    assert value == pytest.approx(0.3 * np.log(0.6) + 0.7 * np.log(1.4), abs=1e-6)


@pytest.mark.slow
def test_relative_entropy_oracle_sweep():
    for s in _sweep_states(20, 4048):
        closest = closest_separable_bd(s)
        argmin, value = rel_entropy_min_numeric(s)
        assert np.max(np.abs(argmin.t - closest.t)) <= 1e-4
        assert value == pytest.approx(relative_entropy_bd(s.p, closest.p).value, abs=1e-6)


@pytest.mark.slow
def test_relative_entropy_oracle_werner():
    argmin, _ = rel_entropy_min_numeric(werner_state(0.8), 21)
    assert_allclose(argmin.t, [-1.0 / 3.0] * 3, atol=1e-4)


def test_relative_entropy_oracle_separable():
    s = BDState.from_t((0.2, 0.1, 0.0))
    argmin, value = rel_entropy_min_numeric(s, 5)
    assert argmin is s
    assert value == 0.0
