import numpy as np
import pytest
from numpy.testing import assert_allclose

from core.bell_utils import BELL_KETS, to_density_matrix
from core.decomposition_utils import bsa_bd
from core.exceptions import BsaLabError, RankNotThree, ReconstructionMismatch
from core.matrix_utils import projector
from core.optimality_utils import (
    CASE_CORRELATED, CASE_ONE_INSIDE, CASE_ORTHOGONAL, CASE_OUTSIDE, gamma_cross_check, lemma1_max,
    lemma2_pair, perturb_decomposition, rank_conditions, verify_bsa,
)
from core.sampling_utils import entangled_sample, random_boundary_entangled_bd, random_entangled_bd

SINGLET = BELL_KETS[3]


def test_lemma1_outside_range():
    assert lemma1_max(0.5 * projector(SINGLET), BELL_KETS[0]) == 0.0


def test_lemma1_maximally_mixed(rng, maximally_mixed):
    ket = rng.normal(size=4) + 1j * rng.normal(size=4)
    ket /= np.linalg.norm(ket)
    assert lemma1_max(maximally_mixed, ket) == pytest.approx(0.25)


def test_lemma1_member_weight(worked_state):
    member = bsa_bd(worked_state).ensemble[0]
    rho_alpha = 0.1 * member.projector() + 0.4 * projector(SINGLET)
    assert lemma1_max(rho_alpha, member.ket) == pytest.approx(0.1, abs=1e-12)


def test_lemma2_cases(worked_state):
    members = bsa_bd(worked_state).ensemble
    psi = 0.4 * projector(SINGLET)
    assert lemma2_pair(0.5 * projector(SINGLET), BELL_KETS[0], BELL_KETS[1])[2] == CASE_OUTSIDE

    rho_one = 0.1 * members[0].projector() + psi
    assert lemma2_pair(rho_one, members[0].ket, members[2].ket)[2] == CASE_ONE_INSIDE

    rho_cross = 0.1 * members[0].projector() + 0.1 * members[2].projector() + psi
    l1, l2, case = lemma2_pair(rho_cross, members[0].ket, members[2].ket)
    assert case == CASE_ORTHOGONAL
    assert (l1, l2) == pytest.approx((0.1, 0.1), abs=1e-12)

    rho_pair = 0.1 * members[0].projector() + 0.1 * members[1].projector() + psi
    l1, l2, case = lemma2_pair(rho_pair, members[0].ket, members[1].ket)
    assert case == CASE_CORRELATED
    assert (l1, l2) == pytest.approx((0.1, 0.1), abs=1e-12)


def test_verify_worked(worked_state, worked_rho):
    report = verify_bsa(worked_rho, bsa_bd(worked_state))
    assert report.passed
    assert report.worst_residual < 1e-10
    assert len(report.lemma1_checks) == 6
    assert len(report.pair_checks) == 15


def test_verify_random_states(rng):
    for s in entangled_sample(rng, 40):
        report = verify_bsa(to_density_matrix(s), bsa_bd(s), with_rank=False)
        assert report.passed, report.to_json()


@pytest.mark.parametrize("eps", [1e-3, 1e-2])
@pytest.mark.parametrize("alpha", [0, 3, 5])
def test_perturbation_is_detected(worked_state, worked_rho, eps, alpha):
    perturbed = perturb_decomposition(bsa_bd(worked_state), alpha, eps)
    report = verify_bsa(worked_rho, perturbed, allow_mismatch=True)
    assert not report.passed


def test_perturbation_detected_on_random_states(rng):
    for s in entangled_sample(rng, 20):
        d = bsa_bd(s)
        perturbed = perturb_decomposition(d, int(rng.integers(len(d.ensemble))), min(1e-2, 0.5 * (1.0 - d.lam)))
        assert not verify_bsa(to_density_matrix(s), perturbed, allow_mismatch=True, with_rank=False).passed


def test_perturb_bounds(worked_state):
    d = bsa_bd(worked_state)
    with pytest.raises(BsaLabError):
        perturb_decomposition(d, 6, 0.01)
    with pytest.raises(BsaLabError):
        perturb_decomposition(d, 0, 0.5)


def test_mismatch_raises(worked_rho, asymmetric_state):
    with pytest.raises(ReconstructionMismatch):
        verify_bsa(worked_rho, bsa_bd(asymmetric_state))


def test_verify_separable_state():
    from core.bell_utils import BDState

    s = BDState.from_t((0.1, -0.2, 0.3))
    report = verify_bsa(to_density_matrix(s), bsa_bd(s))
    assert report.passed
    assert report.rank_check is None


def test_rank_conditions_worked(worked_state):
    d = bsa_bd(worked_state)
    report = rank_conditions(d.rho_s_matrix(), d.pure_part)
    assert report.pt_rank == 3
    assert abs(report.pt_eigenvalues[0]) <= 1e-10
    assert report.kernel_fidelity(BELL_KETS[0]) >= 1.0 - 1e-10
    assert report.holds == "i"
    assert report.condition_i_alpha == pytest.approx(0.5, abs=1e-10)
    assert report.condition_ii is None


def test_rank_conditions_interior(rng):
    for _ in range(50):
        d = bsa_bd(random_entangled_bd(rng))
        report = rank_conditions(d.rho_s_matrix(), d.pure_part)
        assert abs(report.pt_eigenvalues[0]) <= 1e-10
        assert report.kernel_fidelity(BELL_KETS[0]) >= 1.0 - 1e-10
        assert report.holds == "i"


def test_rank_conditions_boundary(rng):
    for _ in range(10):
        d = bsa_bd(random_boundary_entangled_bd(rng))
        report = rank_conditions(d.rho_s_matrix(), d.pure_part)
        assert report.rho_s_rank == 3
        assert report.condition_ii["holds"] is True
        assert report.condition_ii["residual"] <= 1e-8
        assert report.condition_ii["alpha"] == pytest.approx(0.5, abs=1e-10)
        assert 0.0 <= report.condition_ii["nu"] <= 10.0


def test_rank_conditions_boundary_wrong_pure_part(rng):
    d = bsa_bd(random_boundary_entangled_bd(rng))
    report = rank_conditions(d.rho_s_matrix(), BELL_KETS[0])
    assert report.condition_i_alpha is None
    assert report.condition_ii["holds"] is False
    assert report.condition_ii["alpha"] < 0.0
    assert report.holds is None


def test_rank_conditions_off_boundary(rng):
    for _ in range(20):
        d = bsa_bd(random_entangled_bd(rng))
        report = rank_conditions(d.rho_s_matrix(), d.pure_part)
        assert report.rho_s_rank == 4
        assert report.condition_ii is None
        assert report.holds != "ii"


def test_rank_conditions_full_rank(maximally_mixed):
    with pytest.raises(RankNotThree):
        rank_conditions(maximally_mixed, SINGLET)


def test_gamma_cross_check_sum_form(worked_state):
    rows = gamma_cross_check(bsa_bd(worked_state))
    assert len(rows) == 3
    for row in rows:
        assert_allclose([row["numeric"]["m11"], row["numeric"]["m12_abs"]], [6.0, 4.0], atol=1e-10)
        sum_form = row["variants"]["sum_form"]
        assert sum_form["m11_half_residual"] <= 1e-10
        assert sum_form["m12_residual"] <= 1e-10
        assert row["variants"]["product_plus_half"]["m11_residual"] > 1e-3


def test_report_json(worked_state, worked_rho):
    data = verify_bsa(worked_rho, bsa_bd(worked_state)).to_json()
    assert data["passed"] is True
    assert data["rank_check"]["pt_rank"] == 3
    assert {c["case"] for c in data["pair_checks"]} == {CASE_CORRELATED, CASE_ORTHOGONAL}
