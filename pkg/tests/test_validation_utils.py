import numpy as np
import pytest

from core.validation_utils import (
    matrix_from_pairs, tetrahedron_margins, validate_density_matrix, validate_filtration, validate_prob_vec,
    validate_search_config, validate_state_spec, validate_t_vec,
)


@pytest.mark.parametrize("p, ok", [
    ((0.25, 0.25, 0.25, 0.25), True),
    ((0.5, 0.5, 0.0, 0.0), True),
    ((0.5, 0.5, 0.5, 0.5), False),
    ((1.2, -0.2, 0.0, 0.0), False),
    ((0.5, 0.5), False),
    ((float("nan"), 0.5, 0.5, 0.0), False),
])
def test_validate_prob_vec(p, ok):
    is_valid, error_msg = validate_prob_vec(p)
    assert is_valid is ok
    assert (error_msg == "") is ok


def test_validate_t_vec_names_inequality():
    is_valid, error_msg = validate_t_vec((1.0, -1.0, -1.0))
    assert not is_valid
    assert "inequality 2" in error_msg


def test_margins_are_four_times_weights():
    assert np.allclose(tetrahedron_margins((-0.6, -0.6, -0.6)), [0.4, 0.4, 0.4, 2.8])


def test_validate_density_matrix():
    assert validate_density_matrix(np.eye(4) / 4.0)[0]
    is_valid, error_msg = validate_density_matrix(np.diag([0.6, 0.6, -0.1, -0.1]))
    assert not is_valid
    assert "negative eigenvalue" in error_msg
    assert not validate_density_matrix(np.eye(4))[0]
    assert not validate_density_matrix(np.eye(3) / 3.0)[0]


@pytest.mark.parametrize("mu, a, m, ok", [
    (1.0, 0.5, (0, 0, 1), True),
    (0.0, 0.5, (0, 0, 1), False),
    (1.0, 1.0, (0, 0, 1), False),
    (1.0, 0.5, (0, 0, 0), False),
])
def test_validate_filtration(mu, a, m, ok):
    assert validate_filtration(mu, a, m)[0] is ok


def test_validate_state_spec():
    assert validate_state_spec({"p": [0.1, 0.1, 0.1, 0.7]})[0]
    assert validate_state_spec({"t": [0.0, 0.0, 0.0]})[0]
    assert not validate_state_spec({"p": [0.1, 0.1, 0.1, 0.7], "t": [0, 0, 0]})[0]
    assert not validate_state_spec([0.25] * 4)[0]
    pairs = [[[0.25 if i == j else 0.0, 0.0] for j in range(4)] for i in range(4)]
    assert validate_state_spec({"matrix": pairs})[0]
    assert not validate_state_spec({"matrix": pairs[:3]})[0]


def test_matrix_from_pairs():
    m = matrix_from_pairs([[[1.0, 2.0], [0.0, -1.0]], [[0.0, 1.0], [3.0, 0.0]]])
    assert m[0, 0] == 1 + 2j
    assert m[1, 1] == 3.0


def test_validate_search_config():
    assert validate_search_config(1, 1e-6, 1)[0]
    assert not validate_search_config(0, 1e-6, 1)[0]
    assert not validate_search_config(1, -1.0, 1)[0]
