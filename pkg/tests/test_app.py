import json

import numpy as np
import pytest

from app import main
from config import PATHS
from core.bell_utils import to_density_matrix, BDState
from core.matrix_utils import to_pairs

WORKED = ["--p", "0.1,0.1,0.1,0.7"]


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_decompose_worked(capsys):
    code, report = _run(capsys, ["decompose", *WORKED])
    assert code == 0
    assert report["command"] == "decompose"
    assert report["outputs"]["decomposition"]["lambda"] == pytest.approx(0.6)
    assert report["outputs"]["concurrence"] == pytest.approx(0.4)
    assert report["residuals"]["lambda_concurrence_identity"] <= 1e-10
    assert report["wall_time_s"] is None


def test_decompose_separable(capsys):
    code, report = _run(capsys, ["decompose", "--t", "0,0,0"])
    assert code == 0
    assert report["outputs"]["separable"] is True
    assert report["outputs"]["decomposition"]["lambda"] == 1.0


def test_decompose_pure_bell(capsys):
    code, report = _run(capsys, ["decompose", "--p", "0,0,0,1"])
    assert code == 0
    assert report["outputs"]["decomposition"]["lambda"] == 0.0
    assert "note" in report["outputs"]["decomposition"]


def test_decompose_canonical_frame(capsys):
    code, report = _run(capsys, ["decompose", "--p", "0.7,0.1,0.1,0.1", "--frame", "canonical"])
    assert code == 0
    assert report["outputs"]["decomposition"]["pure_part"] == "psi_minus"


def test_decompose_matrix_file(capsys, tmp_path):
    path = tmp_path / "state.json"
    path.write_text(json.dumps({"matrix": to_pairs(to_density_matrix(BDState.from_p((0.1, 0.1, 0.1, 0.7))))}))
    code, report = _run(capsys, ["decompose", "--matrix-file", str(path)])
    assert code == 0
    assert report["outputs"]["decomposition"]["lambda"] == pytest.approx(0.6)


def test_non_bell_diagonal_matrix_is_rejected(capsys, tmp_path):
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    path = tmp_path / "product.json"
    path.write_text(json.dumps(to_pairs(m)))
    assert main(["decompose", "--matrix-file", str(path)]) == 2
    assert "Bell basis" in capsys.readouterr().err


def test_invalid_probabilities(capsys):
    assert main(["decompose", "--p", "0.5,0.5,0.5,0.5"]) == 2


def test_missing_state(capsys):
    assert main(["decompose"]) == 2


def test_verify_exit_codes(capsys):
    assert main(["verify", *WORKED]) == 0
    assert main(["verify", *WORKED, "--perturb", "0.01"]) == 1
    assert main(["verify", "--t", "0.1,0.2,0.3"]) == 0


def test_verify_report(capsys):
    code, report = _run(capsys, ["verify", *WORKED, "--strict"])
    assert code == 0
    assert report["outputs"]["report"]["rank_check"]["holds"] == "i"
    assert len(report["outputs"]["gamma_cross_check"]) == 3


def test_lqcc_symmetric(capsys):
    code, report = _run(capsys, ["lqcc", *WORKED, "--a", "0.3", "--axis", "z", "--same-ab"])
    assert code == 0
    outputs = report["outputs"]
    assert outputs["symmetric"] is True
    assert outputs["optimality"]["passed"] is True
    assert outputs["concurrence"]["predicted"] == pytest.approx(outputs["concurrence"]["measured"], abs=1e-10)


@pytest.mark.parametrize("p", ["0.7,0.1,0.1,0.1", "0.1,0.7,0.1,0.1", "0.1,0.1,0.7,0.1"])
def test_lqcc_same_ab_outside_singlet_tetrahedron(capsys, p):
    code, report = _run(capsys, ["lqcc", "--p", p, "--a", "0.3", "--axis", "z", "--same-ab"])
    assert code == 0
    outputs = report["outputs"]
    assert outputs["symmetric"] is True
    assert outputs["optimality"]["passed"] is True
    assert max(outputs["member_weight_gaps"].values()) <= 1e-12


def test_lqcc_identity_pair(capsys):
    code, report = _run(capsys, ["lqcc", *WORKED])
    assert code == 0
    rho = to_density_matrix(BDState.from_p((0.1, 0.1, 0.1, 0.7)))
    assert np.allclose(np.array(report["outputs"]["rho_prime"]), np.array(to_pairs(rho)), atol=1e-15)


def test_lqcc_rejects_full_strength(capsys):
    assert main(["lqcc", *WORKED, "--a", "1.0"]) == 2


def test_lqcc_pair_file(capsys, tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({
        "A": {"filtration": {"mu": 1.0, "a": 0.2, "m": [0, 0, 1]}},
        "B": {"filtration": {"mu": 2.0, "a": -0.4, "m": [1, 0, 0]}},
    }))
    code, report = _run(capsys, ["lqcc", *WORKED, "--pair-file", str(path), "--check"])
    assert code == 0
    assert report["outputs"]["symmetric"] is False
    assert report["outputs"]["optimality"]["informational"] is True


def test_entropy(capsys):
    code, report = _run(capsys, ["entropy", *WORKED])
    assert code == 0
    assert report["outputs"]["value"] == pytest.approx(0.3 * np.log(0.6) + 0.7 * np.log(1.4), abs=1e-14)
    code, report = _run(capsys, ["entropy", *WORKED, "--bits"])
    assert report["outputs"]["unit"] == "bits"


def test_geometry_json(capsys):
    code, report = _run(capsys, ["geometry", "0"])
    assert code == 0
    assert len(report["outputs"]["rows"]) == 10


def test_geometry_csv(capsys, tmp_path):
    path = tmp_path / "geometry.csv"
    assert main(["geometry", "2", "--format", "csv", "--out", str(path)]) == 0
    assert path.read_text().splitlines()[0] == "kind,label,t1,t2,t3,region"


@pytest.mark.slow
def test_oracle_is_deterministic(capsys):
    argv = ["oracle", *WORKED, "--restarts", "2", "--max-iters", "20", "--seed", "11"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["residuals"]["lambda"] <= 1e-4


@pytest.mark.slow
def test_oracle_random_starts(capsys):
    code, report = _run(capsys, ["oracle", *WORKED, "--restarts", "8", "--random-starts"])
    assert code == 0
    assert report["outputs"]["config"]["seed_top_eigvec"] is False
    assert report["residuals"]["lambda"] <= 1e-4
    assert report["residuals"]["psi_infidelity"] <= 1e-4


@pytest.mark.slow
def test_batch(capsys):
    code, report = _run(capsys, ["batch", "--samples", "40", "--verify-samples", "4", "--lqcc-samples", "10"])
    assert code == 0
    assert report["outputs"]["passed"] is True


@pytest.mark.slow
def test_batch_with_oracles(capsys):
    code, report = _run(capsys, ["batch", "--samples", "4", "--verify-samples", "0", "--lqcc-samples", "0",
                                 "--oracle", "2", "--seed", "3"])
    assert code == 0
    assert report["outputs"]["passed"] is True
    properties = {row["property"] for row in report["outputs"]["summary"]}
    assert {"oracle_lambda", "oracle_psi_infidelity", "entropy_argmin_t", "entropy_value"} <= properties


def test_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    assert main(["decompose", *WORKED, "--out", str(path)]) == 0
    assert json.loads(path.read_text())["command"] == "decompose"
    assert capsys.readouterr().out == ""


def test_relative_out_goes_to_reports_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setitem(PATHS, "reports_dir", str(tmp_path / "reports"))
    assert main(["decompose", *WORKED, "--out", "worked.json"]) == 0
    assert json.loads((tmp_path / "reports" / "worked.json").read_text())["command"] == "decompose"
    assert main(["geometry", "0", "--format", "csv", "--out", "geometry.csv"]) == 0
    assert (tmp_path / "reports" / "geometry.csv").exists()
