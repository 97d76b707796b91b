import json
import math

import numpy as np
import pytest

from core.report_utils import batch_summary, build_report, dumps, format_float, geometry_table
from core.sampling_utils import (
    entangled_sample, make_rng, random_boundary_entangled_bd, random_density_matrix, random_entangled_bd,
    random_lqcc_pair, random_separable_bd,
)
from core.validation_utils import validate_density_matrix


def test_samplers_are_seeded():
    a = random_entangled_bd(make_rng(3))
    b = random_entangled_bd(make_rng(3))
    assert np.array_equal(a.p, b.p)


@pytest.mark.parametrize("k", range(4))
def test_entangled_sampler_lands_in_tetrahedron(rng, k):
    for _ in range(50):
        s = random_entangled_bd(rng, k)
        assert s.tetra_id == k


def test_entangled_sample_cycles(rng):
    assert [s.tetra_id for s in entangled_sample(rng, 8)] == [0, 1, 2, 3, 0, 1, 2, 3]
    assert {s.tetra_id for s in entangled_sample(rng, 5, all_tetrahedra=False)} == {3}


def test_boundary_sampler(rng):
    for _ in range(20):
        s = random_boundary_entangled_bd(rng)
        assert s.tetra_id == 3
        assert np.min(s.p[:3]) == 0.0


def test_separable_sampler(rng):
    for _ in range(50):
        assert random_separable_bd(rng).separable


def test_density_sampler(rng):
    assert validate_density_matrix(random_density_matrix(rng, rank=2))[0]


def test_pair_sampler_strength(rng):
    pair = random_lqcc_pair(rng, max_strength=0.5, symmetric=True)
    assert pair.op_a is pair.op_b
    assert abs(pair.op_a.filtration.a) <= 0.5


def test_float_format():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1.0 / 3.0)) == 1.0 / 3.0
    assert format_float(float("inf")) == "Infinity"
    assert format_float(float("nan")) == "NaN"


def test_dumps_is_parseable():
    payload = {"a": [1, 2.5, np.float64(0.1)], "b": {"c": None, "d": True}, "e": np.array([[1.0, 2.0]]), "f": []}
    data = json.loads(dumps(payload))
    assert data["a"] == [1, 2.5, 0.1]
    assert data["b"] == {"c": None, "d": True}
    assert data["e"] == [[1.0, 2.0]]
    assert data["f"] == []


def test_dumps_rejects_objects():
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_report_envelope():
    report = build_report("decompose", {"p": [1, 0, 0, 0]}, {"lambda": 0.0}, seed=5)
    assert report["tool"] == "bsa-lab"
    assert report["seed"] == 5
    assert report["residuals"] == {}
    assert report["wall_time_s"] is None


def test_geometry_vertices_only():
    table = geometry_table(0)
    assert len(table) == 10
    tetra = table[table["kind"] == "tetrahedron_vertex"]
    assert sorted(map(tuple, tetra[["t1", "t2", "t3"]].to_numpy().tolist())) == sorted(
        [(1.0, -1.0, 1.0), (-1.0, 1.0, 1.0), (1.0, 1.0, -1.0), (-1.0, -1.0, -1.0)])
    octa = table[table["kind"] == "octahedron_vertex"]
    assert np.allclose(np.sum(np.abs(octa[["t1", "t2", "t3"]].to_numpy()), axis=1), 1.0)


def test_geometry_samples_are_labelled():
    table = geometry_table(4)
    samples = table[table["kind"] == "sample"]
    assert len(table[table["kind"] == "octahedron_face"]) == 4
    assert set(samples["region"]) <= {"separable", "entangled:phi_plus", "entangled:phi_minus",
                                      "entangled:psi_plus", "entangled:psi_minus"}
    origin = samples[(samples["t1"] == 0.0) & (samples["t2"] == 0.0) & (samples["t3"] == 0.0)]
    assert origin["region"].tolist() == ["separable"]


def test_batch_summary():
    records = [
        {"property": "a", "residual": 1e-13},
        {"property": "a", "residual": 3e-13},
        {"property": "b", "residual": 0.0},
    ]
    summary = batch_summary(records).set_index("property")
    assert summary.loc["a", "count"] == 2
    assert summary.loc["a", "worst"] == 3e-13
    assert math.isclose(summary.loc["a", "mean"], 2e-13)
    assert batch_summary([]).empty
