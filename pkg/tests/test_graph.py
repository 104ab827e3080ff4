"""Graph type validation and the normalization/projection operations.

Oracles here are explicit python loops over small random matrices.
"""

import numpy as np
import pytest

from pollinet import graph as gr


def random_binary(rng, n1, n2, density=0.4):
    return (rng.random((n1, n2)) < density).astype(np.float64)


def test_all_ones_two_by_two_normalizes_to_half():
    nb = gr.normalize_incidence(np.ones((2, 2)))
    assert np.allclose(nb.values, np.full((2, 2), 0.5), atol=1e-15)


def test_normalize_matches_loop_oracle():
    rng = np.random.default_rng(42)
    for _ in range(10):
        b = random_binary(rng, 8, 5)
        got = gr.normalize_incidence(b).values
        rdeg = b.sum(axis=1)
        cdeg = b.sum(axis=0)
        want = np.zeros_like(b)
        for i in range(8):
            for j in range(5):
                if b[i, j] == 1.0:
                    want[i, j] = 1.0 / np.sqrt(rdeg[i] * cdeg[j])
        assert np.allclose(got, want, atol=1e-12)
        # nonzero exactly where b is nonzero
        assert np.array_equal(got != 0.0, b != 0.0)


def test_normalize_handles_isolated_rows_and_columns():
    b = np.zeros((3, 3))
    b[0, 0] = 1.0
    nb = gr.normalize_incidence(b).values
    assert np.all(np.isfinite(nb))
    assert nb[0, 0] == 1.0
    assert np.all(nb[1:, :] == 0.0) and np.all(nb[:, 1:] == 0.0)


def test_normalized_entries_within_unit_interval():
    rng = np.random.default_rng(9)
    for _ in range(5):
        b = random_binary(rng, 12, 7, density=0.5)
        nb = gr.normalize_incidence(b).values
        assert np.all(nb >= 0.0) and np.all(nb <= 1.0)


def test_plant_projection_indicator():
    b = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    onehot = np.array(
        [
            [1.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            [0.0, 1.0],
        ]
    )
    plants = gr.PlantAssignment(onehot)
    bp = gr.project_plant_network(b, plants)
    assert np.array_equal(bp, np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))


def test_plant_average_matrix_columns_sum_to_one():
    rng = np.random.default_rng(1)
    for _ in range(5):
        labels = rng.integers(0, 4, size=20)
        labels[:4] = np.arange(4)  # every plant occupied
        onehot = np.eye(4)[labels]
        pav = gr.plant_average_matrix(gr.PlantAssignment(onehot))
        assert np.allclose(pav.sum(axis=0), np.ones(4), atol=1e-12)


def test_plant_average_projection_matches_groupby_mean():
    rng = np.random.default_rng(17)
    labels = rng.integers(0, 3, size=11)
    labels[:3] = np.arange(3)
    onehot = np.eye(3)[labels]
    plants = gr.PlantAssignment(onehot)
    probs = rng.random((11, 4))
    got = gr.plant_average_matrix(plants).T @ probs
    for k in range(3):
        want = probs[labels == k].mean(axis=0)
        assert np.allclose(got[k], want, atol=1e-12)


def test_connectivity_is_the_mean():
    m = np.full((4, 6), 0.3)
    assert abs(gr.connectivity(m) - 0.3) < 1e-15
    rng = np.random.default_rng(2)
    m = rng.random((5, 5))
    assert abs(gr.connectivity(m) - m.mean()) < 1e-15


def test_connectivity_rejects_out_of_range():
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        gr.connectivity(np.array([[0.5, 1.2]]))
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        gr.connectivity(np.array([[-0.1, 0.2]]))


def test_graph_rejects_nonbinary_incidence():
    with pytest.raises(ValueError, match="0 or 1"):
        gr.BipartiteGraph(np.array([[0.5]]), np.ones((1, 1)), np.ones((1, 1)))


def test_graph_rejects_shape_mismatch():
    b = np.ones((3, 2))
    with pytest.raises(ValueError, match="row covariates"):
        gr.BipartiteGraph(b, np.ones((4, 1)), np.ones((2, 1)))
    with pytest.raises(ValueError, match="column covariates"):
        gr.BipartiteGraph(b, np.ones((3, 1)), np.ones((5, 1)))


def test_plant_assignment_rejects_bad_memberships():
    with pytest.raises(ValueError, match="exactly one plant"):
        gr.PlantAssignment(np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError, match="no rows"):
        gr.PlantAssignment(np.array([[1.0, 0.0], [1.0, 0.0]]))


def test_matrices_are_frozen():
    g = gr.BipartiteGraph(np.ones((2, 2)), np.zeros((2, 3)), np.zeros((2, 1)))
    with pytest.raises(ValueError):
        g.incidence[0, 0] = 0.0
