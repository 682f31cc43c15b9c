"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

uosclust = pytest.importorskip("uosclust")


def test_generate_shapes_and_labels():
    data = uosclust.generate_ensemble(12, 2, 3, 8, mode="gaussian_product", seed=3)
    assert data["full"].shape == (12, 24)
    assert len(data["bases"]) == 3
    assert data["bases"][0].shape == (12, 2)
    assert data["labels"] == [1] * 8 + [2] * 8 + [3] * 8


def test_masks():
    masks = uosclust.sample_case1(50, 4, 0.1)
    assert all(list(m) == [0, 1, 2, 3, 4] for m in masks)
    masks3 = uosclust.sample_case3(50, 10, 0.38, seed=7)
    assert all(len(m) == 19 for m in masks3)
    masks2 = uosclust.sample_case2(50, 10, 3, seed=7)
    assert all(len(m) == 3 for m in masks2)


def test_solve_bp_identity():
    sol = uosclust.solve_bp(np.eye(3), np.array([0.5, 0.0, 0.0]))
    assert sol["status"] == "optimal"
    assert abs(sol["objective"] - 0.5) < 1e-9
    np.testing.assert_allclose(sol["coefficients"], [0.5, 0, 0], atol=1e-9)


def test_lasso_soft_threshold():
    sol = uosclust.solve_lasso(np.eye(2), np.array([1.0, 0.0]), 0.4, tol=1e-10)
    assert sol["status"] == "optimal"
    assert abs(sol["coefficients"][0] - 0.6) < 1e-8


def test_cluster_pipeline_full_observation():
    data = uosclust.generate_ensemble(20, 2, 2, 25, mode="orthonormal_unit_sphere", seed=11)
    n, N = data["full"].shape
    masks = uosclust.sample_case3(n, N, 0.8, seed=12)
    aff = uosclust.ssc_lp_affinity(data["full"], masks)
    assert aff["failures"] == 0
    result = uosclust.spectral_cluster(aff["W"], 2, seed=5)
    err = uosclust.clustering_error(result["labels"], data["labels"])
    assert err == 0.0


def test_completion_and_metrics():
    rng = np.random.default_rng(0)
    truth = rng.normal(size=(20, 3)) @ rng.normal(size=(3, 30))
    masks = uosclust.sample_case3(20, 30, 0.8, seed=3)
    observed = uosclust.zero_fill(truth, masks)
    out = uosclust.svt_complete(observed, masks, tol=1e-4, max_iter=500)
    assert out["converged"]
    assert uosclust.completion_error(out["completed"], truth) < 5e-2
    assert uosclust.completion_error(truth, truth) == 0.0


def test_subspace_error_orthogonal():
    a = np.zeros((10, 2))
    a[:2, :] = np.eye(2)
    b = np.zeros((10, 2))
    b[5:7, :] = np.eye(2)
    assert abs(uosclust.subspace_error(a, b) - math.pi / 2) < 1e-12


def test_inradius_cross_polytope():
    for d in (2, 3):
        out = uosclust.inradius(np.eye(d), method="exact")
        assert out["exact"]
        assert abs(out["value"] - 1.0 / math.sqrt(d)) < 1e-9
    sampled = uosclust.inradius(np.eye(3), method="sampled", samples=20000)
    assert sampled["value"] >= 1.0 / math.sqrt(3) - 1e-12
