import numpy as np
import pytest

from midpredict import KernelSpec, gram_matrix, kernel_eval


def test_rbf_same_point_is_one():
    spec = KernelSpec("rbf", gamma=7.3)
    assert kernel_eval(spec, [1.0, -2.0], [1.0, -2.0]) == 1.0


def test_rbf_unit_distance():
    spec = KernelSpec("rbf", gamma=1.0)
    assert kernel_eval(spec, [0.0, 0.0], [1.0, 0.0]) == pytest.approx(np.exp(-1.0), rel=1e-15)


def test_rbf_operating_point_gamma():
    spec = KernelSpec("rbf", gamma=16.75)
    assert kernel_eval(spec, [0.0], [1.0]) == pytest.approx(np.exp(-16.75), rel=1e-15)


def test_linear_is_dot_product():
    spec = KernelSpec("linear")
    assert kernel_eval(spec, [1.0, 2.0], [3.0, -1.0]) == 1.0


def test_symmetry_and_range():
    rng = np.random.default_rng(0)
    spec = KernelSpec("rbf", gamma=2.5)
    for _ in range(50):
        a, b = rng.normal(size=4), rng.normal(size=4)
        k1 = kernel_eval(spec, a, b)
        k2 = kernel_eval(spec, b, a)
        assert k1 == k2
        assert 0.0 < k1 <= 1.0


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        kernel_eval(KernelSpec("linear"), [1.0], [1.0, 2.0])


def test_gamma_validation():
    with pytest.raises(ValueError):
        KernelSpec("rbf")
    with pytest.raises(ValueError):
        KernelSpec("rbf", gamma=-1.0)
    with pytest.raises(ValueError):
        KernelSpec("poly")


def test_gram_matches_pairwise_eval():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(6, 3))
    X2 = rng.normal(size=(4, 3))
    for spec in (KernelSpec("rbf", 3.0), KernelSpec("linear")):
        K = gram_matrix(spec, X, X2)
        for i in range(6):
            for j in range(4):
                assert K[i, j] == pytest.approx(kernel_eval(spec, X[i], X2[j]), abs=1e-12)


def test_gram_rbf_values_positive_bounded():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(20, 5))
    K = gram_matrix(KernelSpec("rbf", 0.7), X)
    assert (K > 0).all() and (K <= 1.0).all()
    np.testing.assert_allclose(K, K.T, atol=0)
    np.testing.assert_array_equal(np.diag(K), np.ones(20))
