import numpy as np
import pytest

from schatten_lr import certify, norms


def test_quasi_norm_diagonal_values():
    assert norms.schatten_quasi_norm(np.zeros((3, 2)), 0.5) == 0.0
    assert norms.schatten_quasi_norm(np.diag([4.0, 1.0]), 0.5) == pytest.approx(9.0)
    assert norms.schatten_quasi_norm(np.diag([8.0, 1.0]), 1 / 3) == pytest.approx(27.0)


def test_quasi_norm_special_cases(rng):
    X = rng.standard_normal((6, 4))
    assert norms.schatten_quasi_norm(X, 1.0) == pytest.approx(norms.trace_norm(X), rel=1e-10)
    assert norms.schatten_quasi_norm(X, 2.0) == pytest.approx(norms.fro_norm(X), rel=1e-10)


@pytest.mark.parametrize("p", [0.0, -1.0, 2.5])
def test_quasi_norm_p_range(p):
    with pytest.raises(ValueError):
        norms.schatten_quasi_norm(np.eye(2), p)


def test_trace_and_fro_examples():
    assert norms.trace_norm(np.eye(3)) == pytest.approx(3.0)
    assert norms.fro_norm(np.eye(3)) == pytest.approx(np.sqrt(3.0))
    assert norms.trace_norm(np.diag([3.0, 1.0])) == pytest.approx(4.0)


def test_bi_tri_trace_examples():
    assert norms.bi_trace(np.zeros((2, 3))) == 0.0
    assert norms.tri_trace(np.zeros((2, 3))) == 0.0
    assert norms.bi_trace(np.diag([4.0, 1.0])) == pytest.approx(9.0)
    assert norms.tri_trace(np.diag([8.0, 1.0])) == pytest.approx(27.0)


def test_bi_tri_trace_match_direct_svd(rng):
    X = rng.standard_normal((6, 3)) @ rng.standard_normal((3, 6))
    s = np.linalg.svd(X, compute_uv=False)[:3]
    assert norms.bi_trace(X) == pytest.approx(np.sum(np.sqrt(s)) ** 2, rel=1e-10)
    assert norms.tri_trace(X) == pytest.approx(np.sum(np.cbrt(s)) ** 3, rel=1e-10)


def test_factor_constructions_reproduce_x(rng):
    X = rng.standard_normal((5, 7))
    assert np.allclose(norms.bi_trace_factors(X).product(), X, atol=1e-12)
    assert np.allclose(norms.tri_trace_factors(X).product(), X, atol=1e-12)


def test_roundoff_singular_values_are_dropped(rng):
    # exact rank 2 in a 20x20 host: fractional powers must not see round-off
    X = rng.standard_normal((20, 2)) @ rng.standard_normal((2, 20))
    s = np.linalg.svd(X, compute_uv=False)
    assert norms.tri_trace(X) == pytest.approx(np.sum(np.cbrt(s[:2])) ** 3, rel=1e-12)


def test_surrogate_examples():
    Z = norms.FactorPair(np.zeros((3, 2)), np.zeros((4, 2)))
    assert norms.bi_trace_surrogate(Z) == 0.0
    fp = norms.bi_trace_factors(np.diag([4.0, 1.0]))
    assert norms.bi_trace_surrogate(fp) == pytest.approx(9.0)
    ft = norms.tri_trace_factors(np.diag([8.0, 1.0]))
    assert norms.tri_trace_surrogate(ft) == pytest.approx(27.0)


def test_surrogate_lower_bound_on_fixed_instance():
    rng = np.random.default_rng(21)
    X = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 5))
    target = norms.schatten_quasi_norm(X, 0.5)
    for _ in range(100):
        U, V = certify.random_factorization(rng, X, 4)
        assert np.allclose(U @ V.T, X, atol=1e-8)
        assert norms.bi_trace_surrogate(norms.FactorPair(U, V)) >= target - 1e-8


def test_norm_chain_examples():
    u = np.array([[0.6], [0.8]])
    X = 4.0 * u @ np.array([[1.0, 0.0, 0.0]])
    assert np.allclose(norms.property5_gap(X), (4, 4, 4, 4))
    tr, bi, tri, r2tr = norms.property5_gap(np.diag([4.0, 1.0]))
    assert (tr, r2tr) == pytest.approx((5.0, 20.0))
    assert bi == pytest.approx(9.0)
    assert tri == pytest.approx((4 ** (1 / 3) + 1) ** 3)  # about 17.32, below 20
    assert tri <= r2tr


def test_norm_chain_random(rng):
    X = rng.standard_normal((10, 3)) @ rng.standard_normal((3, 10))
    tr, bi, tri, r2tr = norms.property5_gap(X)
    assert norms.numerical_rank(X) == 3
    assert tr <= bi <= tri <= r2tr
    assert bi <= 3 * tr


def test_numerical_rank_edge_cases():
    assert norms.numerical_rank(np.zeros((3, 3))) == 0
    assert norms.numerical_rank(np.diag([1.0, 1e-11])) == 1


def test_make_pair_and_triple_validation():
    with pytest.raises(ValueError):
        norms.make_pair(np.ones((3, 2)), np.ones((4, 3)))
    with pytest.raises(ValueError):
        norms.make_triple(np.ones((3, 2)), np.ones((3, 3)), np.ones((4, 2)))
    ft = norms.make_triple(np.ones((3, 2)), np.eye(2), np.ones((4, 2)))
    assert ft.product().shape == (3, 4)


def test_battery_small_passes_and_fault_fails():
    assert all(r.passed for r in certify.run_battery(trials=5, max_dim=8, factorizations=10))
    faulty = certify.run_battery(trials=5, max_dim=8, factorizations=10, fault=1e-3)
    assert not all(r.passed for r in faulty)


def test_battery_is_deterministic():
    a = certify.run_battery(trials=10, max_dim=6, seed=3, factorizations=5)
    b = certify.run_battery(trials=10, max_dim=6, seed=3, factorizations=5)
    assert [r.max_deviation for r in a] == [r.max_deviation for r in b]


def test_homogeneity_of_tri_trace(rng):
    X = rng.standard_normal((4, 6))
    assert norms.tri_trace(-2.5 * X) == pytest.approx(2.5 * norms.tri_trace(X), rel=1e-12)
