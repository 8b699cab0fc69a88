import itertools
import math

import numpy as np
import pytest

from schatten_lr import core, data, metrics, solvers
from schatten_lr.norms import FactorPair


def brute_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    credit = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p, n in itertools.product(pos, neg))
    return credit / (len(pos) * len(neg))


def test_rse_examples(rng):
    X0 = rng.standard_normal((4, 3))
    assert metrics.rse(X0, X0) == 0.0
    assert metrics.rse(np.zeros_like(X0), X0) == pytest.approx(1.0)
    assert metrics.rse(2 * X0, X0) == pytest.approx(1.0)
    X = X0 + 0.1 * rng.standard_normal((4, 3))
    assert metrics.rse(-3 * X, -3 * X0) == pytest.approx(metrics.rse(X, X0), rel=1e-12)


def test_rse_errors():
    with pytest.raises(ValueError):
        metrics.rse(np.ones((2, 2)), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        metrics.rse(np.ones((2, 2)), np.ones((2, 3)))


def test_rmse_examples(rng):
    assert metrics.rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert metrics.rmse([2.0, 2.0], [1.0, 3.0]) == pytest.approx(1.0)
    p, t = rng.standard_normal(50), rng.standard_normal(50)
    total = 0.0
    for a, b in zip(p, t):
        total += (a - b) ** 2
    assert abs(metrics.rmse(p, t) - math.sqrt(total / 50)) < 1e-12
    with pytest.raises(ValueError):
        metrics.rmse([], [])


def test_auc_examples():
    assert metrics.auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert metrics.auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0
    with pytest.raises(ValueError):
        metrics.auc([1.0, 2.0], [1, 1])


def test_auc_matches_all_pairs_with_ties():
    rng = np.random.default_rng(20)
    scores = rng.integers(0, 5, 20).astype(float)  # many ties
    labels = rng.random(20) < 0.4
    assert metrics.auc(scores, labels) == brute_auc(scores, labels)


def test_auc_monotone_invariance():
    rng = np.random.default_rng(50)
    for _ in range(50):
        n = int(rng.integers(4, 30))
        scores = np.round(rng.standard_normal(n), 1)
        labels = np.zeros(n, dtype=bool)
        labels[rng.choice(n, size=int(rng.integers(1, n)), replace=False)] = True
        a = metrics.auc(scores, labels)
        assert a == pytest.approx(brute_auc(scores, labels), abs=1e-12)
        assert metrics.auc(np.exp(3 * scores) - 7, labels) == pytest.approx(a, abs=1e-12)


def test_c3_identity_factor():
    D = np.array([[1.0, 2.0], [3.0, 4.0]])
    obs = core.ObservationSet.full(D)
    fp = FactorPair(np.zeros((2, 2)), np.eye(2))
    assert metrics.c3_constant(D, obs, fp) == pytest.approx(1.0)


def test_c3_zero_residual_raises():
    D = np.outer([1.0, 2.0], [1.0, 1.0])
    fp = FactorPair(np.array([[1.0], [2.0]]), np.array([[1.0], [1.0]]))
    with pytest.raises(metrics.UndefinedConstant):
        metrics.c3_constant(D, core.ObservationSet.full(D), fp)


def test_c3_accepts_boolean_mask_and_triples(rng):
    D = rng.standard_normal((4, 3))
    mask = rng.random((4, 3)) < 0.7
    U, V = rng.standard_normal((4, 2)), rng.standard_normal((3, 2))
    obs = core.ObservationSet.from_mask(D, mask)
    a = metrics.c3_constant(D, mask, FactorPair(U, V))
    assert a == pytest.approx(metrics.c3_constant(D, obs, FactorPair(U, V)))
    from schatten_lr.norms import FactorTriple
    t = FactorTriple(U, np.eye(2), V)
    assert metrics.c3_constant(D, obs, t) == pytest.approx(a)


def test_c3_lower_bound_on_converged_run():
    inst = data.synthetic_mc(60, 60, 3, 0.3, 0.1, 0)
    mu = 5.0
    res = solvers.palm_bitr_mc(inst.observations, solvers.PalmConfig(d=3, mu=mu, rel_tol=1e-6,
                                                                     max_iters=5000))
    assert res.converged
    D = inst.observations.scatter()
    c3 = metrics.c3_constant(D, inst.observations, res.factors)
    assert c3 > metrics.c3_lower_bound(inst.observations.values, mu)


def test_c1_matches_c3_for_projection(rng):
    D = rng.standard_normal((5, 4))
    mask = rng.random((5, 4)) < 0.6
    obs = core.ObservationSet.from_mask(D, mask)
    fp = FactorPair(rng.standard_normal((5, 2)), rng.standard_normal((4, 2)))
    c3 = metrics.c3_constant(D, obs, fp)
    assert metrics.c1_constant(obs, obs.values, fp) == pytest.approx(c3, rel=1e-12)
    G = np.eye(20)[mask.ravel()]
    op = metrics.DenseOperator(G, (5, 4))
    assert metrics.c1_constant(op, obs.values, fp) == pytest.approx(c3, rel=1e-12)
    assert op.op_norm() == pytest.approx(1.0)


def test_c1_general_operator_cases(rng):
    G = rng.standard_normal((6, 4))
    op = metrics.DenseOperator(G, (2, 2))
    fp = FactorPair(np.zeros((2, 2)), np.eye(2))
    b = rng.standard_normal(6)
    want = np.linalg.norm(op.adjoint(b)) / np.linalg.norm(b)
    assert metrics.c1_constant(op, b, fp) == pytest.approx(want)
    U = rng.standard_normal((2, 1))
    V = rng.standard_normal((2, 1))
    with pytest.raises(metrics.UndefinedConstant):
        metrics.c1_constant(op, op.forward(U @ V.T), FactorPair(U, V))
    with pytest.raises(ValueError):
        metrics.DenseOperator(np.ones((3, 5)), (2, 2))


def test_c3_lower_bound_formula():
    b = np.array([3.0, 4.0])
    mu = 2.0
    gamma = 25.0 / 4.0
    assert metrics.c3_lower_bound(b, mu) == pytest.approx(math.sqrt(2.0) / (2 * math.sqrt(2 * gamma)))
    with pytest.raises(metrics.UndefinedConstant):
        metrics.c3_lower_bound(np.zeros(3), 1.0)


def test_report_omits_missing_fields():
    assert metrics.EvalReport(rse=0.5).to_dict() == {"rse": 0.5}


def test_support_f1():
    t = np.array([1, 1, 0, 0], dtype=bool)
    assert metrics.support_f1(t, t) == 1.0
    assert metrics.support_f1(~t, t) == 0.0
    assert metrics.support_f1([1, 0, 1, 0], t) == pytest.approx(0.5)
