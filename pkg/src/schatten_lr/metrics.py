"""Evaluation measures and the data-dependent recovery constants C1 / C3."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import as_matrix


class UndefinedConstant(ArithmeticError):
    """The residual vanished, so the C1/C3 quotient has no value."""


@dataclass
class EvalReport:
    rse: float = None
    rmse: float = None
    auc: float = None
    c1: float = None
    c3: float = None
    c3_lower_bound: float = None

    def to_dict(self):
        """Present fields only, ready for JSON."""
        return {k: v for k, v in asdict(self).items() if v is not None}


def rse(X, X0):
    """``||X - X0||_F / ||X0||_F``."""
    X, X0 = as_matrix(X, "X"), as_matrix(X0, "X0")
    if X.shape != X0.shape:
        raise ValueError(f"shape mismatch {X.shape} vs {X0.shape}")
    ref = np.linalg.norm(X0)
    if ref == 0.0:
        raise ValueError("RSE is undefined for a zero reference matrix")
    return float(np.linalg.norm(X - X0) / ref)


def rmse(predictions, truth):
    predictions = np.asarray(predictions, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if truth.size == 0:
        raise ValueError("RMSE needs a non-empty test set")
    if predictions.shape != truth.shape:
        raise ValueError("predictions and truth differ in length")
    return float(np.sqrt(np.mean((predictions - truth) ** 2)))


def auc(scores, labels):
    """Mann-Whitney AUC: P(random positive outscores random negative), ties count 1/2."""
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).ravel().astype(bool)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels differ in length")
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both positive and negative labels")
    order = np.argsort(scores, kind="mergesort")
    s = scores[order]
    ranks = np.empty(s.size)
    # average ranks over tied blocks
    start = 0
    while start < s.size:
        stop = start + 1
        while stop < s.size and s[stop] == s[start]:
            stop += 1
        ranks[start:stop] = 0.5 * (start + stop - 1) + 1.0
        start = stop
    pos_rank_sum = ranks[labels[order]].sum()
    return float((pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def c3_constant(D, omega, factors):
    """``||P(D - U V^T) V||_F / ||P(D - U V^T)||_F``.

    ``omega`` is an ObservationSet (or boolean mask) for the observed cells.
    """
    U, V = factors[0], factors[1]
    if len(factors) == 3:
        U, V = factors[0], factors[2] @ factors[1].T
    mask = omega.mask() if hasattr(omega, "mask") else np.asarray(omega, dtype=bool)
    R = np.where(mask, as_matrix(D, "D") - U @ V.T, 0.0)
    denom = np.linalg.norm(R)
    if denom == 0.0:
        raise UndefinedConstant("C3 is undefined: the observed residual is exactly zero")
    return float(np.linalg.norm(R @ V) / denom)


def c3_lower_bound(b, mu):
    """``sqrt(mu) / (2 sqrt(2 gamma))`` with ``gamma = ||P(D)||_F^2 / (2 mu)``."""
    gamma = float(np.dot(b, b)) / (2.0 * mu)
    if gamma <= 0.0:
        raise UndefinedConstant("C3 lower bound needs non-zero observations")
    return math.sqrt(mu) / (2.0 * math.sqrt(2.0 * gamma))


def c1_constant(op, b, factors):
    """``||A*(b - A(U V^T)) V||_F / ||b - A(U V^T)||_2`` for a measurement operator.

    ``op`` needs ``forward(X) -> vector`` and ``adjoint(vector) -> matrix``.
    """
    U, V = factors[0], factors[1]
    if len(factors) == 3:
        U, V = factors[0], factors[2] @ factors[1].T
    resid = np.asarray(b, dtype=float) - op.forward(U @ V.T)
    denom = np.linalg.norm(resid)
    if denom == 0.0:
        raise UndefinedConstant("C1 is undefined: the measurement residual is exactly zero")
    return float(np.linalg.norm(op.adjoint(resid) @ V) / denom)


class DenseOperator:
    """General linear map ``A(X) = G @ vec(X)`` (row-major vec) for the C1 path."""

    def __init__(self, G, shape):
        self.G = np.asarray(G, dtype=float)
        self.shape = tuple(shape)
        if self.G.shape[1] != self.shape[0] * self.shape[1]:
            raise ValueError("operator width must equal rows * cols of the host matrix")

    def forward(self, X):
        return self.G @ np.asarray(X, dtype=float).ravel()

    def adjoint(self, y):
        return (self.G.T @ np.asarray(y, dtype=float)).reshape(self.shape)

    def op_norm(self):
        return float(np.linalg.norm(self.G, 2) ** 2)


def support_f1(estimate_mask, truth_mask):
    est = np.asarray(estimate_mask, dtype=bool)
    tru = np.asarray(truth_mask, dtype=bool)
    tp = int(np.sum(est & tru))
    if tp == 0:
        return 0.0
    precision = tp / int(est.sum())
    recall = tp / int(tru.sum())
    return 2.0 * precision * recall / (precision + recall)
