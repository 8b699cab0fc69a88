"""Schatten quasi-norms and their bi-trace / tri-trace factored forms."""

from typing import NamedTuple

import numpy as np

from .core import as_matrix, thin_svd

RANK_CUTOFF = 1e-10


class FactorPair(NamedTuple):
    U: np.ndarray
    V: np.ndarray

    def product(self):
        return self.U @ self.V.T


class FactorTriple(NamedTuple):
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray

    def product(self):
        return self.U @ self.V @ self.W.T


def make_pair(U, V):
    U, V = as_matrix(U, "U"), as_matrix(V, "V")
    if U.shape[1] != V.shape[1] or U.shape[1] < 1:
        raise ValueError(f"factor widths must agree and be >= 1, got {U.shape} and {V.shape}")
    return FactorPair(U, V)


def make_triple(U, V, W):
    U, V, W = as_matrix(U, "U"), as_matrix(V, "V"), as_matrix(W, "W")
    d = U.shape[1]
    if d < 1 or V.shape != (d, d) or W.shape[1] != d:
        raise ValueError(f"inconsistent inner dimensions: {U.shape}, {V.shape}, {W.shape}")
    return FactorTriple(U, V, W)


def _drop_roundoff(s, shape):
    """Zero singular values at or below ``sigma_1 * max(m, n) * eps``.

    These are round-off images of exact zeros; a fractional power such as
    ``s ** (1/3)`` would otherwise lift ``1e-16`` to ``~1e-5``.
    """
    if s.size == 0:
        return s
    cut = s[0] * max(shape) * np.finfo(np.float64).eps
    return np.where(s > cut, s, 0.0)


def singular_values(X):
    """Singular values with round-off below the usual matrix-rank tolerance set to zero."""
    A = as_matrix(X)
    if A.size == 0:
        return np.zeros(0)
    return _drop_roundoff(thin_svd(A).singulars, A.shape)


def schatten_quasi_norm(X, p):
    """``(sum_i sigma_i(X)^p)^(1/p)`` for ``0 < p <= 2``."""
    p = float(p)
    if not 0.0 < p <= 2.0:
        raise ValueError(f"p must lie in (0, 2], got {p}")
    s = singular_values(X)
    s = s[s > 0.0]
    if s.size == 0:
        return 0.0
    # factor out the largest value so tiny p does not overflow
    top = s[0]
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def trace_norm(X):
    return float(np.sum(singular_values(X)))


def fro_norm(X):
    return float(np.linalg.norm(as_matrix(X)))


def bi_trace_factors(X):
    """Balanced factors ``L sqrt(S)``, ``R sqrt(S)`` attaining the bi-trace minimum."""
    A = as_matrix(X)
    L, s, R = thin_svd(A)
    root = np.sqrt(_drop_roundoff(s, A.shape))
    return FactorPair(L * root, R * root)


def tri_trace_factors(X):
    A = as_matrix(X)
    L, s, R = thin_svd(A)
    root = np.cbrt(_drop_roundoff(s, A.shape))
    return FactorTriple(L * root, np.diag(root), R * root)


def bi_trace(X):
    """Bi-trace quasi-norm, ``||U||_tr * ||V||_tr`` at the balanced SVD factorization."""
    U, V = bi_trace_factors(X)
    return trace_norm(U) * trace_norm(V)


def tri_trace(X):
    U, V, W = tri_trace_factors(X)
    return trace_norm(U) * trace_norm(V) * trace_norm(W)


def bi_trace_surrogate(fp):
    """Squared-mean form ``((||U||_tr + ||V||_tr) / 2)^2``.

    Bounded below by the Schatten-1/2 quasi-norm of ``U @ V.T``, with
    equality at balanced factors.
    """
    U, V = fp
    return ((trace_norm(U) + trace_norm(V)) / 2.0) ** 2


def tri_trace_surrogate(ft):
    U, V, W = ft
    return ((trace_norm(U) + trace_norm(V) + trace_norm(W)) / 3.0) ** 3


def numerical_rank(X, cutoff=RANK_CUTOFF):
    s = singular_values(X)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > cutoff * s[0]))


def property5_gap(X):
    """``(||X||_tr, ||X||_Bi-tr, ||X||_Tri-tr, r^2 ||X||_tr)`` with r the numerical rank.

    For any X the tuple is non-decreasing and ``||X||_Bi-tr <= r ||X||_tr``.
    """
    tr = trace_norm(X)
    r = numerical_rank(X)
    return (tr, bi_trace(X), tri_trace(X), r * r * tr)
