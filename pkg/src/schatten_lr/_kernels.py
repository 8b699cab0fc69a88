"""Observed-entry kernels shared by every solver iteration.

Each kernel has a numba implementation and a pure-numpy fallback. The
active backend is picked once at import time from ``SCHATTEN_LR_BACKEND``
(``numba`` or ``numpy``); numba is used when it imports and the variable
is unset. Both implementations are always importable under their
``_nb``/``_np`` names so they can be compared directly.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    numba = None


def observed_products_np(U, V, rows, cols):
    """Entries ``(U @ V.T)[rows, cols]`` without forming the dense product."""
    return np.einsum("ij,ij->i", U[rows], V[cols])


def sparse_matmul_np(rows, cols, vals, M, n_out):
    """``R @ M`` where ``R`` is the COO matrix ``(vals, (rows, cols))``.

    ``n_out`` is the number of rows of ``R``. To get ``R.T @ M`` swap
    ``rows`` and ``cols``.
    """
    d = M.shape[1]
    out = np.empty((n_out, d))
    for j in range(d):
        out[:, j] = np.bincount(rows, weights=vals * M[cols, j], minlength=n_out)
    return out


def soft_threshold_np(y, tau):
    return np.sign(y) * np.maximum(np.abs(y) - tau, 0.0)


def half_threshold_np(y, lam):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    a = np.abs(y)
    keep = a > (54.0 ** (1.0 / 3.0) / 4.0) * lam ** (2.0 / 3.0)
    yk = y[keep]
    phi = np.arccos((lam / 8.0) * (np.abs(yk) / 3.0) ** -1.5)
    out[keep] = (2.0 / 3.0) * yk * (1.0 + np.cos(2.0 * np.pi / 3.0 - (2.0 / 3.0) * phi))
    return out


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def observed_products_nb(U, V, rows, cols):
        n = rows.shape[0]
        d = U.shape[1]
        out = np.empty(n)
        for k in range(n):
            i = rows[k]
            j = cols[k]
            s = 0.0
            for c in range(d):
                s += U[i, c] * V[j, c]
            out[k] = s
        return out

    @numba.njit(cache=True, nogil=True)
    def sparse_matmul_nb(rows, cols, vals, M, n_out):
        d = M.shape[1]
        out = np.zeros((n_out, d))
        for k in range(rows.shape[0]):
            i = rows[k]
            j = cols[k]
            v = vals[k]
            for c in range(d):
                out[i, c] += v * M[j, c]
        return out

    @numba.njit(cache=True, nogil=True)
    def soft_threshold_nb(y, tau):
        out = np.empty_like(y)
        for k in range(y.shape[0]):
            a = abs(y[k]) - tau
            if a > 0.0:
                out[k] = a if y[k] > 0.0 else -a
            else:
                out[k] = 0.0
        return out

    @numba.njit(cache=True, nogil=True)
    def half_threshold_nb(y, lam):
        out = np.zeros_like(y)
        thresh = (54.0 ** (1.0 / 3.0) / 4.0) * lam ** (2.0 / 3.0)
        for k in range(y.shape[0]):
            a = abs(y[k])
            if a > thresh:
                phi = np.arccos((lam / 8.0) * (a / 3.0) ** -1.5)
                out[k] = (2.0 / 3.0) * y[k] * (1.0 + np.cos(2.0 * np.pi / 3.0 - (2.0 / 3.0) * phi))
        return out

else:  # pragma: no cover
    observed_products_nb = observed_products_np
    sparse_matmul_nb = sparse_matmul_np
    soft_threshold_nb = soft_threshold_np
    half_threshold_nb = half_threshold_np


def _select_backend():
    requested = os.environ.get("SCHATTEN_LR_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise ValueError(f"SCHATTEN_LR_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    if requested == "numpy" or numba is None:
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    observed_products = observed_products_nb
    sparse_matmul = sparse_matmul_nb
    _soft = soft_threshold_nb
    _half = half_threshold_nb
else:
    observed_products = observed_products_np
    sparse_matmul = sparse_matmul_np
    _soft = soft_threshold_np
    _half = half_threshold_np


def soft_threshold_vec(y, tau):
    return _soft(np.ascontiguousarray(y, dtype=np.float64), float(tau))


def half_threshold_vec(y, lam):
    return _half(np.ascontiguousarray(y, dtype=np.float64), float(lam))
