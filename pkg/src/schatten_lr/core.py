"""Dense linear-algebra primitives, proximal operators and the observation set.

Dense matrices are plain ``numpy.ndarray`` objects of dtype float64. The
observation set is the only structured carrier: it fixes a canonical
row-major ordering of the observed cells so that measurement vectors are
reproducible.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels


class DecompositionError(RuntimeError):
    """The SVD backend failed to converge."""

    def __init__(self, shape, cause=None):
        self.shape = tuple(shape)
        super().__init__(f"SVD failed for a {shape[0]}x{shape[1]} matrix: {cause}")


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D float64 array or raise ``ValueError``."""
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf")
    return A


class SvdResult(NamedTuple):
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray

    def reconstruct(self):
        return (self.left * self.singulars) @ self.right.T


def thin_svd(M):
    """Full thin SVD, ``M = left @ diag(singulars) @ right.T``.

    ``left`` is m x k and ``right`` is n x k with k = min(m, n).
    """
    A = as_matrix(M)
    try:
        L, s, Rt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(A.shape, exc) from exc
    return SvdResult(L, s, Rt.T)


def _check_tau(tau, name="tau"):
    tau = float(tau)
    if not tau >= 0.0:
        raise ValueError(f"{name} must be non-negative, got {tau}")
    return tau


def svt(M, tau):
    """Singular value thresholding, the prox of ``tau * ||.||_tr``."""
    tau = _check_tau(tau)
    L, s, R = thin_svd(M)
    s = np.maximum(s - tau, 0.0)
    return (L * s) @ R.T


def soft_threshold(y, tau):
    """Componentwise ``sign(y) * max(|y| - tau, 0)``. Scalars stay scalars."""
    tau = _check_tau(tau)
    arr = np.asarray(y, dtype=np.float64)
    out = _kernels.soft_threshold_vec(arr.ravel(), tau).reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def half_threshold(y, lam):
    """Half-thresholding operator, the minimizer of ``(y - x)^2 + lam * |x|^(1/2)``.

    Entries with ``|y| <= 54^(1/3)/4 * lam^(2/3)`` map to zero, including
    the boundary itself. Works on scalars and arrays.
    """
    lam = float(lam)
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    arr = np.asarray(y, dtype=np.float64)
    out = _kernels.half_threshold_vec(arr.ravel(), lam).reshape(arr.shape)
    return float(out) if arr.ndim == 0 else out


def half_threshold_cutoff(lam):
    return (54.0 ** (1.0 / 3.0) / 4.0) * float(lam) ** (2.0 / 3.0)


def spectral_norm(M):
    A = as_matrix(M)
    if A.size == 0:
        return 0.0
    try:
        return float(np.linalg.norm(A, 2))
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(A.shape, exc) from exc


@dataclass(frozen=True, eq=False)
class ObservationSet:
    """Observed cells of an ``shape[0] x shape[1]`` host matrix.

    ``rows``, ``cols`` and ``values`` are parallel arrays in row-major
    sorted order. Build instances with :meth:`from_entries`, which sorts
    and validates; the bare constructor trusts its input.
    """

    shape: tuple
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @classmethod
    def from_entries(cls, shape, rows, cols, values):
        m, n = (int(shape[0]), int(shape[1]))
        if m < 0 or n < 0:
            raise ValueError(f"invalid host shape {shape}")
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        values = np.asarray(values, dtype=np.float64).ravel()
        if not (rows.shape == cols.shape == values.shape):
            raise ValueError("rows, cols and values must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n:
                raise ValueError(f"observation index out of range for host shape {(m, n)}")
        if not np.all(np.isfinite(values)):
            raise ValueError("observed values must be finite")
        flat = rows * n + cols
        order = np.argsort(flat, kind="stable")
        flat = flat[order]
        if flat.size > 1 and np.any(flat[1:] == flat[:-1]):
            k = int(np.flatnonzero(flat[1:] == flat[:-1])[0])
            i, j = divmod(int(flat[k]), n)
            raise ValueError(f"duplicate observation at ({i}, {j})")
        return cls(
            (m, n),
            np.ascontiguousarray(rows[order]),
            np.ascontiguousarray(cols[order]),
            np.ascontiguousarray(values[order]),
        )

    @classmethod
    def from_mask(cls, M, mask):
        """Observe ``M`` wherever the boolean ``mask`` is set."""
        M = as_matrix(M)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != M.shape:
            raise ValueError("mask and matrix shapes differ")
        rows, cols = np.nonzero(mask)
        return cls.from_entries(M.shape, rows, cols, M[rows, cols])

    @classmethod
    def full(cls, M):
        M = as_matrix(M)
        return cls.from_mask(M, np.ones(M.shape, dtype=bool))

    def __len__(self):
        return int(self.rows.size)

    def with_values(self, values):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != self.values.shape:
            raise ValueError("value vector length does not match the observation set")
        return ObservationSet(self.shape, self.rows, self.cols, values)

    def mask(self):
        out = np.zeros(self.shape, dtype=bool)
        out[self.rows, self.cols] = True
        return out

    def project(self, M):
        """Entries of ``M`` at the observed cells, in canonical order."""
        return project_omega(M, self)

    def scatter(self, v=None):
        """Adjoint of :meth:`project`: a dense matrix with ``v`` on the observed cells."""
        v = self.values if v is None else np.asarray(v, dtype=np.float64)
        if v.shape != (len(self),):
            raise ValueError("vector length does not match the observation set")
        out = np.zeros(self.shape)
        out[self.rows, self.cols] = v
        return out

    # Measurement-operator view (A and A*) used by the general C1 path.
    forward = project
    adjoint = scatter

    def op_norm(self):
        """``||A* A||_2``: 1 for a non-empty projection."""
        return 1.0 if len(self) else 0.0


def project_omega(M, omega):
    M = as_matrix(M)
    if M.shape[0] < omega.shape[0] or M.shape[1] < omega.shape[1]:
        raise ValueError(f"mask of host shape {omega.shape} does not fit a {M.shape} matrix")
    return M[omega.rows, omega.cols].copy()


# -- text formats ----------------------------------------------------------


def write_matrix(path, M):
    M = as_matrix(M)
    with open(path, "w") as fh:
        fh.write(f"{M.shape[0]} {M.shape[1]}\n")
        for row in M:
            fh.write(" ".join(repr(float(x)) for x in row))
            fh.write("\n")


def read_matrix(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: line 1: expected 'rows cols'")
        m, n = int(header[0]), int(header[1])
        data = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != n:
                raise ValueError(f"{path}: line {lineno}: expected {n} values, got {len(parts)}")
            data.append([float(x) for x in parts])
    if len(data) != m:
        raise ValueError(f"{path}: expected {m} rows, got {len(data)}")
    return as_matrix(np.array(data, dtype=np.float64).reshape(m, n), name=str(path))


def write_observations(path, obs):
    with open(path, "w") as fh:
        fh.write(f"{obs.shape[0]} {obs.shape[1]} {len(obs)}\n")
        for i, j, v in zip(obs.rows.tolist(), obs.cols.tolist(), obs.values.tolist()):
            fh.write(f"{i} {j} {v!r}\n")


def read_observations(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}: line 1: expected 'rows cols count'")
        m, n, count = (int(x) for x in header)
        rows, cols, vals = [], [], []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 'i j value'")
            rows.append(int(parts[0]))
            cols.append(int(parts[1]))
            vals.append(float(parts[2]))
    if len(rows) != count:
        raise ValueError(f"{path}: header promises {count} entries, found {len(rows)}")
    return ObservationSet.from_entries((m, n), rows, cols, vals)
