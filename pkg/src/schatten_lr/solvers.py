"""Factored Schatten quasi-norm solvers.

``palm_bitr_mc`` / ``palm_tritr_mc`` minimize

    (||U||_tr + ||V||_tr) / 2 + ||P(U V^T) - b||^2 / (2 mu)

(and the three-factor analogue with ``/3``) by proximal alternating
linearized steps. ``ladm_bitr`` / ``ladm_tritr`` handle the non-smooth
losses ``||e||_1`` and ``||e||_{1/2}^{1/2}`` through the split
``e = P(U V^T) - b`` and a linearized augmented Lagrangian.

All measurement operators here are projections onto an
:class:`~schatten_lr.core.ObservationSet`, so ``||A* A||_2 = 1``.
"""

import csv
import enum
import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import _kernels
from .core import ObservationSet, spectral_norm, thin_svd
from .norms import FactorPair, FactorTriple


class Status(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"


class NumericalFailure(RuntimeError):
    """Raised when an iterate or objective stops being finite."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


def _check_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class PalmConfig:
    d: int
    mu: float
    max_iters: int = 500
    rel_tol: float = 1e-4
    step_safety: float = 1.0
    seed: int = 0
    t_min: float = 1e-8
    init: str = "spectral"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"inner rank d must be a positive integer, got {self.d!r}")
        _check_positive("mu", self.mu)
        _check_positive("rel_tol", self.rel_tol)
        _check_positive("t_min", self.t_min)
        if not self.step_safety >= 1.0:
            raise ValueError(f"step_safety must be >= 1, got {self.step_safety}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")


@dataclass(frozen=True)
class LadmConfig:
    """LADM settings.

    ``beta0=None`` picks ``1.25 / ||P*(b)||_2``, the usual data-scaled start
    for linearized ALM. A tiny fixed start such as ``1e-4`` can be passed
    explicitly, but on unit-scale data the first trace-norm thresholds
    ``1 / (2 beta t)`` then zero out both factors and the iteration never
    leaves the origin.
    """

    d: int
    mu: float
    beta0: float = None
    beta_max: float = 1e20
    rho: float = 1.1
    eps: float = 1e-4
    max_iters: int = 2000
    loss: str = "l1"
    seed: int = 0
    t_min: float = 1e-8
    step_safety: float = 1.0
    init: str = "spectral"
    stall_window: int = 50

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"inner rank d must be a positive integer, got {self.d!r}")
        _check_positive("mu", self.mu)
        _check_positive("beta_max", self.beta_max)
        _check_positive("eps", self.eps)
        _check_positive("t_min", self.t_min)
        if self.beta0 is not None:
            _check_positive("beta0", self.beta0)
            if self.beta0 > self.beta_max:
                raise ValueError("beta0 must not exceed beta_max")
        if not self.rho > 1.0:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if self.loss not in ("l1", "lhalf"):
            raise ValueError(f"loss must be 'l1' or 'lhalf', got {self.loss!r}")
        if not self.step_safety >= 1.0:
            raise ValueError(f"step_safety must be >= 1, got {self.step_safety}")
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")


TRACE_COLUMNS = ("iter", "objective", "feasibility", "step_u", "step_v", "step_w", "beta",
                 "iterate_delta")


@dataclass
class SolverTrace:
    """Per-iteration record. Columns a solver does not produce stay ``None``."""

    objective: list = field(default_factory=list)
    feasibility: list = field(default_factory=list)
    step_u: list = field(default_factory=list)
    step_v: list = field(default_factory=list)
    step_w: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    iterate_delta: list = field(default_factory=list)
    multiplier_inf: list = field(default_factory=list)
    initial_objective: float = None

    def append(self, **values):
        for f in fields(self):
            if isinstance(getattr(self, f.name), list):
                getattr(self, f.name).append(values.get(f.name))

    def __len__(self):
        return len(self.objective)

    def column(self, name):
        return np.array([np.nan if v is None else v for v in getattr(self, name)], dtype=float)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRACE_COLUMNS)
            for k in range(len(self)):
                row = [k + 1]
                for name in TRACE_COLUMNS[1:]:
                    v = getattr(self, name)[k]
                    row.append("" if v is None else repr(float(v)))
                writer.writerow(row)


@dataclass
class RecoveryResult:
    factors: tuple
    status: Status
    iterations: int
    trace: SolverTrace
    kkt_residual: float
    e: np.ndarray = None
    multiplier: np.ndarray = None

    @property
    def converged(self):
        return self.status is Status.CONVERGED

    def matrix(self):
        return self.factors.product()


# -- building blocks -------------------------------------------------------

INIT_MODES = ("spectral", "gaussian")


def step_size(factor, op_norm_AA=1.0, t_min=1e-8, step_safety=1.0):
    """Lipschitz step ``max(||A*A||_2 ||F^T F||_2, t_min) * step_safety``."""
    s1 = spectral_norm(factor) if np.size(factor) else 0.0
    gram = s1 * s1  # overflows to inf rather than raising
    return max(op_norm_AA * gram, t_min) * step_safety


def _step_from_gram(gram, t_min, safety):
    return max(gram, t_min) * safety


def _svt(M, tau, trace=None):
    """SVT returning the shrunk matrix and its singular values."""
    if not np.all(np.isfinite(M)):
        n = len(trace) + 1 if trace is not None else "?"
        raise NumericalFailure(f"non-finite proximal input at iteration {n}", trace)
    L, s, R = thin_svd(M)
    s = np.maximum(s - tau, 0.0)
    return np.ascontiguousarray((L * s) @ R.T), s


def _validate(obs, d):
    if not isinstance(obs, ObservationSet):
        raise TypeError("obs must be an ObservationSet")
    if len(obs) == 0:
        raise ValueError("observation set is empty")
    if d > min(obs.shape):
        raise ValueError(f"inner rank d={d} exceeds min host dimension {min(obs.shape)}")


class _Omega:
    """Kernel-ready view of an observation set."""

    def __init__(self, obs):
        self.m, self.n = obs.shape
        self.rows = np.ascontiguousarray(obs.rows, dtype=np.int64)
        self.cols = np.ascontiguousarray(obs.cols, dtype=np.int64)
        self.b = np.ascontiguousarray(obs.values, dtype=np.float64)

    def sample(self, U, V):
        """Observed entries of ``U @ V.T``."""
        return _kernels.observed_products(np.ascontiguousarray(U), np.ascontiguousarray(V),
                                          self.rows, self.cols)

    def times(self, r, M):
        """``R @ M`` for the sparse residual ``R`` holding ``r`` on the observed cells."""
        return _kernels.sparse_matmul(self.rows, self.cols, r, np.ascontiguousarray(M), self.m)

    def times_t(self, r, M):
        """``R.T @ M``."""
        return _kernels.sparse_matmul(self.cols, self.rows, r, np.ascontiguousarray(M), self.n)


def _delta(new, old):
    num = math.sqrt(sum(float(np.sum((a - b) ** 2)) for a, b in zip(new, old)))
    den = 1.0 + math.sqrt(sum(float(np.sum(b * b)) for b in old))
    return num / den


def _fail_if_nonfinite(value, trace, what="objective"):
    if not math.isfinite(value):
        raise NumericalFailure(f"non-finite {what} at iteration {len(trace)}", trace)


# -- initialization --------------------------------------------------------


def init_factors(obs, d, seed=0, mode="spectral"):
    """Starting pair ``(U, V)`` for an observation set.

    ``spectral``: top-``d`` SVD of the zero-filled observations, split as
    ``L sqrt(S)``, ``R sqrt(S)``.
    ``gaussian``: i.i.d. normal entries times ``sqrt(||b||_2 / |Omega|)``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    m, n = obs.shape
    if mode == "spectral":
        if d > min(m, n):
            raise ValueError(f"d={d} exceeds min host dimension")
        Z = obs.scatter()
        L, s, R = thin_svd(Z)
        root = np.sqrt(s[:d])
        return FactorPair(np.ascontiguousarray(L[:, :d] * root), np.ascontiguousarray(R[:, :d] * root))
    if mode == "gaussian":
        rng = np.random.default_rng(seed)
        scale = math.sqrt(np.linalg.norm(obs.values) / len(obs)) if len(obs) else 0.0
        U = rng.standard_normal((m, d)) * scale
        V = rng.standard_normal((n, d)) * scale
        return FactorPair(U, V)
    raise ValueError(f"unknown init mode {mode!r}")


def init_factor_triple(obs, d, seed=0, mode="spectral"):
    """Three-factor analogue of :func:`init_factors` (cube-root split)."""
    m, n = obs.shape
    if mode == "spectral":
        if d < 1 or d > min(m, n):
            raise ValueError(f"invalid inner rank d={d}")
        Z = obs.scatter()
        L, s, R = thin_svd(Z)
        root = np.cbrt(s[:d])
        return FactorTriple(np.ascontiguousarray(L[:, :d] * root), np.diag(root),
                            np.ascontiguousarray(R[:, :d] * root))
    if mode == "gaussian":
        rng = np.random.default_rng(seed)
        scale = np.cbrt(np.linalg.norm(obs.values) / len(obs)) if len(obs) else 0.0
        U = rng.standard_normal((m, d)) * scale
        V = rng.standard_normal((d, d)) * scale
        W = rng.standard_normal((n, d)) * scale
        return FactorTriple(U, V, W)
    raise ValueError(f"unknown init mode {mode!r}")


# -- PALM ------------------------------------------------------------------


def palm_bitr_mc(obs, cfg, init=None):
    """Bi-trace regularized matrix completion by PALM.

    Parameters
    ----------
    obs : ObservationSet
        Observed entries ``b = P(D)``.
    cfg : PalmConfig
    init : FactorPair, optional
        Starting factors; defaults to :func:`init_factors` with ``cfg.init``.

    Returns
    -------
    RecoveryResult
        ``trace.objective`` is non-increasing (steps use the exact
        Lipschitz bound).
    """
    _validate(obs, cfg.d)
    om = _Omega(obs)
    b, mu = om.b, cfg.mu
    U, V = init if init is not None else init_factors(obs, cfg.d, cfg.seed, cfg.init)
    U, V = np.array(U, dtype=float), np.array(V, dtype=float)
    trace = SolverTrace()
    r = om.sample(U, V) - b
    trace.initial_objective = (_tr(U) + _tr(V)) / 2.0 + float(r @ r) / (2.0 * mu)

    status = Status.MAX_ITERS
    for _ in range(cfg.max_iters):
        r = om.sample(U, V) - b
        tu = _step_from_gram(_gram(V), cfg.t_min, cfg.step_safety)
        U1, su = _svt(U - om.times(r, V) / tu, mu / (2.0 * tu), trace)

        r = om.sample(U1, V) - b
        tv = _step_from_gram(_gram(U1), cfg.t_min, cfg.step_safety)
        V1, sv = _svt(V - om.times_t(r, U1) / tv, mu / (2.0 * tv), trace)

        r = om.sample(U1, V1) - b
        obj = (su.sum() + sv.sum()) / 2.0 + float(r @ r) / (2.0 * mu)
        delta = _delta((U1, V1), (U, V))
        trace.append(objective=float(obj), step_u=tu, step_v=tv, iterate_delta=delta)
        _fail_if_nonfinite(obj, trace)
        U, V = U1, V1
        if delta < cfg.rel_tol:
            status = Status.CONVERGED
            break

    factors = FactorPair(U, V)
    return RecoveryResult(factors, status, len(trace), trace, kkt_residual_mc(factors, obs, mu))


def palm_tritr_mc(obs, cfg, init=None):
    """Tri-trace regularized matrix completion, ``X = U V W^T``.

    Gradients of the loss with residual ``R``: ``R W V^T``, ``U^T R W`` and
    ``R^T U V``; Lipschitz bounds ``||V W^T||^2``, ``||U||^2 ||W||^2`` and
    ``||U V||^2``. Each block prox shrinks by ``mu / (3 t)``.
    """
    _validate(obs, cfg.d)
    om = _Omega(obs)
    b, mu = om.b, cfg.mu
    U, V, W = init if init is not None else init_factor_triple(obs, cfg.d, cfg.seed, cfg.init)
    U, V, W = (np.array(x, dtype=float) for x in (U, V, W))
    trace = SolverTrace()
    r = om.sample(U @ V, W) - b
    trace.initial_objective = (_tr(U) + _tr(V) + _tr(W)) / 3.0 + float(r @ r) / (2.0 * mu)

    status = Status.MAX_ITERS
    for _ in range(cfg.max_iters):
        r = om.sample(U @ V, W) - b
        WVt = W @ V.T
        tu = _step_from_gram(_gram(WVt), cfg.t_min, cfg.step_safety)
        U1, su = _svt(U - om.times(r, WVt) / tu, mu / (3.0 * tu), trace)

        r = om.sample(U1 @ V, W) - b
        tv = _step_from_gram(_gram(U1) * _gram(W), cfg.t_min, cfg.step_safety)
        V1, sv = _svt(V - U1.T @ om.times(r, W) / tv, mu / (3.0 * tv), trace)

        UV = U1 @ V1
        r = om.sample(UV, W) - b
        tw = _step_from_gram(_gram(UV), cfg.t_min, cfg.step_safety)
        W1, sw = _svt(W - om.times_t(r, UV) / tw, mu / (3.0 * tw), trace)

        r = om.sample(U1 @ V1, W1) - b
        obj = (su.sum() + sv.sum() + sw.sum()) / 3.0 + float(r @ r) / (2.0 * mu)
        delta = _delta((U1, V1, W1), (U, V, W))
        trace.append(objective=float(obj), step_u=tu, step_v=tv, step_w=tw, iterate_delta=delta)
        _fail_if_nonfinite(obj, trace)
        U, V, W = U1, V1, W1
        if delta < cfg.rel_tol:
            status = Status.CONVERGED
            break

    factors = FactorTriple(U, V, W)
    return RecoveryResult(factors, status, len(trace), trace, kkt_residual_mc(factors, obs, mu))


def _gram(F):
    """``||F^T F||_2``."""
    s1 = spectral_norm(F) if F.size else 0.0
    return s1 * s1


def _tr(F):
    return float(np.sum(thin_svd(F).singulars)) if F.size else 0.0


# -- LADM ------------------------------------------------------------------


def _e_step(z, cfg, beta):
    if cfg.loss == "l1":
        return _kernels.soft_threshold_vec(z, 1.0 / (cfg.mu * beta))
    return _kernels.half_threshold_vec(z, 2.0 / (cfg.mu * beta))


def _loss_value(e, loss):
    if loss == "l1":
        return float(np.sum(np.abs(e)))
    return float(np.sum(np.sqrt(np.abs(e))))


def default_beta0(obs):
    """``1.25 / ||P*(b)||_2`` (1.0 for all-zero data)."""
    top = spectral_norm(obs.scatter())
    return 1.25 / top if top > 0 else 1.0


class _Stall:
    """Tracks whether feasibility improved within the last ``window`` iterations."""

    def __init__(self, window):
        self.window = window
        self.best = math.inf
        self.since = 0

    def update(self, value):
        if value < self.best:
            self.best = value
            self.since = 0
        else:
            self.since += 1
        return self.window and self.since >= self.window


def ladm_bitr(obs, cfg, init=None):
    """Bi-trace recovery with an l1 or l1/2 loss by linearized ADM.

    The split variable ``e`` lives on the observed cells, so the
    unobserved cells are unconstrained (they play the role of the
    residual-valued entries of a full-grid sparse component).

    Terminates when ``||P(U V^T) - b - e||_2 < eps``. If that residual has
    not reached a new minimum for ``stall_window`` iterations the run
    stops early with ``Status.MAX_ITERS``.
    """
    _validate(obs, cfg.d)
    om = _Omega(obs)
    b, mu = om.b, cfg.mu
    U, V = init if init is not None else init_factors(obs, cfg.d, cfg.seed, cfg.init)
    U, V = np.array(U, dtype=float), np.array(V, dtype=float)
    e = np.zeros_like(b)
    lam = np.zeros_like(b)
    beta = cfg.beta0 if cfg.beta0 is not None else default_beta0(obs)
    trace = SolverTrace()
    stall = _Stall(cfg.stall_window)

    status = Status.MAX_ITERS
    for _ in range(cfg.max_iters):
        c = b + e - lam / beta
        r = om.sample(U, V) - c
        tu = _step_from_gram(_gram(V), cfg.t_min, cfg.step_safety)
        U1, su = _svt(U - om.times(r, V) / tu, 1.0 / (2.0 * beta * tu), trace)

        r = om.sample(U1, V) - c
        tv = _step_from_gram(_gram(U1), cfg.t_min, cfg.step_safety)
        V1, sv = _svt(V - om.times_t(r, U1) / tv, 1.0 / (2.0 * beta * tv), trace)

        p = om.sample(U1, V1) - b
        e = _e_step(p + lam / beta, cfg, beta)
        gap = p - e
        lam = lam + beta * gap
        feas = float(np.linalg.norm(gap))
        obj = (su.sum() + sv.sum()) / 2.0 + _loss_value(e, cfg.loss) / mu
        delta = _delta((U1, V1), (U, V))
        trace.append(objective=float(obj), feasibility=feas, step_u=tu, step_v=tv, beta=beta,
                     iterate_delta=delta, multiplier_inf=float(np.max(np.abs(lam))))
        _fail_if_nonfinite(obj, trace)
        _fail_if_nonfinite(feas, trace, "feasibility")
        U, V = U1, V1
        beta = min(cfg.rho * beta, cfg.beta_max)
        if feas < cfg.eps:
            status = Status.CONVERGED
            break
        if stall.update(feas):
            break

    factors = FactorPair(U, V)
    kkt = _ladm_kkt(om, lam, factors)
    return RecoveryResult(factors, status, len(trace), trace, kkt, e=e, multiplier=lam)


def ladm_tritr(obs, cfg, init=None):
    """Tri-trace analogue of :func:`ladm_bitr` (block thresholds ``1 / (3 beta t)``)."""
    _validate(obs, cfg.d)
    om = _Omega(obs)
    b, mu = om.b, cfg.mu
    U, V, W = init if init is not None else init_factor_triple(obs, cfg.d, cfg.seed, cfg.init)
    U, V, W = (np.array(x, dtype=float) for x in (U, V, W))
    e = np.zeros_like(b)
    lam = np.zeros_like(b)
    beta = cfg.beta0 if cfg.beta0 is not None else default_beta0(obs)
    trace = SolverTrace()
    stall = _Stall(cfg.stall_window)

    status = Status.MAX_ITERS
    for _ in range(cfg.max_iters):
        c = b + e - lam / beta
        r = om.sample(U @ V, W) - c
        WVt = W @ V.T
        tu = _step_from_gram(_gram(WVt), cfg.t_min, cfg.step_safety)
        U1, su = _svt(U - om.times(r, WVt) / tu, 1.0 / (3.0 * beta * tu), trace)

        r = om.sample(U1 @ V, W) - c
        tv = _step_from_gram(_gram(U1) * _gram(W), cfg.t_min, cfg.step_safety)
        V1, sv = _svt(V - U1.T @ om.times(r, W) / tv, 1.0 / (3.0 * beta * tv), trace)

        UV = U1 @ V1
        r = om.sample(UV, W) - c
        tw = _step_from_gram(_gram(UV), cfg.t_min, cfg.step_safety)
        W1, sw = _svt(W - om.times_t(r, UV) / tw, 1.0 / (3.0 * beta * tw), trace)

        p = om.sample(U1 @ V1, W1) - b
        e = _e_step(p + lam / beta, cfg, beta)
        gap = p - e
        lam = lam + beta * gap
        feas = float(np.linalg.norm(gap))
        obj = (su.sum() + sv.sum() + sw.sum()) / 3.0 + _loss_value(e, cfg.loss) / mu
        delta = _delta((U1, V1, W1), (U, V, W))
        trace.append(objective=float(obj), feasibility=feas, step_u=tu, step_v=tv, step_w=tw,
                     beta=beta, iterate_delta=delta, multiplier_inf=float(np.max(np.abs(lam))))
        _fail_if_nonfinite(obj, trace)
        _fail_if_nonfinite(feas, trace, "feasibility")
        U, V, W = U1, V1, W1
        beta = min(cfg.rho * beta, cfg.beta_max)
        if feas < cfg.eps:
            status = Status.CONVERGED
            break
        if stall.update(feas):
            break

    factors = FactorTriple(U, V, W)
    kkt = _ladm_kkt(om, lam, factors)
    return RecoveryResult(factors, status, len(trace), trace, kkt, e=e, multiplier=lam)


def _block_gradients(om, r, factors):
    """Per-block products of the sparse residual ``r`` with the other factors."""
    if isinstance(factors, FactorTriple):
        U, V, W = factors
        return [om.times(r, W @ V.T), U.T @ om.times(r, W), om.times_t(r, U @ V)]
    U, V = factors
    return [om.times(r, V), om.times_t(r, U)]


def _ladm_kkt(om, lam, factors):
    """Excess of ``||A*(lam)``-block gradients``||_2`` over the block weight ``1/k``.

    At a KKT point each block gradient of ``<lam, A(X)>`` lies in
    ``-(1/k) d||F||_tr`` for ``k`` factors.
    """
    grads = _block_gradients(om, lam, factors)
    k = float(len(grads))
    return sum(max(0.0, spectral_norm(g) - 1.0 / k) for g in grads)


# -- trace-norm baseline and diagnostics -----------------------------------


def trace_baseline_mc(obs, mu, iters=500, tol=0.0):
    """Proximal gradient on ``mu ||X||_tr + ||P(X) - b||^2 / 2`` with unit step.

    Returns the recovered dense matrix. Stops early when the relative
    change of ``X`` falls below ``tol``.
    """
    if len(obs) == 0:
        raise ValueError("observation set is empty")
    _check_positive("mu", mu)
    X = np.zeros(obs.shape)
    for _ in range(int(iters)):
        G = X - obs.scatter(X[obs.rows, obs.cols] - obs.values)
        X1 = _svt(G, mu)[0]
        if not np.all(np.isfinite(X1)):
            raise NumericalFailure("non-finite iterate in trace-norm baseline")
        change = np.linalg.norm(X1 - X) / (1.0 + np.linalg.norm(X))
        X = X1
        if change < tol:
            break
    return X


def stationarity_norms(factors, obs):
    """``(||Q||_2, ||Q||_F)`` for ``Q = P(D - U V^T) V``."""
    U, V = factors
    om = _Omega(obs)
    r = om.b - om.sample(U, V)
    Q = om.times(r, V)
    return spectral_norm(Q), float(np.linalg.norm(Q))


def kkt_residual_mc(factors, obs, mu):
    """Excess of the block stationarity norms over their first-order bound.

    For the bi-trace objective each of ``||P(D - U V^T) V||_2`` and
    ``||P(D - U V^T)^T U||_2`` must stay below ``mu/2`` at a critical point;
    for the tri-trace objective the three block terms must stay below
    ``mu/3``. Returns the summed excess, zero at a critical point.
    ``factors`` may also be a :class:`RecoveryResult`.
    """
    if isinstance(factors, RecoveryResult):
        factors = factors.factors
    om = _Omega(obs)
    X_at = (om.sample(factors[0] @ factors[1], factors[2]) if isinstance(factors, FactorTriple)
            else om.sample(factors[0], factors[1]))
    grads = _block_gradients(om, om.b - X_at, factors)
    bound = mu / len(grads)
    return sum(max(0.0, spectral_norm(g) - bound) for g in grads)
