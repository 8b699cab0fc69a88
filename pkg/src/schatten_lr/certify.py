"""Seeded numerical certification of the quasi-norm identities.

Every check draws its own matrices from ``numpy.random.default_rng`` seeded
by the battery seed, so a battery is reproducible run to run.
"""

from dataclasses import dataclass

import numpy as np

from . import norms


@dataclass
class CheckResult:
    name: str
    passed: bool
    count: int
    max_deviation: float
    tolerance: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: {self.count} cases, "
                f"max deviation {self.max_deviation:.3e} (tol {self.tolerance:.0e})")


def random_matrix(rng, max_dim, rank=None):
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    if rank is None:
        rank = int(rng.integers(1, min(m, n) + 1))
    return rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n)), rank


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def check_equivalence(trials, max_dim, seed, which="bi", tol=1e-8, fault=0.0):
    """Bi-trace vs Schatten-1/2 (``which='bi'``) or tri-trace vs Schatten-1/3."""
    rng = np.random.default_rng(seed)
    fn, p = (norms.bi_trace, 0.5) if which == "bi" else (norms.tri_trace, 1.0 / 3.0)
    worst = 0.0
    for _ in range(trials):
        X, _ = random_matrix(rng, max_dim)
        got = fn(X) * (1.0 + fault)
        worst = max(worst, _rel(got, norms.schatten_quasi_norm(X, p)))
    name = "bi-trace == Schatten-1/2" if which == "bi" else "tri-trace == Schatten-1/3"
    return CheckResult(name, worst <= tol, trials, worst, tol)


def random_factorization(rng, X, d):
    """A random exact factorization ``X = U @ V.T`` with inner width ``d >= rank(X)``."""
    L, s, R = np.linalg.svd(X, full_matrices=False)
    k = min(d, s.size)
    U0 = np.zeros((X.shape[0], d))
    V0 = np.zeros((X.shape[1], d))
    U0[:, :k] = L[:, :k] * np.sqrt(s[:k])
    V0[:, :k] = R.T[:, :k] * np.sqrt(s[:k])
    G = rng.standard_normal((d, d)) + 0.5 * np.eye(d)
    while abs(np.linalg.det(G)) < 1e-3:
        G = rng.standard_normal((d, d)) + 0.5 * np.eye(d)
    return U0 @ G, V0 @ np.linalg.inv(G).T


def check_minimality(instances, factorizations, max_dim, seed, tol=1e-8):
    """No factorization beats the Schatten-1/2 value under any of the three surrogate forms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for _ in range(instances):
        X, rank = random_matrix(rng, max_dim)
        target = norms.schatten_quasi_norm(X, 0.5)
        d = int(rng.integers(rank, min(X.shape) + 3))
        for _ in range(factorizations):
            U, V = random_factorization(rng, X, d)
            tu, tv = norms.trace_norm(U), norms.trace_norm(V)
            lowest = min(tu * tv, (tu * tu + tv * tv) / 2.0, ((tu + tv) / 2.0) ** 2)
            worst = max(worst, (target - lowest) / max(1.0, target))
            count += 1
    return CheckResult("factorizations never undercut Schatten-1/2", worst <= tol, count, max(worst, 0.0), tol)


def check_norm_chain(trials, max_dim, seed, tol=1e-8, fault=0.0):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        X, _ = random_matrix(rng, max_dim)
        tr, bi, tri, r2tr = norms.property5_gap(X)
        bi *= 1.0 + fault
        r = norms.numerical_rank(X)
        scale = max(1.0, r2tr)
        # positive means a violated inequality
        worst = max(worst, (tr - bi) / scale, (bi - tri) / scale, (tri - r2tr) / scale,
                    (bi - r * tr) / scale)
    return CheckResult("trace <= bi-tr <= tri-tr <= r^2 trace, bi-tr <= r trace",
                       worst <= tol, trials, max(worst, 0.0), tol)


def check_unitary_invariance(trials, max_dim, seed, tol=1e-8, fault=0.0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        X, _ = random_matrix(rng, max_dim)
        P = random_orthogonal(rng, X.shape[0])
        Q = random_orthogonal(rng, X.shape[1])
        Y = P @ X @ Q.T
        worst = max(worst,
                    _rel(norms.bi_trace(Y) * (1.0 + fault), norms.bi_trace(X)),
                    _rel(norms.tri_trace(Y), norms.tri_trace(X)))
    return CheckResult("unitary invariance (bi-tr, tri-tr)", worst <= tol, trials, worst, tol)


def check_homogeneity(trials, max_dim, seed, tol=1e-10):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        X, _ = random_matrix(rng, max_dim)
        a = float(rng.uniform(-10.0, 10.0))
        worst = max(worst, _rel(norms.bi_trace(a * X), abs(a) * norms.bi_trace(X)))
    return CheckResult("bi-tr(aX) == |a| bi-tr(X)", worst <= tol, trials, worst, tol)


def run_battery(trials=200, max_dim=20, seed=0, factorizations=100, fault=0.0):
    """Run every certification check; ``fault`` perturbs bi-trace values as a negative control."""
    minimality_instances = max(1, trials // 10)
    return [
        check_equivalence(trials, max_dim, seed, "bi", fault=fault),
        check_equivalence(trials, max_dim, seed + 1, "tri"),
        check_minimality(minimality_instances, factorizations, max_dim, seed + 2),
        check_norm_chain(trials, max_dim, seed + 3, fault=fault),
        check_unitary_invariance(trials, max_dim, seed + 4, fault=fault),
        check_homogeneity(trials, max_dim, seed + 5),
    ]
