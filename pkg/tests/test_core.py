import numpy as np
import pytest

from schatten_lr import core
from schatten_lr.core import ObservationSet


def grid_argmin(f, lo, hi, step=1e-6):
    """Brute-force minimizer on a grid anchored at 0 (so x = 0 is always a candidate)."""
    k = np.arange(int(np.floor(lo / step)), int(np.ceil(hi / step)) + 1)
    x = k * step
    return x[np.argmin(f(x))]


# -- thin_svd -----------------------------------------------------------------


def test_svd_identity():
    assert np.allclose(core.thin_svd(np.eye(3)).singulars, [1, 1, 1])


def test_svd_all_ones():
    assert np.allclose(core.thin_svd(np.ones((2, 2))).singulars, [2, 0], atol=1e-14)


def test_svd_reconstruction_and_orthonormality(rng):
    M = rng.standard_normal((5, 4))
    res = core.thin_svd(M)
    assert res.left.shape == (5, 4) and res.right.shape == (4, 4)
    assert np.linalg.norm(res.reconstruct() - M) < 1e-10
    assert np.linalg.norm(res.left.T @ res.left - np.eye(4), 2) < 1e-10
    assert np.linalg.norm(res.right.T @ res.right - np.eye(4), 2) < 1e-10
    assert np.all(np.diff(res.singulars) <= 0) and np.all(res.singulars >= 0)


def test_svd_wide_matrix_shapes(rng):
    res = core.thin_svd(rng.standard_normal((3, 7)))
    assert res.left.shape == (3, 3) and res.right.shape == (7, 3)


def test_svd_rejects_nonfinite():
    with pytest.raises(ValueError):
        core.thin_svd(np.array([[1.0, np.nan]]))


def test_svd_backend_failure_is_wrapped(monkeypatch):
    def boom(*a, **k):
        raise np.linalg.LinAlgError("SVD did not converge")

    monkeypatch.setattr(core.np.linalg, "svd", boom)
    with pytest.raises(core.DecompositionError, match="3x2"):
        core.thin_svd(np.ones((3, 2)))


# -- svt ----------------------------------------------------------------------


def test_svt_zero_threshold_is_identity(rng):
    M = rng.standard_normal((6, 4))
    assert np.linalg.norm(core.svt(M, 0.0) - M) < 1e-10


def test_svt_diagonal():
    assert np.allclose(core.svt(np.diag([3.0, 1.0]), 2.0), np.diag([1.0, 0.0]))


def test_svt_negative_tau():
    with pytest.raises(ValueError):
        core.svt(np.eye(2), -0.1)


def test_svt_perturbation_oracle():
    rng = np.random.default_rng(4)
    M = rng.standard_normal((4, 4))
    tau = 0.5
    X = core.svt(M, tau)

    def obj(Y):
        s = np.linalg.svd(Y, compute_uv=False)
        return tau * s.sum(axis=-1) + 0.5 * np.sum((Y - M) ** 2, axis=(-2, -1))

    P = rng.standard_normal((1000, 4, 4))
    P *= 1e-2 / np.linalg.norm(P, axis=(1, 2), keepdims=True)
    assert np.all(obj(X[None] + P) >= obj(X) - 1e-12)


# -- soft / half thresholds ----------------------------------------------------


def test_soft_threshold_examples():
    assert core.soft_threshold(0.0, 2.0) == 0.0
    assert core.soft_threshold(5.0, 2.0) == 3.0
    assert core.soft_threshold(-5.0, 2.0) == -3.0


def test_soft_threshold_grid_oracle():
    x = grid_argmin(lambda x: 0.4 * np.abs(x) + 0.5 * (x - 1.3) ** 2, -3.0, 3.0)
    assert abs(core.soft_threshold(1.3, 0.4) - x) < 1e-5


def test_soft_threshold_vector_and_errors():
    out = core.soft_threshold(np.array([[-1.0, 0.2], [3.0, -0.4]]), 0.5)
    assert np.allclose(out, [[-0.5, 0.0], [2.5, 0.0]])
    with pytest.raises(ValueError):
        core.soft_threshold(1.0, -1.0)


def test_half_threshold_examples():
    assert core.half_threshold(0.0, 1.0) == 0.0
    assert core.half_threshold(0.5, 1.0) == 0.0
    x = grid_argmin(lambda x: (2.0 - x) ** 2 + np.sqrt(np.abs(x)), -3.0, 3.0)
    got = core.half_threshold(2.0, 1.0)
    assert abs(got - x) < 1e-4
    assert abs(got - 1.81) < 0.01


def test_half_threshold_cutoff_value():
    assert core.half_threshold_cutoff(1.0) == pytest.approx(0.94494, abs=1e-5)


def test_half_threshold_boundary_maps_to_zero():
    lam = 1.7
    t = core.half_threshold_cutoff(lam)
    assert core.half_threshold(t, lam) == 0.0
    assert core.half_threshold(-t, lam) == 0.0
    assert core.half_threshold(t - 1e-6, lam) == 0.0
    above = core.half_threshold(t + 1e-6, lam)
    assert above > 0.5 * t  # the nonzero branch jumps to (2/3) y
    assert core.half_threshold(-(t + 1e-6), lam) == -above


def test_half_threshold_odd_and_errors():
    y = np.linspace(-5, 5, 41)
    assert np.array_equal(core.half_threshold(-y, 0.7), -core.half_threshold(y, 0.7))
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            core.half_threshold(1.0, bad)


# -- observation set / projection ---------------------------------------------


def test_project_full_mask_row_major():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    obs = ObservationSet.full(M)
    assert np.array_equal(core.project_omega(M, obs), [1, 2, 3, 4])


def test_project_empty_mask():
    obs = ObservationSet.from_entries((2, 2), [], [], [])
    assert core.project_omega(np.ones((2, 2)), obs).size == 0
    assert obs.op_norm() == 0.0


def test_scatter_project_round_trip(rng):
    obs = ObservationSet.from_entries((4, 5), [0, 3, 2], [4, 0, 2], [1.0, 2.0, 3.0])
    v = rng.standard_normal(3)
    assert np.array_equal(obs.project(obs.scatter(v)), v)


def test_adjoint_identity(rng):
    for _ in range(50):
        m, n = rng.integers(1, 9, size=2)
        mask = rng.random((m, n)) < 0.5
        M = rng.standard_normal((m, n))
        obs = ObservationSet.from_mask(M, mask)
        v = rng.standard_normal(len(obs))
        lhs = float(obs.project(M) @ v)
        rhs = float(np.sum(M * obs.scatter(v)))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_entries_are_sorted_row_major():
    obs = ObservationSet.from_entries((3, 3), [2, 0, 1], [0, 2, 1], [5.0, 6.0, 7.0])
    assert obs.rows.tolist() == [0, 1, 2]
    assert obs.cols.tolist() == [2, 1, 0]
    assert obs.values.tolist() == [6.0, 7.0, 5.0]


@pytest.mark.parametrize("rows,cols,vals,msg", [
    ([0, 0], [1, 1], [1.0, 2.0], "duplicate"),
    ([3], [0], [1.0], "out of range"),
    ([0], [-1], [1.0], "out of range"),
    ([0], [0], [np.inf], "finite"),
    ([0, 1], [0], [1.0], "equal length"),
])
def test_observation_set_validation(rows, cols, vals, msg):
    with pytest.raises(ValueError, match=msg):
        ObservationSet.from_entries((3, 3), rows, cols, vals)


def test_project_rejects_small_host():
    obs = ObservationSet.from_entries((3, 3), [2], [2], [1.0])
    with pytest.raises(ValueError):
        core.project_omega(np.ones((2, 2)), obs)


# -- spectral norm --------------------------------------------------------------


def test_spectral_norm_examples(rng):
    assert core.spectral_norm(np.eye(4)) == pytest.approx(1.0)
    assert core.spectral_norm(np.ones((2, 2))) == pytest.approx(2.0)
    M = rng.standard_normal((7, 3))
    s1 = core.thin_svd(M).singulars[0]
    assert abs(core.spectral_norm(M) - s1) <= 1e-10 * s1
    assert core.spectral_norm(np.zeros((0, 3))) == 0.0


# -- text formats -----------------------------------------------------------------


def test_matrix_round_trip(tmp_path, rng):
    M = rng.standard_normal((3, 4))
    core.write_matrix(tmp_path / "m.txt", M)
    assert np.array_equal(core.read_matrix(tmp_path / "m.txt"), M)


def test_observation_round_trip(tmp_path):
    obs = ObservationSet.from_entries((4, 5), [0, 3], [4, 1], [0.1, -2.5])
    core.write_observations(tmp_path / "o.txt", obs)
    back = core.read_observations(tmp_path / "o.txt")
    assert back.shape == (4, 5)
    assert np.array_equal(back.rows, obs.rows) and np.array_equal(back.values, obs.values)


def test_matrix_file_errors(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2 2\n1 2\n3\n")
    with pytest.raises(ValueError, match="line 3"):
        core.read_matrix(p)
    p.write_text("2 2\n1 2\n")
    with pytest.raises(ValueError, match="expected 2 rows"):
        core.read_matrix(p)


def test_observation_file_count_mismatch(tmp_path):
    p = tmp_path / "o.txt"
    p.write_text("2 2 3\n0 0 1.0\n")
    with pytest.raises(ValueError, match="promises 3"):
        core.read_observations(p)
