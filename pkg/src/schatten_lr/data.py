"""Synthetic instances and ratings-file ingestion."""

import math
from dataclasses import dataclass

import numpy as np

from .core import ObservationSet


class RatingsParseError(ValueError):
    def __init__(self, path, lineno, message):
        self.path = str(path)
        self.lineno = lineno
        super().__init__(f"{path}: line {lineno}: {message}")


@dataclass(frozen=True)
class SyntheticInstance:
    X0: np.ndarray
    observations: ObservationSet
    nf: float
    sr: float
    rank: int
    seed: int


@dataclass(frozen=True)
class RatingsDataset:
    num_users: int
    num_items: int
    train: ObservationSet
    test: ObservationSet
    user_index: dict
    item_index: dict


def round_half_up(x):
    return int(math.floor(x + 0.5))


def gen_low_rank(m, n, r, seed):
    """``P @ Q.T`` with i.i.d. standard normal ``P`` (m x r) and ``Q`` (n x r)."""
    if not 0 <= r <= min(m, n):
        raise ValueError(f"rank {r} out of range for a {m}x{n} matrix")
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((m, r))
    Q = rng.standard_normal((n, r))
    return P @ Q.T


def sample_omega(m, n, count, rng):
    """``count`` distinct cells drawn uniformly without replacement, row-major sorted."""
    flat = np.sort(rng.choice(m * n, size=count, replace=False))
    return flat // n, flat % n


def gen_noisy_observations(X0, sr, nf, seed):
    """Observe ``X0 + nf * Theta`` on ``round(sr * m * n)`` uniformly sampled cells."""
    if not 0.0 < sr <= 1.0:
        raise ValueError(f"sampling ratio must lie in (0, 1], got {sr}")
    if not nf >= 0.0:
        raise ValueError(f"noise factor must be non-negative, got {nf}")
    X0 = np.asarray(X0, dtype=float)
    m, n = X0.shape
    rng = np.random.default_rng(seed)
    rows, cols = sample_omega(m, n, round_half_up(sr * m * n), rng)
    # noise is drawn on the full grid, then projected
    noisy = X0 + nf * rng.standard_normal((m, n)) if nf > 0 else X0
    return ObservationSet.from_entries((m, n), rows, cols, noisy[rows, cols])


def synthetic_mc(m, n, r, sr, nf, seed):
    X0 = gen_low_rank(m, n, r, seed)
    obs = gen_noisy_observations(X0, sr, nf, seed + 1_000_003)
    return SyntheticInstance(X0, obs, nf, sr, r, seed)


@dataclass(frozen=True)
class RpcaInstance:
    X0: np.ndarray
    spikes: np.ndarray
    observations: ObservationSet


def synthetic_rpca(m, n, r, spike_frac, spike_mag, missing_frac, seed):
    """Low-rank ``X0`` plus sparse spikes of magnitude ``spike_mag`` with random sign.

    ``missing_frac`` of the cells are hidden uniformly at random; spikes may
    land on hidden cells.
    """
    rng = np.random.default_rng(seed)
    X0 = rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
    spikes = np.zeros((m, n))
    k = round_half_up(spike_frac * m * n)
    if k:
        si, sj = sample_omega(m, n, k, rng)
        spikes[si, sj] = spike_mag * rng.choice([-1.0, 1.0], size=k)
    observed = round_half_up((1.0 - missing_frac) * m * n)
    rows, cols = sample_omega(m, n, observed, rng)
    D = X0 + spikes
    obs = ObservationSet.from_entries((m, n), rows, cols, D[rows, cols])
    return RpcaInstance(X0, spikes, obs)


# -- ratings files ---------------------------------------------------------

SEPARATORS = {"doublecolon": "::", "comma": ",", "tab": "\t"}


def _raw_id(token):
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        return token


def load_ratings(path, fmt="doublecolon"):
    """Parse ``user<sep>item<sep>rating[<sep>timestamp]`` lines into triples.

    Blank lines are skipped; anything else malformed raises
    :class:`RatingsParseError` naming the 1-based line.
    """
    try:
        sep = SEPARATORS[fmt.lower()]
    except KeyError:
        raise ValueError(f"unknown ratings format {fmt!r}; choose from {sorted(SEPARATORS)}") from None
    triples = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split(sep)
            if len(parts) not in (3, 4):
                raise RatingsParseError(path, lineno, f"expected 3 or 4 fields, got {len(parts)}")
            try:
                rating = float(parts[2])
            except ValueError:
                raise RatingsParseError(path, lineno, f"bad rating {parts[2]!r}") from None
            if not math.isfinite(rating):
                raise RatingsParseError(path, lineno, "rating is not finite")
            triples.append((_raw_id(parts[0]), _raw_id(parts[1]), rating))
    if not triples:
        raise RatingsParseError(path, 1, "file contains no ratings")
    return triples


def split_ratings(triples, train_fraction=0.9, seed=0):
    """Seeded uniform split; the first ``ceil(fraction * count)`` shuffled triples train."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    if len(triples) < 2:
        raise ValueError("need at least two ratings to split")
    seen = set()
    for u, i, _ in triples:
        if (u, i) in seen:
            raise ValueError(f"duplicate rating for user {u!r}, item {i!r}")
        seen.add((u, i))

    # dense indices follow first appearance in the file
    user_index, item_index = {}, {}
    for u, i, _ in triples:
        user_index.setdefault(u, len(user_index))
        item_index.setdefault(i, len(item_index))

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(triples))
    n_train = min(math.ceil(train_fraction * len(triples)), len(triples) - 1)
    shape = (len(user_index), len(item_index))

    def build(idx):
        rows = [user_index[triples[k][0]] for k in idx]
        cols = [item_index[triples[k][1]] for k in idx]
        vals = [triples[k][2] for k in idx]
        return ObservationSet.from_entries(shape, rows, cols, vals)

    return RatingsDataset(shape[0], shape[1], build(order[:n_train]), build(order[n_train:]),
                          user_index, item_index)


def synthetic_ratings(num_users, num_items, count, rank, noise, seed, scale=1.0, offset=3.5):
    """Ratings triples from a rank-``rank`` model plus Gaussian noise.

    Values are ``offset + scale * (P Q^T)_ui / sqrt(rank) + noise * N(0, 1)``
    on ``count`` distinct cells; ids are 1-based like MovieLens.
    """
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((num_users, rank))
    Q = rng.standard_normal((num_items, rank))
    rows, cols = sample_omega(num_users, num_items, count, rng)
    signal = np.einsum("ij,ij->i", P[rows], Q[cols]) / math.sqrt(rank)
    vals = offset + scale * signal + noise * rng.standard_normal(count)
    return [(int(u) + 1, int(i) + 1, float(v)) for u, i, v in zip(rows, cols, vals)]


def write_ratings(path, triples, fmt="doublecolon"):
    sep = SEPARATORS[fmt.lower()]
    with open(path, "w") as fh:
        for u, i, v in triples:
            fh.write(f"{u}{sep}{i}{sep}{v!r}\n")
