"""Experiment harness: ``schatten-lr {synth-mc, rpca, cf, gen-ratings, verify}``.

Every subcommand is deterministic for a fixed ``--seed``. The only
run-to-run differences in the emitted files are the ``wall_time`` fields.
Exit codes: 0 success, 1 runtime or solver failure, 2 usage error.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import certify, core, data, metrics, solvers
from ._kernels import BACKEND

THREADS_ENV = "SCHATTEN_LR_THREADS"
AGGREGATE_COLUMNS = ("trials", "failed", "rse_mean", "rse_std", "baseline_rse_mean",
                     "baseline_rse_std", "iterations_mean", "wall_time_mean")


# -- argument types ---------------------------------------------------------


def _number(kind, lo=None, hi=None, lo_open=False):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a {kind.__name__}, got {text!r}") from None
        if kind is float and not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
        if lo is not None and (value < lo or (lo_open and value == lo)):
            op = ">" if lo_open else ">="
            raise argparse.ArgumentTypeError(f"must be {op} {lo}, got {text}")
        if hi is not None and value > hi:
            raise argparse.ArgumentTypeError(f"must be <= {hi}, got {text}")
        return value
    return parse


positive_int = _number(int, 1)
non_negative_int = _number(int, 0)
positive_float = _number(float, 0.0, lo_open=True)
non_negative_float = _number(float, 0.0)
ratio = _number(float, 0.0, 1.0, lo_open=True)
fraction = _number(float, 0.0, 1.0)


def int_list(text):
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return values


# -- file helpers -----------------------------------------------------------


def _atomic_write(path, text):
    """Write via a sibling temp file and rename, so readers never see a partial file."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_with(path, writer):
    """Run ``writer(tmp_path)`` then rename onto ``path``."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path, payload):
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _atomic_write(path, buf.getvalue())


def _fmt(x):
    return "" if x is None else repr(float(x))


def _mean_std(values):
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def worker_count(jobs):
    raw = os.environ.get(THREADS_ENV, "")
    cap = os.cpu_count() or 1
    if raw.strip():
        try:
            cap = max(1, int(raw))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    return max(1, min(cap, jobs))


def _run_trials(fn, count):
    """Run ``fn(k)`` for ``k < count`` on a capped thread pool, in trial order."""
    with ThreadPoolExecutor(max_workers=worker_count(count)) as pool:
        return list(pool.map(fn, range(count)))


# -- synth-mc ---------------------------------------------------------------


def default_baseline_mu(m, n, sr, nf):
    """Noise-level choice ``nf sqrt(sr) (sqrt(m) + sqrt(n))``, floored at 1e-2."""
    return max(nf * math.sqrt(sr) * (math.sqrt(m) + math.sqrt(n)), 1e-2)


def _palm(solver):
    return solvers.palm_tritr_mc if solver == "tritr" else solvers.palm_bitr_mc


def _synth_trial(args, k, out_dir):
    seed = args.seed + k
    stem = f"trial_{k:03d}"
    inst = data.synthetic_mc(args.m, args.n, args.rank, args.sr, args.nf, seed)
    cfg = solvers.PalmConfig(d=args.d, mu=args.mu, max_iters=args.max_iters, rel_tol=args.rel_tol,
                             seed=seed)
    record = {
        "instance": {"kind": "synthetic-mc", "m": args.m, "n": args.n, "rank": args.rank,
                     "sr": args.sr, "nf": args.nf, "seed": seed,
                     "observed": len(inst.observations)},
        "solver": {"name": f"palm_{args.solver}_mc", "d": args.d, "mu": args.mu,
                   "max_iters": args.max_iters, "rel_tol": args.rel_tol, "init": cfg.init},
    }
    start = time.perf_counter()
    try:
        res = _palm(args.solver)(inst.observations, cfg)
    except (solvers.NumericalFailure, core.DecompositionError) as exc:
        record.update(status="failed", error=str(exc), iterations=None, metrics={},
                      trace_path=None, wall_time=time.perf_counter() - start)
        _write_json(os.path.join(out_dir, stem + ".json"), record)
        return record

    report = metrics.EvalReport(rse=metrics.rse(res.matrix(), inst.X0))
    try:
        report.c3 = metrics.c3_constant(inst.observations.scatter(), inst.observations,
                                        res.factors)
        report.c3_lower_bound = metrics.c3_lower_bound(inst.observations.values, args.mu)
    except metrics.UndefinedConstant:
        pass
    if args.baseline:
        bmu = args.baseline_mu or default_baseline_mu(args.m, args.n, args.sr, args.nf)
        X = solvers.trace_baseline_mc(inst.observations, bmu, iters=args.baseline_iters)
        record["baseline"] = {"name": "trace_baseline_mc", "mu": bmu,
                              "iters": args.baseline_iters, "rse": metrics.rse(X, inst.X0)}
    trace_name = stem + "_trace.csv"
    _atomic_with(os.path.join(out_dir, trace_name), res.trace.write_csv)
    record.update(status=res.status.value, iterations=res.iterations, metrics=report.to_dict(),
                  kkt_residual=res.kkt_residual, trace_path=trace_name,
                  wall_time=time.perf_counter() - start)
    _write_json(os.path.join(out_dir, stem + ".json"), record)
    return record


def cmd_synth_mc(args):
    if args.d is None:
        args.d = max(1, int(math.floor(1.25 * args.rank)))
    if args.rank > min(args.m, args.n) or args.d > min(args.m, args.n):
        raise UsageError("--rank and --d must not exceed min(--m, --n)")
    os.makedirs(args.out, exist_ok=True)
    records = _run_trials(lambda k: _synth_trial(args, k, args.out), args.trials)
    ok = [r for r in records if r["status"] != "failed"]
    rse_mean, rse_std = _mean_std([r["metrics"]["rse"] for r in ok])
    base_mean, base_std = _mean_std([r["baseline"]["rse"] for r in ok if "baseline" in r])
    it_mean, _ = _mean_std([r["iterations"] for r in ok])
    wt_mean, _ = _mean_std([r["wall_time"] for r in records])
    _write_csv(os.path.join(args.out, "aggregate.csv"), AGGREGATE_COLUMNS,
               [[len(records), len(records) - len(ok), _fmt(rse_mean), _fmt(rse_std),
                 _fmt(base_mean), _fmt(base_std), _fmt(it_mean), _fmt(wt_mean)]])
    for r in records:
        line = f"trial seed={r['instance']['seed']} status={r['status']}"
        if r["status"] != "failed":
            line += f" iterations={r['iterations']} rse={r['metrics']['rse']:.4e}"
            if "baseline" in r:
                line += f" baseline_rse={r['baseline']['rse']:.4e}"
        print(line)
    if not ok:
        print("error: every trial failed", file=sys.stderr)
        return 1
    return 0


# -- rpca -------------------------------------------------------------------


def _ladm(solver):
    return solvers.ladm_tritr if solver == "tritr" else solvers.ladm_bitr


def _rpca_job(args):
    """Resolve the input into ``(observations, truth, labels, instance_info)`` per trial."""
    if args.input or args.observations:
        if args.input:
            D = core.read_matrix(args.input)
            obs = core.ObservationSet.full(D)
            info = {"kind": "matrix-file", "path": os.path.basename(args.input)}
        else:
            obs = core.read_observations(args.observations)
            info = {"kind": "observation-file", "path": os.path.basename(args.observations)}
        truth = core.read_matrix(args.truth) if args.truth else None
        labels = core.read_matrix(args.labels) != 0 if args.labels else None
        for name, M in (("--truth", truth), ("--labels", labels)):
            if M is not None and M.shape != obs.shape:
                raise ValueError(f"{name} shape {M.shape} differs from input shape {obs.shape}")
        info.update(m=obs.shape[0], n=obs.shape[1], observed=len(obs))
        return lambda k: (obs, truth, labels, dict(info, seed=args.seed))

    def make(k):
        seed = args.seed + k
        inst = data.synthetic_rpca(args.m, args.n, args.rank, args.spike_frac, args.spike_mag,
                                   args.missing, seed)
        info = {"kind": "synthetic-rpca", "m": args.m, "n": args.n, "rank": args.rank,
                "spike_frac": args.spike_frac, "spike_mag": args.spike_mag,
                "missing": args.missing, "seed": seed, "observed": len(inst.observations)}
        return inst.observations, inst.X0, inst.spikes != 0, info
    return make


def _rpca_trial(args, job, k):
    obs, truth, labels, info = job(k)
    stem = f"trial_{k:03d}"
    m, n = obs.shape
    d = args.d if args.d is not None else args.rank
    mu = args.mu if args.mu is not None else math.sqrt(max(m, n))
    record = {"instance": info,
              "solver": {"name": f"ladm_{args.solver}", "d": d, "mu": mu, "loss": args.loss,
                         "eps": args.eps, "max_iters": args.max_iters, "rho": args.rho}}
    if d > min(m, n):
        raise UsageError(f"--d {d} exceeds min host dimension {min(m, n)}")
    cfg = solvers.LadmConfig(d=d, mu=mu, loss=args.loss, eps=args.eps, max_iters=args.max_iters,
                             rho=args.rho, seed=info["seed"])
    start = time.perf_counter()
    try:
        res = _ladm(args.solver)(obs, cfg)
    except (solvers.NumericalFailure, core.DecompositionError) as exc:
        record.update(status="failed", error=str(exc), iterations=None, metrics={},
                      trace_path=None, wall_time=time.perf_counter() - start)
        _write_json(os.path.join(args.out, stem + ".json"), record)
        return record

    L = res.matrix()
    S = obs.scatter(-res.e)  # spikes on observed cells, zero elsewhere
    report = metrics.EvalReport()
    if truth is not None and np.linalg.norm(truth) > 0:
        report.rse = metrics.rse(L, truth)
    if labels is not None:
        lab = labels[obs.rows, obs.cols]
        if lab.any() and not lab.all():
            report.auc = metrics.auc(np.abs(res.e), lab)
    trace_name = stem + "_trace.csv"
    _atomic_with(os.path.join(args.out, trace_name), res.trace.write_csv)
    _atomic_with(os.path.join(args.out, stem + "_lowrank.txt"), lambda p: core.write_matrix(p, L))
    _atomic_with(os.path.join(args.out, stem + "_sparse.txt"), lambda p: core.write_matrix(p, S))
    record.update(status=res.status.value, iterations=res.iterations, metrics=report.to_dict(),
                  feasibility=res.trace.feasibility[-1], trace_path=trace_name,
                  lowrank_path=stem + "_lowrank.txt", sparse_path=stem + "_sparse.txt",
                  wall_time=time.perf_counter() - start)
    _write_json(os.path.join(args.out, stem + ".json"), record)
    return record


def cmd_rpca(args):
    from_file = bool(args.input or args.observations)
    if args.input and args.observations:
        raise UsageError("--input and --observations are mutually exclusive")
    if from_file and args.d is None:
        raise UsageError("--d is required with --input/--observations")
    if not from_file and args.rank > min(args.m, args.n):
        raise UsageError("--rank must not exceed min(--m, --n)")
    os.makedirs(args.out, exist_ok=True)
    job = _rpca_job(args)
    trials = 1 if from_file else args.trials
    records = _run_trials(lambda k: _rpca_trial(args, job, k), trials)
    ok = [r for r in records if r["status"] != "failed"]
    rse_mean, rse_std = _mean_std([r["metrics"]["rse"] for r in ok if "rse" in r["metrics"]])
    auc_mean, auc_std = _mean_std([r["metrics"]["auc"] for r in ok if "auc" in r["metrics"]])
    it_mean, _ = _mean_std([r["iterations"] for r in ok])
    wt_mean, _ = _mean_std([r["wall_time"] for r in records])
    _write_csv(os.path.join(args.out, "aggregate.csv"),
               ("trials", "failed", "rse_mean", "rse_std", "auc_mean", "auc_std",
                "iterations_mean", "wall_time_mean"),
               [[len(records), len(records) - len(ok), _fmt(rse_mean), _fmt(rse_std),
                 _fmt(auc_mean), _fmt(auc_std), _fmt(it_mean), _fmt(wt_mean)]])
    for r in records:
        line = f"trial seed={r['instance']['seed']} status={r['status']}"
        for key in ("rse", "auc"):
            if key in r.get("metrics", {}):
                line += f" {key}={r['metrics'][key]:.4e}"
        print(line)
    if not ok:
        print("error: every trial failed", file=sys.stderr)
        return 1
    return 0


# -- cf ---------------------------------------------------------------------


def cf_predict(dataset, factors_matrix, train_mean):
    """Test-set predictions; users or items without training ratings get the train mean."""
    test = dataset.test
    seen_users = np.zeros(dataset.num_users, dtype=bool)
    seen_items = np.zeros(dataset.num_items, dtype=bool)
    seen_users[dataset.train.rows] = True
    seen_items[dataset.train.cols] = True
    pred = train_mean + factors_matrix[test.rows, test.cols]
    cold = ~(seen_users[test.rows] & seen_items[test.cols])
    pred[cold] = train_mean
    return pred


def run_cf(dataset, d, mu, solver="bitr", max_iters=500, rel_tol=1e-4, seed=0):
    """Fit on the recentered training ratings and return ``(rmse, result)``."""
    train_mean = float(dataset.train.values.mean())
    centered = dataset.train.with_values(dataset.train.values - train_mean)
    cfg = solvers.PalmConfig(d=d, mu=mu, max_iters=max_iters, rel_tol=rel_tol, seed=seed)
    res = _palm(solver)(centered, cfg)
    pred = cf_predict(dataset, res.matrix(), train_mean)
    return metrics.rmse(pred, dataset.test.values), res


def cmd_cf(args):
    triples = data.load_ratings(args.ratings, args.format)
    ds = data.split_ratings(triples, args.train_fraction, args.seed)
    os.makedirs(args.out, exist_ok=True)
    train_mean = float(ds.train.values.mean())
    mean_rmse = metrics.rmse(np.full(len(ds.test), train_mean), ds.test.values)
    limit = min(ds.num_users, ds.num_items)

    def one(k):
        d = args.d_grid[k]
        entry = {"d": d}
        start = time.perf_counter()
        if d > limit:
            entry.update(status="failed", error=f"d={d} exceeds min(users, items)={limit}",
                         iterations=None, metrics={}, trace_path=None, wall_time=0.0)
            return entry
        try:
            err, res = run_cf(ds, d, args.mu, args.solver, args.max_iters, args.rel_tol, args.seed)
        except (solvers.NumericalFailure, core.DecompositionError) as exc:
            entry.update(status="failed", error=str(exc), iterations=None, metrics={},
                         trace_path=None, wall_time=time.perf_counter() - start)
            return entry
        trace_name = f"cf_d{d:03d}_trace.csv"
        _atomic_with(os.path.join(args.out, trace_name), res.trace.write_csv)
        entry.update(status=res.status.value, iterations=res.iterations,
                     metrics=metrics.EvalReport(rmse=err).to_dict(), trace_path=trace_name,
                     wall_time=time.perf_counter() - start)
        return entry

    runs = _run_trials(one, len(args.d_grid))
    payload = {
        "instance": {"kind": "ratings", "path": os.path.basename(args.ratings),
                     "format": args.format, "train_fraction": args.train_fraction,
                     "seed": args.seed, "num_users": ds.num_users, "num_items": ds.num_items,
                     "train": len(ds.train), "test": len(ds.test), "train_mean": train_mean},
        "solver": {"name": f"palm_{args.solver}_mc", "mu": args.mu, "max_iters": args.max_iters,
                   "rel_tol": args.rel_tol},
        "global_mean_rmse": mean_rmse,
        "runs": runs,
    }
    _write_json(os.path.join(args.out, "cf.json"), payload)
    _write_csv(os.path.join(args.out, "rmse_vs_d.csv"),
               ("d", "rmse", "global_mean_rmse", "status", "iterations"),
               [[r["d"], _fmt(r["metrics"].get("rmse")), _fmt(mean_rmse), r["status"],
                 "" if r["iterations"] is None else r["iterations"]] for r in runs])
    print(f"global-mean rmse={mean_rmse:.4f}")
    for r in runs:
        shown = f"{r['metrics']['rmse']:.4f}" if "rmse" in r["metrics"] else "-"
        print(f"d={r['d']} status={r['status']} rmse={shown}")
    if all(r["status"] == "failed" for r in runs):
        print("error: every rank in the grid failed", file=sys.stderr)
        return 1
    return 0


def cmd_gen_ratings(args):
    if args.count > args.users * args.items:
        raise UsageError("--count exceeds --users * --items")
    if args.rank > min(args.users, args.items):
        raise UsageError("--rank must not exceed min(--users, --items)")
    triples = data.synthetic_ratings(args.users, args.items, args.count, args.rank, args.noise,
                                     args.seed)
    folder = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(folder, exist_ok=True)
    _atomic_with(args.out, lambda p: data.write_ratings(p, triples, args.format))
    print(f"wrote {len(triples)} ratings to {args.out}")
    return 0


# -- verify -----------------------------------------------------------------

FAULT_SIZE = 1e-3


def cmd_verify(args):
    results = certify.run_battery(trials=args.trials, max_dim=args.max_dim, seed=args.seed,
                                  factorizations=args.factorizations,
                                  fault=FAULT_SIZE if args.inject_fault else 0.0)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# -- parser -----------------------------------------------------------------


class UsageError(Exception):
    """Invalid flag combination detected after parsing."""


def build_parser():
    p = argparse.ArgumentParser(prog="schatten-lr",
                                description="Bi-trace / tri-trace low-rank recovery experiments.")
    p.add_argument("--version", action="version", version=f"%(prog)s (kernels: {BACKEND})")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth-mc", help="synthetic matrix completion vs a trace-norm baseline")
    s.add_argument("--m", type=positive_int, default=100)
    s.add_argument("--n", type=positive_int, default=100)
    s.add_argument("--rank", type=positive_int, default=5)
    s.add_argument("--sr", type=ratio, default=0.3, help="sampling ratio in (0, 1]")
    s.add_argument("--nf", type=non_negative_float, default=0.0, help="noise factor")
    s.add_argument("--d", type=positive_int, default=None, help="inner rank (default floor(1.25 rank))")
    s.add_argument("--mu", type=positive_float, default=2.0)
    s.add_argument("--solver", choices=("bitr", "tritr"), default="bitr")
    s.add_argument("--max-iters", type=positive_int, default=500)
    s.add_argument("--rel-tol", type=positive_float, default=1e-4)
    s.add_argument("--baseline", action=argparse.BooleanOptionalAction, default=True,
                   help="also run the trace-norm baseline")
    s.add_argument("--baseline-mu", type=positive_float, default=None)
    s.add_argument("--baseline-iters", type=positive_int, default=500)
    s.add_argument("--trials", type=positive_int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="results/synth-mc")
    s.set_defaults(func=cmd_synth_mc)

    r = sub.add_parser("rpca", help="low-rank plus sparse separation with an l1 or l1/2 loss")
    r.add_argument("--input", help="dense matrix file (fully observed)")
    r.add_argument("--observations", help="observation-set file (partially observed)")
    r.add_argument("--truth", help="ground-truth low-rank matrix file, for RSE")
    r.add_argument("--labels", help="matrix file whose non-zero cells mark true spikes, for AUC")
    r.add_argument("--m", type=positive_int, default=256)
    r.add_argument("--n", type=positive_int, default=256)
    r.add_argument("--rank", type=positive_int, default=10)
    r.add_argument("--spike-frac", type=fraction, default=0.05)
    r.add_argument("--spike-mag", type=non_negative_float, default=5.0)
    r.add_argument("--missing", type=_number(float, 0.0, 1.0), default=0.1,
                   help="fraction of hidden cells in [0, 1)")
    r.add_argument("--d", type=positive_int, default=None, help="inner rank (default --rank)")
    r.add_argument("--mu", type=positive_float, default=None, help="default sqrt(max(m, n))")
    r.add_argument("--loss", choices=("l1", "lhalf"), default="l1")
    r.add_argument("--solver", choices=("bitr", "tritr"), default="bitr")
    r.add_argument("--eps", type=positive_float, default=1e-4)
    r.add_argument("--rho", type=_number(float, 1.0, lo_open=True), default=1.1)
    r.add_argument("--max-iters", type=positive_int, default=2000)
    r.add_argument("--trials", type=positive_int, default=10)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default="results/rpca")
    r.set_defaults(func=cmd_rpca)

    c = sub.add_parser("cf", help="collaborative filtering on a ratings file")
    c.add_argument("--ratings", required=True)
    c.add_argument("--format", choices=sorted(data.SEPARATORS), default="doublecolon")
    c.add_argument("--train-fraction", type=_number(float, 0.0, 1.0, lo_open=True), default=0.9)
    c.add_argument("--d-grid", type=int_list, default=[5, 10, 15, 20])
    c.add_argument("--mu", type=positive_float, default=100.0)
    c.add_argument("--solver", choices=("bitr", "tritr"), default="bitr")
    c.add_argument("--max-iters", type=positive_int, default=500)
    c.add_argument("--rel-tol", type=positive_float, default=1e-4)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default="results/cf")
    c.set_defaults(func=cmd_cf)

    g = sub.add_parser("gen-ratings", help="write a seeded synthetic ratings file")
    g.add_argument("--users", type=positive_int, default=300)
    g.add_argument("--items", type=positive_int, default=200)
    g.add_argument("--count", type=positive_int, default=5000)
    g.add_argument("--rank", type=positive_int, default=3)
    g.add_argument("--noise", type=non_negative_float, default=0.3)
    g.add_argument("--format", choices=sorted(data.SEPARATORS), default="doublecolon")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_ratings)

    v = sub.add_parser("verify", help="certify the quasi-norm identities on seeded matrices")
    v.add_argument("--trials", type=positive_int, default=200)
    v.add_argument("--max-dim", type=positive_int, default=20)
    v.add_argument("--factorizations", type=positive_int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true",
                   help=f"test hook: perturb bi-trace values by {FAULT_SIZE:g} (must fail)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, solvers.NumericalFailure, core.DecompositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
