"""Compare the compiled and pure-Python kernels on identical inputs.

Usage::

    python benchmarks/bench_kernels.py [--n 100] [--iterations 2000] [--repeat 3]

Both backends must return bit-identical results; timings are best of
``--repeat`` runs.
"""

import argparse
import time

import numpy as np

from qubodisc import _backend
from qubodisc.annealer import AnnealSchedule, anneal
from qubodisc.gibbs_sampler import SamplerConfig, sample_chain
from qubodisc.qubo_core import QuboProblem
from qubodisc.regression import RegressionDataset


def best_of(repeat, fn):
    times, out = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def bench_anneal(name, q, sched, repeat):
    return best_of(repeat, lambda: anneal(q, sched, backend=name))


def bench_sampler(name, ds, cfg, repeat):
    return best_of(repeat, lambda: sample_chain(ds, cfg, backend=name))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100, help="QUBO size")
    parser.add_argument("--iterations", type=int, default=2_000)
    parser.add_argument("--samples", type=int, default=2_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    names = sorted(_backend.BACKENDS)
    if "compiled" not in names:
        print("compiled extension not built; only the Python backend is available")

    rng = np.random.default_rng(0)
    m = rng.normal(size=(args.n, args.n))
    q = QuboProblem.from_matrix(m)
    sched = AnnealSchedule(args.iterations, 50.0, 0.999, seed=1)

    x = rng.uniform(-1, 1, (100, 9))
    ds = RegressionDataset.from_features(x, x @ rng.normal(size=9) + rng.normal(size=100))
    cfg = SamplerConfig(temperature=0.1, chain_length=args.samples, seed=2)

    updates = args.iterations * 2 * args.n
    steps = args.samples * cfg.interval
    print(f"{'kernel':<12} {'backend':<9} {'seconds':>9} {'ns/update':>10}")
    results = {}
    for name in names:
        t_a, res = bench_anneal(name, q, sched, args.repeat)
        t_s, chain = bench_sampler(name, ds, cfg, args.repeat)
        results[name] = (t_a, t_s, res, chain)
        print(f"{'anneal':<12} {name:<9} {t_a:9.4f} {t_a / updates * 1e9:10.1f}")
        print(f"{'metropolis':<12} {name:<9} {t_s:9.4f} {t_s / steps * 1e9:10.1f}")

    if len(names) == 2:
        (ta_c, ts_c, res_c, chain_c), (ta_p, ts_p, res_p, chain_p) = results["compiled"], results["python"]
        same = (np.array_equal(res_c.best_z, res_p.best_z) and res_c.best_energy == res_p.best_energy
                and res_c.flips_accepted == res_p.flips_accepted and np.array_equal(chain_c, chain_p))
        print(f"identical outputs: {same}")
        print(f"speedup: anneal {ta_p / ta_c:.0f}x, metropolis {ts_p / ts_c:.0f}x")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
