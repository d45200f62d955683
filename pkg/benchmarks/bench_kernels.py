"""Compare the numba and numpy kernel backends.

Kernel timings run in-process on threshold graphs cut from a synthetic
correlation matrix. The end-to-end sweep runs once per backend in a
subprocess so that THRESHNET_BACKEND takes effect at import.

    python3 benchmarks/bench_kernels.py [--n 100 200 400] [--repeat 5] [--no-sweep]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from threshnet import kernels
from threshnet.netgraph import threshold_graph
from threshnet.rolling import CorrMatrix
from threshnet.synth import SynthConfig, generate_returns

SWEEP_SNIPPET = """
import json, time
from threshnet import kernels
from threshnet.estimate import SweepConfig, sweep
from threshnet.ingest import log_returns
from threshnet.rolling import WindowSpec
from threshnet.synth import SynthConfig, generate_market
r = log_returns(generate_market(SynthConfig(n={n}, T={T}, seed=1)))
cfg = SweepConfig(window=WindowSpec(120, 5), theta_min=-0.45, theta_max=1.0)
sweep(r, SweepConfig(window=WindowSpec(120, 5), theta_min=0.2, theta_max=0.3))  # warm-up / JIT
t0 = time.perf_counter()
res = sweep(r, cfg)
print(json.dumps(dict(backend=kernels.BACKEND, seconds=time.perf_counter() - t0, theta_hat=res.theta_hat)))
"""


def corr_matrix(n: int, seed: int = 3) -> CorrMatrix:
    r = generate_returns(SynthConfig(n=n, T=400, regimes=((0, 0.5),), seed=seed))
    return CorrMatrix(np.clip(np.corrcoef(r), -1, 1))


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(sizes, repeat):
    backends = [b for b in kernels.BACKENDS if b != "numba" or kernels.HAS_NUMBA]
    print(f"{'n':>5} {'theta':>6} {'kernel':>16} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in sizes:
        W = corr_matrix(n)
        for theta in (0.2, 0.3, 0.4):
            g = threshold_graph(W, theta)
            for name in ("bfs_distance_counts", "triangle_counts", "row_popcounts"):
                t = {b: best_of(lambda: getattr(kernels.get_backend(b), name)(g.bits, g.n), repeat) for b in backends}
                ratio = t["numpy"] / t["numba"] if "numba" in t else float("nan")
                print(f"{n:>5} {theta:>6.2f} {name:>16} " + " ".join(f"{t[b] * 1e3:>8.2f}ms" for b in backends)
                      + f"   {ratio:6.1f}x")


def bench_sweep(n, T):
    print(f"\nfull sweep: n={n}, T={T}, width 120, step 5, grid -0.45:0.01:1.0")
    for backend in kernels.BACKENDS:
        env = dict(os.environ, THRESHNET_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET.format(n=n, T=T)],
                             env=env, capture_output=True, text=True, check=True)
        res = json.loads(out.stdout.strip().splitlines()[-1])
        print(f"  {res['backend']:>6}: {res['seconds']:.2f}s  theta_hat={res['theta_hat']}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sweep-n", type=int, default=100)
    ap.add_argument("--sweep-days", type=int, default=616)
    ap.add_argument("--no-sweep", action="store_true")
    args = ap.parse_args()
    bench_kernels(args.n, args.repeat)
    if not args.no_sweep:
        bench_sweep(args.sweep_n, args.sweep_days)


if __name__ == "__main__":
    main()
