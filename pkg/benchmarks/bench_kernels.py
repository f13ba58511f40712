"""Compare the compiled and pure-Python special-function kernels.

    python benchmarks/bench_kernels.py [--n 100000] [--repeat 5]

Reports the best wall time per call for each kernel and backend, plus the
largest relative disagreement between the two.
"""

import argparse
import time

import numpy as np

from locscale_w1.specfun import _pykernels as pure

try:
    from locscale_w1.specfun import _kernels as compiled
except ImportError:
    compiled = None


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, np.asarray(out, dtype=np.float64)


def cases(n):
    rng = np.random.Generator(np.random.Philox(key=2024))
    q = rng.uniform(1e-12, 1.0 - 1e-12, n)
    small = q[: max(1, n // 20)]
    return [
        ("ndtri_vec", lambda k: k.ndtri_vec(q), n),
        ("gamma_ppf_vec a=2", lambda k: k.gamma_ppf_vec(2.0, q, False), n),
        ("gamma_ppf_vec a=0.3 upper", lambda k: k.gamma_ppf_vec(0.3, q, True), n),
        ("t_ppf_vec nu=3", lambda k: k.t_ppf_vec(3.0, q), n),
        ("betainc_inv a=0.5 b=4 (scalar loop)",
         lambda k: [k.betainc_inv(0.5, 4.0, float(p)) for p in small], small.size),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernels not built; timing the pure-Python backend only")
    print(f"{'kernel':38s} {'calls':>8s} {'cython':>11s} {'python':>11s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn, calls in cases(args.n):
        tp, vp = best_time(lambda: fn(pure), args.repeat)
        if compiled is None:
            print(f"{name:38s} {calls:8d} {'-':>11s} {tp:10.4f}s")
            continue
        tc, vc = best_time(lambda: fn(compiled), args.repeat)
        finite = np.isfinite(vp) & np.isfinite(vc)
        diff = np.max(np.abs(vc[finite] - vp[finite]) / np.maximum(np.abs(vp[finite]), 1e-300))
        print(f"{name:38s} {calls:8d} {tc:10.4f}s {tp:10.4f}s {tp / tc:7.1f}x {diff:13.2e}")


if __name__ == "__main__":
    main()
