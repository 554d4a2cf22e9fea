"""Time the numba and numpy kernel backends side by side.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeat 20]

Part one times each kernel on a fixed energy grid in-process (both
implementations are importable at once). Part two runs a 41-point preset
sweep in a subprocess per backend, since the backend is fixed at import.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from hypercurrent import kernels
from hypercurrent._backend import ENV_VAR, HAVE_NUMBA

SWEEP = ("import time; from hypercurrent.config import preset; "
         "from hypercurrent.sweep import run_sweep; cfg = preset('{name}'); "
         "run_sweep(preset('{name}', 2)); t = time.perf_counter(); run_sweep(cfg); "
         "print(time.perf_counter() - t)")


def kernel_cases(n):
    rng = np.random.default_rng(0)
    eps = np.sort(rng.uniform(-40, 40, n))
    t = kernels.numpy_impl.double_dot(eps, 0.1, 0.1, 0.0)
    x = rng.uniform(-3, 3, n)
    tf, fl, fr = rng.uniform(0, 1, (3, n))
    leads = (1.25, -0.5, 1.0, 0.5)
    return {
        "fermi": lambda impl: impl.fermi(eps),
        "lead_terms": lambda impl: impl.lead_terms(eps, *leads),
        "double_dot": lambda impl: impl.double_dot(eps, 0.1, 0.1, 0.0),
        "moment_integrands": lambda impl: impl.moment_integrands(eps, t, *leads),
        "cgf_density": lambda impl: impl.cgf_density(x, tf, fl, fr),
    }


def best_of(func, repeat):
    return min(timeit.repeat(func, number=1, repeat=repeat))


def sweep_time(backend, name):
    env = dict(os.environ, **{ENV_VAR: backend})
    out = subprocess.run([sys.executable, "-c", SWEEP.format(name=name)],
                         env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    backends = [("numpy", kernels.numpy_impl)]
    if HAVE_NUMBA:
        backends.insert(0, ("numba", kernels.numba_impl))
    else:
        print("numba not installed: numpy timings only")

    print(f"kernels on {args.n} points, best of {args.repeat} (ms)")
    print(f"{'kernel':<20}" + "".join(f"{name:>10}" for name, _ in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for label, case in kernel_cases(args.n).items():
        times = []
        for _, impl in backends:
            case(impl)  # compile / warm up
            times.append(best_of(lambda: case(impl), args.repeat) * 1e3)
        line = f"{label:<20}" + "".join(f"{t:>10.3f}" for t in times)
        if len(times) == 2:
            line += f"{times[1] / times[0]:>9.1f}x"
        print(line)

    print("\n41-point preset sweeps (s, after warm-up)")
    for name in ("fig2a", "fig2b"):
        cells = [f"{b}={sweep_time(b, name):.3f}" for b, _ in backends]
        print(f"{name:<8}" + "  ".join(cells))


if __name__ == "__main__":
    main()
