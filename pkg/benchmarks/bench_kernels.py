"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from modrec import _core
from modrec.svm import rbf_gram


def cases(rng):
    phase = np.angle(np.exp(1j * np.cumsum(rng.normal(0.9, 0.4, 200_000))))
    Xs = rng.normal(size=(600, 22))
    ys = rng.integers(0, 6, 600)
    Xk = rng.normal(size=(200, 22))
    yk = np.where(Xk[:, 0] + 0.3 * rng.normal(size=200) > 0, 1.0, -1.0)
    K = rbf_gram(Xk / 4, Xk / 4, 0.5)
    return {
        "phase_correction (200k samples)": lambda k: k.phase_correction(phase),
        "best_split (600 x 22, 6 classes)": lambda k: k.best_split(Xs, ys, 6, 5),
        "smo_solve (200 points)": lambda k: k.smo_solve(K, yk, 0.5, 5e-4, 200, 1),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _core.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only timing the Python kernels")
    rng = np.random.default_rng(0)
    print(f"{'kernel':36s}" + "".join(f"{b:>12s}" for b in backends) + ("    speed-up" if len(backends) > 1 else ""))
    for name, fn in cases(rng).items():
        times = []
        for b in backends:
            k = _core.get_backend(b)
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        line = f"{name:36s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            line += f"  {times[backends.index('python')] / times[backends.index('cython')]:9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
