"""Compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both backends are imported
directly, so the environment variable selecting the default is irrelevant.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from povmforge import _kernels_py as pure
from povmforge.finite_field import make_field

try:
    from povmforge import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_hermitian(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = [("python", pure)] + ([("compiled", compiled)] if compiled else [])
    if compiled is None:
        print("compiled extension not available; timing the fallback only")

    print(f"{'kernel':<28}{'backend':<10}{'seconds':>12}")
    results = {}
    for p, k in [(3, 6), (2, 9), (3, 9)]:
        spec = make_field(p, k)
        g, n = spec.generator, spec.q - 1
        for name, mod in backends:
            t = best_of(lambda: mod.gf_power_table(g, n, p, k, spec.modulus), args.repeat)
            results[(f"power_table GF({p}^{k})", name)] = t
            print(f"{f'power_table GF({p}^{k})':<28}{name:<10}{t:>12.5f}")
    for d in (9, 16, 27):
        a = random_hermitian(d, d)
        for name, mod in backends:
            t = best_of(lambda: mod.jacobi_eigh(a, 1e-15, 60), args.repeat)
            results[(f"jacobi d={d}", name)] = t
            print(f"{f'jacobi d={d}':<28}{name:<10}{t:>12.5f}")
    if compiled is not None:
        print()
        for key in sorted({k for k, _ in results}):
            print(f"{key:<28}speedup x{results[(key, 'python')] / results[(key, 'compiled')]:.1f}")


if __name__ == "__main__":
    main()
