"""Time the numba kernels against the numpy fallback.

Both backends are imported side by side, so the env flag is not needed
here.  The first numba call is timed separately since it includes JIT
compilation (or loading from the on-disk cache).

    python3 benchmarks/bench_kernels.py --modes 4 --cutoff 4 --repeat 20
"""

import argparse
import time

import numpy as np

from kreinfock.fock import _permutations, enumerate_basis
from kreinfock.kernels import numba_impl, numpy_impl


def cases(d, N, rng):
    f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    U = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))[0]
    perms, signs = _permutations(N)
    bose = enumerate_basis("bose", d, N)
    fermi = enumerate_basis("fermi", d, min(N, d))
    return {
        "full_annihilator": lambda impl: impl.full_annihilator(f.conj(), d, N),
        "permutation_projector": lambda impl: impl.permutation_projector(d, N, perms, signs),
        "tensor_power": lambda impl: impl.tensor_power(U, N),
        "direct_bose": lambda impl: impl.direct_bose(f.conj(), bose.occupations, N + 1),
        "direct_fermi": lambda impl: impl.direct_fermi(f.conj(), fermi.masks, d),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--modes", type=int, default=4)
    parser.add_argument("--cutoff", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args(argv)
    if numba_impl is None:
        parser.error("numba backend is disabled (unset KREINFOCK_DISABLE_NUMBA)")

    rng = np.random.default_rng(0)
    print(f"d={args.modes} N={args.cutoff}, best of {args.repeat}")
    print(f"{'kernel':<24}{'first numba':>14}{'numba':>12}{'numpy':>12}{'speedup':>10}{'max diff':>11}")
    for name, run in cases(args.modes, args.cutoff, rng).items():
        start = time.perf_counter()
        fast = run(numba_impl)
        first = time.perf_counter() - start
        diff = np.abs(fast - run(numpy_impl)).max()
        t_numba = best_of(lambda: run(numba_impl), args.repeat)
        t_numpy = best_of(lambda: run(numpy_impl), args.repeat)
        print(
            f"{name:<24}{first * 1e3:>12.2f}ms{t_numba * 1e3:>10.3f}ms{t_numpy * 1e3:>10.3f}ms"
            f"{t_numpy / t_numba:>9.1f}x{diff:>11.1e}"
        )


if __name__ == "__main__":
    main()
