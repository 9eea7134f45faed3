"""Compare the compiled kernels against the pure-Python fallback.

Run as: python benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

from cohabitat.kernels import backends


def bench(fn, args_list, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    grid_t = [15.0 + i for i in range(16)]
    grid_rh = [30.0 + 5 * j for j in range(9)]
    cases = {
        "newton_step": [(t, sp, 0.8) for t in grid_t for sp in grid_t],
        "rh_from_temp": [(t, 4.0) for t in grid_t for _ in range(16)],
        "pmv": [(t, t, 0.0, rh, met, 0.5)
                for t in grid_t for rh in grid_rh
                for met in (1.0, 1.3, 1.8)],
    }
    impls = backends()
    if "compiled" not in impls:
        print("compiled backend unavailable; nothing to compare")
        return
    print(f"{'kernel':<14} {'calls':>6} {'pure (ms)':>10} "
          f"{'compiled (ms)':>14} {'speedup':>8}")
    for name, args_list in cases.items():
        times = {}
        for backend, mod in impls.items():
            times[backend] = bench(getattr(mod, name), args_list, repeats)
        pure_ms = times["pure-python"] * 1000
        comp_ms = times["compiled"] * 1000
        print(f"{name:<14} {len(args_list):>6} {pure_ms:>10.3f} "
              f"{comp_ms:>14.3f} {pure_ms / comp_ms:>7.1f}x")


if __name__ == "__main__":
    main()
