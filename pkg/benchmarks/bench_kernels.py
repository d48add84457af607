"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--grid 512] [--zeros 30]
"""
import argparse
import time

import numpy as np

from blab import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(args):
    rng = np.random.default_rng(0)
    zeros = 1.0 - 2.0 ** -np.arange(1, args.zeros + 1)
    c = -1.0 + (np.arange(args.grid) + 0.5) * (2.0 / args.grid)
    pts = (c[None, :] + 1j * c[:, None]).ravel()
    pts = pts[np.abs(pts) < 0.98]
    thetas = np.linspace(0, 2 * np.pi, 16384, endpoint=False)
    cloud = 0.95 * np.sqrt(rng.uniform(size=args.pairs)) * np.exp(2j * np.pi * rng.uniform(size=args.pairs))
    wa = (1 + zeros) / (1 - zeros)
    wb = np.roll(wa, -1)
    ys = np.linspace(-1e6, 1e6, 4001)
    mask = rng.uniform(size=(args.grid, args.grid)) < 0.55
    return {
        "blaschke_eval (disk grid)": lambda m: m.blaschke_eval(zeros, pts, 0),
        "blaschke_eval_circle": lambda m: m.blaschke_eval_circle(zeros, thetas, 0),
        "rho_matrix": lambda m: m.rho_matrix(cloud, 0),
        "arg_sums (y scan)": lambda m: m.arg_sums(wa, wb, ys, 0),
        "label_components4": lambda m: m.label_components4(mask),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--zeros", type=int, default=30)
    p.add_argument("--pairs", type=int, default=600)
    args = p.parse_args(argv)
    backends = kernels.available_backends()
    names = list(backends)
    print(f"{'kernel':28s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(args).items():
        row = {n: best_of(lambda m=backends[n]: fn(m), args.repeat) for n in names}
        line = f"{label:28s}" + "".join(f"{row[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in row:
            line += f"{row['python'] / row['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
