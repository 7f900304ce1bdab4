"""Compare the compiled and pure-Python special-function backends.

Times each kernel on the same random arrays under every available
backend, then two end-to-end fits that lean on the kernels.

    python3 benchmarks/bench_kernels.py -n 100000 --repeat 3
"""
import argparse
import timeit

import numpy as np

from repodist import _backend, specfun
from repodist.dist import Distribution, Family
from repodist.fit import fit_family


def cases(n, seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-6, 6, n)
    q = rng.uniform(-0.9999, 0.9999, n)
    x = rng.uniform(0.01, 200, n)
    a = rng.uniform(0.1, 100, n)
    b = rng.uniform(0.1, 100, n)
    u = rng.uniform(0, 1, n)
    counts = Distribution(Family.NEG_BINOMIAL, (1.59, 8.33)).sample(rng, 20_000)
    gam = Distribution(Family.GAMMA, (1.17, -1.26, 1.07)).sample(rng, 5_000)
    return {
        "erf": lambda: specfun.erf(z),
        "erfc": lambda: specfun.erfc(z),
        "erf_inv": lambda: specfun.erf_inv(q),
        "log_gamma": lambda: specfun.log_gamma(x),
        "reg_gamma_p": lambda: specfun.reg_gamma_p(a, x),
        "reg_beta_i": lambda: specfun.reg_beta_i(u, a, b),
        "fit NegBinomial n=2e4": lambda: fit_family(Family.NEG_BINOMIAL, counts),
        "fit Gamma n=5e3": lambda: fit_family(Family.GAMMA, gam),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-n", type=int, default=100_000, help="array length per kernel call")
    parser.add_argument("--repeat", type=int, default=3, help="best-of repeats")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = _backend.available()
    work = cases(args.n, args.seed)
    timings = {}
    for name in backends:
        with _backend.using(name):
            for label, fn in work.items():
                fn()  # warm up
                timings[name, label] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    width = max(len(k) for k in work)
    header = f"{'case':<{width}}" + "".join(f"{b:>12}" for b in backends)
    if "cython" in backends:
        header += f"{'speedup':>10}"
    print(f"n = {args.n}, best of {args.repeat}, seconds")
    print(header)
    for label in work:
        row = f"{label:<{width}}" + "".join(f"{timings[b, label]:>12.4f}" for b in backends)
        if "cython" in backends:
            row += f"{timings['python', label] / timings['cython', label]:>9.1f}x"
        print(row)
    if "cython" not in backends:
        print("compiled kernels not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
