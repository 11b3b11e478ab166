"""Compare the Cython kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--quick] [--length N] [--ov N M DIM]

Prints one line per measurement.  Results are informational only.
"""

import argparse

from homre import bench, kernels


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small sizes, one repetition")
    ap.add_argument("--length", type=int, default=100_000, help="text length for the NFA runs")
    ap.add_argument("--ov", type=int, nargs=3, metavar=("N", "M", "DIM"), default=(4096, 4096, 512))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if args.quick:
        for line in bench.run(quick=True):
            print(line)
        return
    print(f"backend={kernels.BACKEND} extension={kernels.have_extension()}")
    for line in bench.format_rows(bench.bench_nfa(args.length, seed=args.seed)):
        print(line)
    n, m, dim = args.ov
    for line in bench.format_rows([bench.bench_batch_ov(n, m, dim, seed=args.seed)]):
        print(line)


if __name__ == "__main__":
    main()
