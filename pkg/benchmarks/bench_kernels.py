"""Time the lattice scan on both backends for the largest first-wall cells.

    python benchmarks/bench_kernels.py [--repeat 3]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time
from fractions import Fraction

from tiltwalls import _kernels
from tiltwalls.lattice import INTEGRAL_CH2_LATTICE
from tiltwalls.nl import NlInput, pushforward_class
from tiltwalls.bg import bg_floor
from tiltwalls.walls import default_box

CELLS = [(4, 1, -2), (10, 1, -15), (14, 1, -23), (14, 5, -23)]


def problem_for(n, h3, l2):
    v = pushforward_class(NlInput(n, h3, l2, "ii" if n >= 10 else "i"))
    box = default_box(v, h3)
    d = INTEGRAL_CH2_LATTICE
    return _kernels.ScanProblem.build(
        v.truncation, h3, Fraction(-n, 2), bg_floor(n, h3, l2), Fraction(n * n, 4),
        box.r_max, box.c1_span, box.c2_span, (d.d0, d.d1, d.d2),
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])
    if _kernels.HAS_NUMBA:
        _kernels.scan(problem_for(*CELLS[0]), "numba")  # compile

    print(f"{'cell':>14} {'triples':>11}" + "".join(f" {b + ' s':>10}" for b in backends) + "  speedup")
    for cell in CELLS:
        prob = problem_for(*cell)
        row, results = [], []
        for name in backends:
            t, res = best_of(lambda: _kernels.scan(prob, name), args.repeat)
            row.append(t)
            results.append(res)
        assert all(r == results[0] for r in results), f"backends disagree on {cell}"
        speed = f"{row[0] / row[-1]:8.1f}x" if len(row) > 1 else ""
        label = "n={} H3={} L2={}".format(*cell)
        print(f"{label:>14} {prob.size:>11,}" + "".join(f" {t:10.4f}" for t in row) + "  " + speed)


if __name__ == "__main__":
    main()
