"""Time the compiled kernels against the same source run interpreted.

    python benchmarks/bench_kernels.py [--samples 2000] [--vertices 40] [--repeat 3]

Also times a full ``phi_mixed`` call under each mode by re-running itself in a
subprocess with ``MIXEDQUERM_DISABLE_NUMBA=1``.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from mixedquerm import SampleStream, haar_bases, phi_mixed, random_polytope
from mixedquerm._accel import USE_NUMBA, python_impl
from mixedquerm.kernels import projected_areas, projected_widths


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def kernel_rows(samples, vertices, repeat):
    body = random_polytope(SampleStream(1), 3, vertices)
    verts = np.ascontiguousarray(body.vertices)
    rows = []
    for name, kernel, j in (("projected_areas", projected_areas, 2), ("projected_widths", projected_widths, 1)):
        bases = haar_bases(0, 3, j, samples)
        kernel(verts, bases)  # compile / warm cache
        fast, a = best_of(lambda: kernel(verts, bases), repeat)
        slow, b = best_of(lambda: python_impl(kernel)(verts, bases), repeat)
        assert np.array_equal(a, b), f"{name}: compiled and interpreted results differ"
        rows.append((name, fast, slow))
    return rows


def end_to_end(samples, vertices):
    bodies = [random_polytope(SampleStream(2, t), 3, vertices) for t in (1, 2)]
    phi_mixed(bodies, 50, 0)
    t0 = time.perf_counter()
    value = phi_mixed(bodies, samples, 0).value
    return time.perf_counter() - t0, value


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--vertices", type=int, default=40)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--end-to-end-only", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.end_to_end_only:
        seconds, value = end_to_end(args.samples, args.vertices)
        print(f"{seconds!r} {value!r}")
        return

    if not USE_NUMBA:
        sys.exit("numba is disabled; unset MIXEDQUERM_DISABLE_NUMBA to compare both paths")

    print(f"samples={args.samples} vertices={args.vertices} best of {args.repeat}")
    print(f"{'kernel':<20}{'numba [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for name, fast, slow in kernel_rows(args.samples, args.vertices, args.repeat):
        print(f"{name:<20}{fast:>12.4f}{slow:>12.4f}{slow / fast:>10.1f}")

    results = {}
    for label, flag in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, MIXEDQUERM_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, __file__, "--end-to-end-only", "--samples", str(args.samples),
                              "--vertices", str(args.vertices)], env=env, capture_output=True, text=True, check=True)
        seconds, value = out.stdout.split()
        results[label] = (float(seconds), value)
    fast, slow = results["numba"][0], results["python"][0]
    print(f"{'phi_mixed (j=2)':<20}{fast:>12.4f}{slow:>12.4f}{slow / fast:>10.1f}")
    same = results["numba"][1] == results["python"][1]
    print(f"phi_mixed value identical across modes: {same}")


if __name__ == "__main__":
    main()
