"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]

Each row times one kernel on the same inputs with both backends and checks
that the outputs agree.
"""

import argparse
import random
import sys
import timeit

from cubefold import _kernels_py, kernels
from cubefold.corpus import cycle_pocset, fan_pocset, random_pocset, transverse_pocset
from cubefold.dual import dual_complex, force_tables


def workloads(seed):
    rng = random.Random(seed)
    yield "cube(14)", transverse_pocset(14)
    yield "cycle(16)", cycle_pocset(16)
    yield "fan", fan_pocset()
    for n in (16, 20):
        yield f"random({n})", random_pocset(rng, n, density=0.15)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)
    compiled = kernels._compiled
    if compiled is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(args.seed)
    header = f"{'workload':<12} {'kernel':<13} {'vertices':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, p in workloads(args.seed):
        n = p.n_hyperplanes
        masks, values = force_tables(p)
        cap = 1 << 22
        X = dual_complex(p, cap)
        verts = X.vertices
        m = len(verts)
        triples = [tuple(rng.randrange(m) for _ in range(3)) for _ in range(20000)]
        image = [verts[(i * 7) % m] for i in range(min(m, 1500))]
        source = verts[: len(image)]
        cases = [
            ("enumerate", lambda k: k.enumerate_ultrafilters(n, masks, values, cap), sorted),
            ("edges", lambda k: k.build_edges(verts, n), lambda r: (sorted(map(tuple, r[0])), list(r[1]))),
            ("medians", lambda k: k.median_failures(verts, triples), list),
            ("distances", lambda k: k.distance_changes(source, image), tuple),
        ]
        for name, call, norm in cases:
            if norm(call(_kernels_py)) != norm(call(compiled)):
                print(f"{label}: {name} outputs differ", file=sys.stderr)
                return 2
            t_py = best(lambda: call(_kernels_py), args.repeat)
            t_cy = best(lambda: call(compiled), args.repeat)
            print(f"{label:<12} {name:<13} {m:>8} {t_py:>10.4f} {t_cy:>10.4f} {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
