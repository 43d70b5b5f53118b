"""Compare the compiled and numpy kernel backends on Edge-Laplacian workloads.

Usage: python3 benchmarks/bench_kernels.py [--edges 10000] [--repeat 5]
"""
import argparse
import time

import numpy as np
import scipy.sparse as sp

from edgeflow import _kernels
from edgeflow.graph import build_graph, edge_laplacian


def random_graph(num_edges: int, seed: int):
    rng = np.random.default_rng(seed)
    n = max(4, num_edges * 3 // 10)
    pairs = set()
    while len(pairs) < num_edges:
        i, j = (int(x) for x in rng.integers(n, size=2))
        if i != j:
            pairs.add((min(i, j), max(i, j)))
    return build_graph(sorted(pairs), n)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--edges", type=int, default=10_000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    g = random_graph(args.edges, args.seed)
    l1 = edge_laplacian(g).astype(np.float64)
    shifted = sp.csr_matrix(sp.identity(g.num_edges) + l1)
    rng = np.random.default_rng(args.seed)
    f = rng.standard_normal(g.num_edges)
    mu = 0.9 / (2 * l1.diagonal().max())

    def ops(mod):
        a = (l1.indptr, l1.indices, l1.data)
        # PCG runs on the denoiser system I + L1
        s = (shifted.indptr, shifted.indices, shifted.data)
        return {
            "matvec x100": lambda: [mod.csr_matvec(*a, f) for _ in range(100)],
            "smooth k=50": lambda: mod.smooth(*a, f, mu, 50),
            "pcg rtol=1e-8": lambda: mod.pcg(*s, f, 1e-8, 10_000),
            "power_iteration": lambda: mod.power_iteration(*a, np.ones(g.num_edges), 1e-6, 100_000),
        }

    backends = {"python": _kernels.python}
    if _kernels.compiled is not None:
        backends["cython"] = _kernels.compiled
    results = {}
    for name, mod in backends.items():
        for op, fn in ops(mod).items():
            results[(op, name)] = best_of(fn, args.repeat)

    print(f"graph: N={g.num_nodes} E={g.num_edges} nnz(L1)={l1.nnz}  best of {args.repeat}")
    print(f"{'kernel':<18}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for op in ops(_kernels.python):
        py = results[(op, "python")]
        cy = results.get((op, "cython"))
        cy_s = f"{cy * 1e3:12.2f}" if cy is not None else f"{'n/a':>12}"
        sp_s = f"{py / cy:9.2f}x" if cy else f"{'':>10}"
        print(f"{op:<18}{py * 1e3:12.2f}{cy_s}{sp_s}")


if __name__ == "__main__":
    main()
