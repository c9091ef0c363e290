"""Compare the compiled and pure-Python search kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

from hexweave import kernels
from hexweave.lattice import disk
from hexweave.solver import enumerate_solutions, grow_defect, refute_torus, region_problem


def workloads():
    return {
        "refute-torus index<=16": lambda be: sum(r.nodes for r in refute_torus(16, backend=be)),
        "enumerate disk(2) x5000": lambda be: enumerate_solutions(
            region_problem(disk(2)), limit=5000, backend=be).nodes,
        "grow-defect radius 10": lambda be: grow_defect(10, inner=2, backend=be).nodes,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels.compiled_kernels is not None else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'workload':28s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup   nodes")
    for name, fn in workloads().items():
        best, nodes = {}, {}
        for be in backends:
            ts = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                nodes[be] = fn(be)
                ts.append(time.perf_counter() - t0)
            best[be] = min(ts)
        assert len(set(nodes.values())) == 1, f"backends disagree on {name}: {nodes}"
        sp = f"{best['python'] / best['cython']:8.1f}x" if "cython" in best else "       -"
        print(f"{name:28s} " + " ".join(f"{best[b] * 1000:10.1f}ms" for b in backends) + f"  {sp}  {nodes['python']}")


if __name__ == "__main__":
    main()
