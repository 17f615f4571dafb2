"""Compare the compiled and numpy elimination kernels.

Times ``rref`` and ``rank`` on random square and rectangular matrices over
F_101, checks that both kernels return identical results, and times one
end-to-end workload (a cogen sweep over ``a_n:3``) under each kernel.

    python3 benchmarks/bench_rref.py [--sizes 8 32 64 128] [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from fbcat import exactla as la


def _matrix(rows: int, cols: int, seed: int, rank_deficit: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = rng.integers(0, la.get_prime(), (rows, cols), dtype=np.int64)
    if rank_deficit:
        # repeat rows so the kernel has real elimination work on dependent rows
        A[-rank_deficit:] = (A[:rank_deficit] * 3) % la.get_prime()
    return A


def _time(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(sizes, repeat):
    out = []
    for n in sizes:
        for shape in ((n, n), (n, 2 * n), (2 * n, n)):
            A = _matrix(*shape, seed=n, rank_deficit=shape[0] // 4)
            row = {"shape": list(shape)}
            results = {}
            for backend in la.available_backends():
                la.use_backend(backend)
                row[f"rref_{backend}_ms"] = 1e3 * _time(lambda: la.rref(A), repeat)
                row[f"rank_{backend}_ms"] = 1e3 * _time(lambda: la.rank(A), repeat)
                results[backend] = la.rref(A)
            first = next(iter(results.values()))
            row["identical"] = all(np.array_equal(r[0], first[0]) and r[2] == first[2] for r in results.values())
            if "cython" in results:
                row["rref_speedup"] = row["rref_python_ms"] / max(row["rref_cython_ms"], 1e-9)
            out.append(row)
    return out


def workload_rows(repeat):
    from fbcat.corpus import get_instance
    from fbcat.theorems import sweep_subcategories

    out = {}
    for backend in la.available_backends():
        la.use_backend(backend)
        # fresh instance objects each time so memoised results are not reused
        def run():
            from fbcat import corpus

            corpus._INSTANCES.clear()
            return sweep_subcategories(get_instance("a_n:3"), 2)

        out[f"{backend}_s"] = _time(run, max(1, repeat // 2))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-workload", action="store_true")
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    default = la.BACKEND
    print(f"backends: {', '.join(la.available_backends())}; prime {la.get_prime()}")
    rows = kernel_rows(args.sizes, args.repeat)
    cols = ["shape"] + [f"{op}_{b}_ms" for op in ("rref", "rank") for b in la.available_backends()] + ["identical"]
    if "cython" in la.available_backends():
        cols.append("rref_speedup")
    print("  ".join(f"{c:>16}" for c in cols))
    for r in rows:
        cells = []
        for c in cols:
            v = r.get(c)
            cells.append(f"{'x'.join(map(str, v)):>16}" if c == "shape" else
                         f"{v:>16.3f}" if isinstance(v, float) else f"{str(v):>16}")
        print("  ".join(cells))
    report = {"prime": la.get_prime(), "kernels": rows}
    if not args.skip_workload:
        report["workload_a_n3_sweep"] = workload_rows(args.repeat)
        print("a_n:3 sweep (k_max 2): " + ", ".join(f"{k} {v:.2f}" for k, v in report["workload_a_n3_sweep"].items()))
    la.use_backend(default)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=2)
    return 0 if all(r["identical"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
