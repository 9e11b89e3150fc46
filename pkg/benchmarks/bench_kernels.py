"""Compare the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once untimed per backend (numba compiles or loads its
cache there), then ``--repeat`` timed runs; the best time is reported.
"""
import argparse
import time

import numpy as np

from toric_embed import _kernels
from toric_embed.fixtures import load_fixture


def lattice_case():
    # the P(1,1,2,2,6) polytope Δ scaled by 4
    delta = load_fixture("p11226").delta
    A = np.array([f.normal for f in delta.facets], dtype=np.int64)
    b = np.array([int(4 * f.rhs) for f in delta.facets], dtype=np.int64)
    lo = np.array([4 * int(min(v[i] for v in delta.vertices)) for i in range(4)])
    hi = np.array([4 * int(max(v[i] for v in delta.vertices)) for i in range(4)])
    return lambda backend: len(_kernels.lattice_points_in(A, b, lo, hi, backend=backend))


def scan_case():
    fx = load_fixture("p11222")
    exps = np.array([e for (e, _), _c in fx.hypersurface.terms.items()], dtype=np.int64)
    coeffs = np.ones(len(exps), dtype=np.int64)
    return lambda backend: _kernels.torus_scan(exps, coeffs, 11, backend=backend)[0]


def rank_case():
    M = np.random.default_rng(0).integers(-50, 50, size=(120, 160))
    return lambda backend: _kernels.rank_mod_p(M, 10007, backend=backend)


def best_of(fn, backend, repeat):
    fn(backend)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn(backend)
        times.append(time.perf_counter() - t)
    return min(times), result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    cases = {
        "lattice_points (4*Delta, P11226)": lattice_case(),
        "torus_scan (P11222 octic, p=11)": scan_case(),
        "rank_mod_p (120x160, p=10007)": rank_case(),
    }
    print(f"{'kernel':36} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, fn in cases.items():
        rows = {b: best_of(fn, b, args.repeat) for b in backends}
        results = {r for _, r in rows.values()}
        if len(results) != 1:
            raise SystemExit(f"{name}: backends disagree: {rows}")
        cells = " ".join(f"{rows[b][0] * 1e3:10.1f}ms" for b in backends)
        speed = f"{rows['numpy'][0] / rows['numba'][0]:8.1f}x" if "numba" in rows else ""
        print(f"{name:36} {cells} {speed}")


if __name__ == "__main__":
    main()
