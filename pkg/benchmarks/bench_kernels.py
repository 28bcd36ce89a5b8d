"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Numba timings exclude JIT compilation (one warm-up call per kernel).
"""

import argparse
import json
import time

from scatplane import LPParams, LinearizedPoly, build_field, lp_poly, normalize_poly
from scatplane._accel import HAVE_NUMBA
from scatplane.plane import plane_from_spread, verify_affine
from scatplane.quasifield import build_quasifield, verify_axioms
from scatplane.spread import spread_from_poly
from scatplane.subspace import equivalence_fast, subspace_stabilizer_count


def cases():
    T53 = build_field(p=5, e=1, t=3)
    T45 = build_field(p=2, e=2, t=5)
    T52 = build_field(p=5, e=1, t=2)
    f45 = lp_poly(T45, LPParams(T45.gpow(1), 1))
    q53 = build_quasifield(normalize_poly(lp_poly(T53, LPParams(T53.gpow(1), 1)))[0])
    q53.materialize()
    a52 = plane_from_spread(spread_from_poly(lp_poly(T52, LPParams(T52.gpow(1), 1))))
    x1, x2 = LinearizedPoly.monomial(T45, 1), LinearizedPoly.monomial(T45, 2)
    return {
        "equivalence scan, inequivalent pair (4,5)": lambda b: equivalence_fast(x1, x2, backend=b),
        "stabilizer count GL (4,5)": lambda b: subspace_stabilizer_count(f45, "GL", backend=b),
        "quasifield axioms (5,3)": lambda b: verify_axioms(q53, b),
        "direct affine check (5,2)": lambda b: verify_affine(a52, "direct", b),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    rows = []
    for name, run in cases().items():
        row = {"case": name}
        for b in backends:
            if b == "numba":
                run(b)
            row[b] = best_of(lambda: run(b), args.repeat)
        if len(backends) == 2:
            row["speedup"] = row["numpy"] / row["numba"]
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':45s} " + " ".join(f"{b:>10s}" for b in backends) + ("    speedup" if len(backends) == 2 else ""))
    for row in rows:
        line = f"{row['case']:45s} " + " ".join(f"{row[b]:9.4f}s" for b in backends)
        if "speedup" in row:
            line += f"  {row['speedup']:8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
