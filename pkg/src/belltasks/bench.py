"""Compare the compiled kernels against the pure-numpy fallback.

Run as `python -m belltasks.bench`.  Each workload runs once per backend
with BELLTASKS_KERNELS forced, after a warmup pass so compilation time is
not billed to the compiled path.  Values must agree exactly between
backends; a disagreement aborts the run.
"""

import argparse
import os
import time

from . import classical, graphs, npa, tasks


def _game(name, kind="rendezvous", start="any"):
    g = graphs.catalog_lookup(name).graph
    return tasks.build_game(g, tasks.TaskSpec(kind=kind, r=2, h=1, start=start))


def _workloads():
    k7 = _game("7-gon")
    k7d = _game("7-gon", kind="domination", start="distinct")
    big = tasks.build_game(graphs.make_complete(7),
                           tasks.TaskSpec(kind="rendezvous", r=2, h=1))
    return [
        ("symmetric strategy enumeration (K7 rendezvous)",
         lambda: classical.classical_optimum(big, symmetric_only=True)[0]),
        ("strategy pair enumeration (K7 rendezvous)",
         lambda: classical.classical_optimum(big)[0]),
        ("relaxation solve, level 1+ab (7-gon rendezvous)",
         lambda: round(npa.npa_bound(k7, "1+ab").value, 8)),
        ("relaxation solve, level 1+ab (7-gon domination distinct)",
         lambda: round(npa.npa_bound(k7d, "1+ab").value, 8)),
    ]


def run(repeat=1):
    try:
        import numba  # noqa: F401
        backends = ("numba", "numpy")
    except ImportError:
        print("numba not importable; timing the numpy fallback only")
        backends = ("numpy",)

    rows = []
    for label, fn in _workloads():
        times = {}
        value = None
        for backend in backends:
            os.environ["BELLTASKS_KERNELS"] = backend
            fn()  # warmup: jit compilation, caches
            best = None
            for _ in range(repeat):
                t, v = _timed(fn)
                best = t if best is None else min(best, t)
                if value is None:
                    value = v
                elif v != value:
                    raise SystemExit(
                        f"backend disagreement on {label}: {v} != {value}")
            times[backend] = best
        rows.append((label, value, times))
    os.environ.pop("BELLTASKS_KERNELS", None)

    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  " + "".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, value, times in rows:
        line = f"{label:<{width}}  "
        line += "".join(f"{times[b]:>9.3f}s" for b in backends)
        if len(backends) == 2:
            line += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(line)


def _timed(fn):
    t0 = time.time()
    v = fn()
    return time.time() - t0, v


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=1,
                   help="extra timed repetitions; the best time is kept")
    args = p.parse_args(argv)
    run(repeat=args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
