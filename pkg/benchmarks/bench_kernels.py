"""Time the numba and numpy Strang kernels against each other.

Usage::

    python3 benchmarks/bench_kernels.py [--n-points 2048] [--steps 20000] [--repeat 3]

Both backends advance the same JC packet (coherent nu = 4, Omega = 5,
g0 = 0.3) and the script reports wall time per step and the largest
amplitude difference between the two results.
"""
import argparse
import time

import numpy as np

from jcwave import kernels
from jcwave.grid import make_grid
from jcwave.models import Model, ModelParams, kinetic_part, potential_part
from jcwave.states import AtomStateSpec, FieldStateSpec, build_initial


def _setup(n_points, dt):
    grid = make_grid(n_points, 40.0)
    params = ModelParams(5.0, 0.3, Model.JC)
    psi = build_initial(FieldStateSpec.coherent(4.0), AtomStateSpec.excited(), grid)
    v = potential_part(params, grid)
    k = kinetic_part(params, grid)
    return psi, v.factor(0.5 * dt), v.factor(dt), k.factor(dt)


def _time(fn, psi, factors, steps, repeat):
    best = np.inf
    for _ in range(repeat):
        u, d = psi.up.copy(), psi.down.copy()
        t0 = time.perf_counter()
        fn(u, d, *factors, steps)
        best = min(best, time.perf_counter() - t0)
    return best, u, d


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-points", type=int, default=2048)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    psi, vh, vf, kf = _setup(args.n_points, 1e-3)
    factors = (vh, vf, kf)
    rows = []
    t_np, u_np, d_np = _time(kernels.strang_vkv_numpy, psi, factors, args.steps, args.repeat)
    rows.append(("numpy", t_np))
    if kernels.strang_vkv_numba is not None:
        kernels.strang_vkv_numba(psi.up.copy(), psi.down.copy(), *factors, 2)  # compile
        t_nb, u_nb, d_nb = _time(kernels.strang_vkv_numba, psi, factors, args.steps, args.repeat)
        rows.append(("numba", t_nb))
        diff = max(np.abs(u_nb - u_np).max(), np.abs(d_nb - d_np).max())
    else:
        diff = None

    print(f"grid points {args.n_points}, steps {args.steps}, best of {args.repeat}")
    for name, t in rows:
        print(f"  {name:6s} {t:8.3f} s  {1e6 * t / args.steps:8.2f} us/step")
    if diff is not None:
        print(f"  speedup numba/numpy {t_np / t_nb:.2f}x, max amplitude difference {diff:.2e}")
    else:
        print("  numba unavailable")


if __name__ == "__main__":
    main()
