"""
Time the compiled inner loops against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--collisions 20000] [--steps 10000] [--repeat 3]

Both backends are called on identical inputs and their outputs are compared
before any timing is reported.
"""

import argparse
import timeit

import numpy as np

from squeezebath import _kernels_py
from squeezebath.gaussian import ModeFrame, squeeze_op
from squeezebath.protocols import frame_path

try:
    from squeezebath import _kernels as _compiled
except ImportError:
    _compiled = None


def _cases(collisions, steps):
    collide = (0.9, 0.1, 0.4, 0.3, -0.2, 1.2, 0.0, 0.6, 0.1, collisions, 1.0, 1.0)
    omegas, bases = frame_path(ModeFrame(1.0, squeeze_op(1.0).mat), ModeFrame(1.0), steps)
    sweep = (omegas, bases, 0.5 * np.cosh(2.0), 0.0, 0.5 * np.cosh(2.0), 1.0, 1.0, 0.0)
    return {"collide_sweep": collide, "quasi_static_sweep": sweep}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--collisions", type=int, default=20000)
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<20} {'python [s]':>12} {'compiled [s]':>14} {'speedup':>9} {'max |diff|':>12}")
    for name, call_args in _cases(args.collisions, args.steps).items():
        py_fn = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py_fn(*call_args), number=1, repeat=args.repeat))
        if _compiled is None:
            print(f"{name:<20} {t_py:12.4f} {'n/a':>14} {'n/a':>9} {'n/a':>12}")
            continue
        c_fn = getattr(_compiled, name)
        diff = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
                   for a, b in zip(py_fn(*call_args), c_fn(*call_args)))
        t_c = min(timeit.repeat(lambda: c_fn(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<20} {t_py:12.4f} {t_c:14.4f} {t_py / t_c:8.1f}x {diff:12.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
