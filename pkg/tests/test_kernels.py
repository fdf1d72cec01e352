import os
import subprocess
import sys

import numpy as np
import pytest

from squeezebath import _kernels_py, kernels
from squeezebath.gaussian import ModeFrame, squeeze_op
from squeezebath.protocols import frame_path

compiled = pytest.importorskip("squeezebath._kernels")


def _collide_args():
    return (0.9, 0.1, 0.4, 0.3, -0.2, 1.2, 0.0, 0.6, 0.17, 300, 1.0, 1.0)


def test_collide_sweep_backends_agree():
    t_py, r_py = _kernels_py.collide_sweep(*_collide_args())
    t_c, r_c = compiled.collide_sweep(*_collide_args())
    assert np.allclose(t_py, t_c, rtol=0, atol=1e-13)
    assert np.allclose(r_py, r_c, rtol=0, atol=1e-13)


def test_quasi_static_sweep_backends_agree():
    start = ModeFrame(1.0, squeeze_op(0.7).mat)
    omegas, bases = frame_path(start, ModeFrame(1.8), 500, "cosine")
    args = (omegas, bases, 0.8, 0.05, 0.5, 1.3, 0.4, 0.2)
    r_py, t_py = _kernels_py.quasi_static_sweep(*args)
    r_c, t_c = compiled.quasi_static_sweep(*args)
    assert np.allclose(t_py, t_c, rtol=0, atol=1e-13)
    assert np.allclose(r_py, r_c, rtol=0, atol=1e-13)


def test_backend_selection():
    assert kernels.BACKEND in ("compiled", "python")
    env = dict(os.environ, SQUEEZEBATH_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import squeezebath.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
