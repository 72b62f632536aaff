import importlib
import math
import sys

import numpy as np
import pytest

from cqedgate import _kernels
from cqedgate._kernels import _pykernels

compiled = pytest.importorskip("cqedgate._kernels._ckernels")

Y0 = [2 * math.pi * -0.536, 1.0, 0.0, 0.99, 0.0, 0.141, 0.0, 0.0, 0.0]
PARAMS = [2 * math.pi * 2.24, 2 * math.pi * -0.0675, 2 * math.pi * -0.00464,
          2 * math.pi * 1e-6, 2 * math.pi * 1e-4, 2 * math.pi * 0.0066, 0.1]


def test_compiled_backend_selected():
    assert _kernels.BACKEND == "cython"
    assert _kernels.evolve_he is compiled.evolve_he


def test_fallback_when_extension_missing(monkeypatch):
    monkeypatch.setitem(sys.modules, "cqedgate._kernels._ckernels", None)
    monkeypatch.delattr(_kernels, "_ckernels")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.evolve_he is _pykernels.evolve_he
    finally:
        monkeypatch.undo()
        importlib.reload(_kernels)


@pytest.mark.parametrize("segments", [([40.0], [1]), ([30.0, 200.0, 30.0], [1, 0, -1]),
                                      ([0.0, 50.0], [1, 0])])
def test_propagators_agree(segments):
    durs, sgns = segments
    yc, nc, rc, sc = compiled.evolve_he(Y0, durs, sgns, PARAMS)
    yp, np_, rp, sp = _pykernels.evolve_he(Y0, durs, sgns, PARAMS)
    assert sc == sp == _kernels.OK
    assert (nc, rc) == (np_, rp)
    np.testing.assert_allclose(yc, yp, rtol=1e-12, atol=1e-14)


def test_propagators_flag_bad_detuning():
    p = list(PARAMS)
    p[0] = 2 * math.pi * 0.3  # sweep drives delta + omega through zero
    y0 = list(Y0)
    for impl in (compiled, _pykernels):
        *_, st = impl.evolve_he(y0, [1e4], [-1], p)
        assert st == _kernels.BAD_DETUNING


def test_equilibrium_status_codes():
    args = (np.array([0.3, 2.0]), 0.4, 0.17, 5.0, 15.0, 0.9)
    for impl in (compiled, _pykernels):
        *_, st = impl.solve_equilibrium(*args, max_iter=3, newton_after=1, tol=1e-300)
        assert np.all(st == _kernels.NOT_CONVERGED)
