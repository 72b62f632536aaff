"""Kernel dispatch: compiled extension when built, Python fallback otherwise."""
from . import _pykernels

try:
    from . import _ckernels as _impl
    BACKEND = "cython"
except ImportError:  # extension not built
    _impl = _pykernels
    BACKEND = "python"

solve_equilibrium = _impl.solve_equilibrium
evolve_he = _impl.evolve_he

OK = _pykernels.OK
NOT_CONVERGED = _pykernels.NOT_CONVERGED
STEP_UNDERFLOW = _pykernels.STEP_UNDERFLOW
BAD_DETUNING = _pykernels.BAD_DETUNING

__all__ = ["BACKEND", "solve_equilibrium", "evolve_he", "OK",
           "NOT_CONVERGED", "STEP_UNDERFLOW", "BAD_DETUNING"]
