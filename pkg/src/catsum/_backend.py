"""Stepping-kernel selection.

The compiled Cython extension is preferred when it imported cleanly; the
NumPy fallback is behaviorally identical (same time grid, same stepping
order) but a few times slower on master-equation sweeps.  Set
``CATSUM_FORCE_PYTHON=1`` to force the fallback, e.g. for benchmarking.
"""

import os

if os.environ.get("CATSUM_FORCE_PYTHON"):
    from . import _stepper_py as _impl

    COMPILED = False
else:
    try:
        from . import _stepper as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _stepper_py as _impl

        COMPILED = False


def active_backend() -> str:
    return "compiled" if COMPILED else "python"


def make_schrodinger_stepper(d, lm_pack):
    return _impl.SchrodingerStepper(d, *lm_pack)


def make_lindblad_stepper(d, lm_pack, sc_pack):
    return _impl.LindbladStepper(d, *lm_pack, *sc_pack)
