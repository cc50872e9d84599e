"""Sweep-kernel backend selection.

The compiled extension is preferred; the pure-Python twin is the fallback.
Both produce bit-identical traces, so the choice only affects speed.
``get_backend`` exposes both for benchmarking.
"""

try:
    from ._sweep_cy import run_sweeps

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._sweep_py import run_sweeps

    BACKEND = "python"


def get_backend(name: str | None = None):
    """Return (backend name, run_sweeps callable); name in {None, 'cython', 'python'}."""
    if name is None:
        return BACKEND, run_sweeps
    if name == "python":
        from . import _sweep_py

        return "python", _sweep_py.run_sweeps
    if name == "cython":
        from . import _sweep_cy

        return "cython", _sweep_cy.run_sweeps
    raise ValueError(f"unknown backend {name!r}")
