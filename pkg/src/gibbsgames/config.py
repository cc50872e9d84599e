"""Shared tolerances and resource caps.

All equivalence-style checks share one tolerance ``EPS_EQ``; sign tests treat
values in ``[-eps, eps]`` as zero. The joint-action cap bounds every
brute-force enumeration and can be overridden with the ``GIBBSGAME_CAP``
environment variable; dense transition kernels have their own, smaller cap.
"""

import os

from .errors import CapExceededError

EPS_EQ = 1e-9

TOL_TV = 1e-9
TOL_COND = 1e-8

ROW_SUM_TOL = 1e-12
STATIONARY_RESIDUAL_TOL = 1e-12

DEFAULT_JOINT_ACTION_CAP = 10_000_000
DEFAULT_KERNEL_CAP = 4096


def joint_action_cap() -> int:
    """Current brute-force cap, honoring the GIBBSGAME_CAP override."""
    raw = os.environ.get("GIBBSGAME_CAP")
    if raw is None:
        return DEFAULT_JOINT_ACTION_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"GIBBSGAME_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"GIBBSGAME_CAP must be positive, got {cap}")
    return cap


def check_cap(needed: int, cap: int | None = None, what: str = "joint actions") -> None:
    if cap is None:
        cap = joint_action_cap()
    if needed > cap:
        raise CapExceededError(needed, cap, what)
