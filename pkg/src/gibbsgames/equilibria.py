"""Pure-strategy equilibrium enumeration and deterministic best-response play."""

from dataclasses import dataclass

import numpy as np

from . import indexing
from .config import EPS_EQ, check_cap
from .errors import CycleError, MaxStepsError
from .games import Game, payoff, payoff_tensor
from .potentials import GlobalPotential


def enumerate_pne(game: Game, eps: float = EPS_EQ, cap: int | None = None) -> tuple:
    """All joint actions admitting no strictly improving unilateral deviation,
    in lexicographic order. Improvements within eps do not count."""
    sizes = game.actions.sizes
    check_cap(game.actions.joint_count, cap)
    stable = np.ones(game.actions.joint_count, dtype=bool)
    for i in range(game.n):
        mi = payoff_tensor(game, i, cap)
        best = mi.max(axis=i, keepdims=True)
        stable &= (mi >= best - eps).reshape(-1)
    return tuple(
        indexing.decode(int(v), sizes) for v in np.nonzero(stable)[0]
    )


def potential_maximizers(psi: GlobalPotential, eps: float = EPS_EQ) -> tuple:
    """Argmax set of the potential, ties within eps included, sorted."""
    top = float(psi.table.max())
    return tuple(
        indexing.decode(int(v), psi.actions.sizes)
        for v in np.nonzero(psi.table >= top - eps)[0]
    )


@dataclass(frozen=True)
class BestResponsePath:
    """States visited by deterministic best-response play, x0 first."""

    states: tuple
    moves: int

    @property
    def final(self) -> tuple:
        return self.states[-1]


def best_response_path(
    game: Game, x0, max_steps: int = 10_000, eps: float = EPS_EQ, cap: int | None = None
) -> BestResponsePath:
    """Players in order 0..n-1; the first with a strictly improving move plays
    its best response (lowest action index among eps-tied maxima). Terminates
    at an equilibrium, or raises CycleError when a sweep-boundary state
    repeats (possible only without an ordinal potential)."""
    x = list(game.actions.validate_joint_action(x0))
    check_cap(game.actions.joint_count, cap)
    sizes = game.actions.sizes
    states = [tuple(x)]
    seen = {tuple(x)}
    moves = 0
    while True:
        improved = False
        for i in range(game.n):
            current = payoff(game, i, x)
            values = [
                payoff(game, i, x[:i] + [a] + x[i + 1 :]) for a in range(sizes[i])
            ]
            top = max(values)
            if top > current + eps:
                x[i] = next(a for a, v in enumerate(values) if v >= top - eps)
                states.append(tuple(x))
                moves += 1
                improved = True
                if moves >= max_steps:
                    raise MaxStepsError(f"no equilibrium within {max_steps} moves")
        if not improved:
            return BestResponsePath(states=tuple(states), moves=moves)
        if tuple(x) in seen:
            raise CycleError(tuple(x))
        seen.add(tuple(x))
