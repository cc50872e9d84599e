"""Graphical and hypergraphical games with explicit payoff tables.

A graphical game stores one local table per player over that player's closed
neighborhood N(i). A hypergraphical game stores one table per (player,
hyperedge) pair; the player's payoff is the sum of its clique tables. A
graphical polymatrix game is simply a hypergraphical game whose hyperedges
all have size <= 2 (a predicate, not a separate type).
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import indexing
from .config import EPS_EQ, check_cap
from .errors import ValidationError
from .graphs import Graph, Hypergraph, primal_graph


@dataclass(frozen=True)
class ActionSpace:
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) == 0 or any(s < 1 for s in sizes):
            raise ValidationError(f"action counts must all be >= 1, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def joint_count(self) -> int:
        return indexing.total_actions(self.sizes)

    def validate_joint_action(self, x) -> tuple[int, ...]:
        x = tuple(int(a) for a in x)
        if len(x) != self.n:
            raise ValidationError(f"joint action {x} has wrong length for n={self.n}")
        for i, a in enumerate(x):
            if not 0 <= a < self.sizes[i]:
                raise ValidationError(f"action {a} of player {i} out of range")
        return x


@dataclass(frozen=True, eq=False)
class LocalPayoff:
    """Dense table over the joint actions of `scope` (ascending players).

    Flat, row-major, most significant digit = smallest player index.
    """

    scope: tuple
    table: np.ndarray

    def __post_init__(self):
        scope = tuple(int(i) for i in self.scope)
        if list(scope) != sorted(set(scope)):
            raise ValidationError(f"scope {scope} must be strictly ascending")
        table = np.asarray(self.table, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(table)):
            raise ValidationError(f"non-finite payoff entry in table over {scope}")
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "table", table)

    def expected_len(self, actions: ActionSpace) -> int:
        return indexing.total_actions([actions.sizes[j] for j in self.scope])

    def check_shape(self, actions: ActionSpace, who="table"):
        want = self.expected_len(actions)
        if len(self.table) != want:
            raise ValidationError(
                f"{who} over scope {self.scope} has {len(self.table)} entries, "
                f"expected {want}"
            )


def _local_value(lp: LocalPayoff, sizes, x) -> float:
    idx = 0
    for j in lp.scope:
        idx = idx * sizes[j] + x[j]
    return float(lp.table[idx])


@dataclass(frozen=True, eq=False)
class GraphicalGame:
    graph: Graph
    actions: ActionSpace
    local_payoffs: tuple  # one LocalPayoff per player, scope == N(i)

    def __post_init__(self):
        if self.actions.n != self.graph.n:
            raise ValidationError("action space and graph disagree on player count")
        lps = tuple(self.local_payoffs)
        if len(lps) != self.graph.n:
            raise ValidationError("need exactly one local payoff per player")
        for i, lp in enumerate(lps):
            want = self.graph.closed_neighborhood(i)
            if lp.scope != want:
                raise ValidationError(
                    f"player {i}: local payoff scope {lp.scope} != N({i}) = {want}"
                )
            lp.check_shape(self.actions, who=f"player {i} payoff")
        object.__setattr__(self, "local_payoffs", lps)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True, eq=False)
class HypergraphicalGame:
    hypergraph: Hypergraph
    actions: ActionSpace
    clique_payoffs: dict  # (player, hyperedge tuple) -> LocalPayoff with scope == hyperedge

    def __post_init__(self):
        if self.actions.n != self.hypergraph.n:
            raise ValidationError("action space and hypergraph disagree on player count")
        want = {
            (i, he)
            for he in self.hypergraph.hyperedges
            for i in he
        }
        got = set(self.clique_payoffs.keys())
        if got != want:
            missing = want - got
            extra = got - want
            raise ValidationError(
                f"clique payoff keys mismatch: missing {sorted(missing)}, "
                f"unexpected {sorted(extra)}"
            )
        for (i, he), lp in self.clique_payoffs.items():
            if lp.scope != he:
                raise ValidationError(
                    f"table for player {i}, hyperedge {he} has scope {lp.scope}"
                )
            lp.check_shape(self.actions, who=f"player {i}, hyperedge {he} payoff")

    @property
    def n(self) -> int:
        return self.hypergraph.n


Game = GraphicalGame | HypergraphicalGame


def payoff(game: Game, i: int, x) -> float:
    """Player i's payoff at joint action x."""
    x = game.actions.validate_joint_action(x)
    sizes = game.actions.sizes
    if isinstance(game, GraphicalGame):
        return _local_value(game.local_payoffs[i], sizes, x)
    return sum(
        _local_value(game.clique_payoffs[(i, he)], sizes, x)
        for he in game.hypergraph.edges_of(i)
    )


def payoff_tensor(game: Game, i: int, cap: int | None = None) -> np.ndarray:
    """Player i's payoff at every joint action, shaped like the action space."""
    sizes = game.actions.sizes
    check_cap(game.actions.joint_count, cap)
    if isinstance(game, GraphicalGame):
        lp = game.local_payoffs[i]
        flat = lp.table[indexing.scope_index_vector(sizes, lp.scope)]
    else:
        flat = np.zeros(game.actions.joint_count)
        for he in game.hypergraph.edges_of(i):
            lp = game.clique_payoffs[(i, he)]
            flat = flat + lp.table[indexing.scope_index_vector(sizes, lp.scope)]
    return flat.reshape(sizes)


def flatten(hg: HypergraphicalGame, cap: int | None = None) -> GraphicalGame:
    """Collapse clique tables into one local table per player.

    The result lives on the primal graph of the hypergraph and agrees with the
    source payoff exactly at every joint action. A player in no hyperedge gets
    a constant-zero table of scope {i}.
    """
    g = primal_graph(hg.hypergraph)
    sizes = hg.actions.sizes
    locals_ = []
    for i in range(hg.n):
        scope = g.closed_neighborhood(i)
        scope_sizes = [sizes[j] for j in scope]
        check_cap(indexing.total_actions(scope_sizes), cap, what=f"scope of player {i}")
        table = np.zeros(scope_sizes)
        pos = {j: k for k, j in enumerate(scope)}
        for he in hg.hypergraph.edges_of(i):
            lp = hg.clique_payoffs[(i, he)]
            # broadcast the clique table across the rest of the scope
            shape = [1] * len(scope)
            for j in he:
                shape[pos[j]] = sizes[j]
            table += lp.table.reshape(shape)
        locals_.append(LocalPayoff(scope=scope, table=table.reshape(-1)))
    return GraphicalGame(graph=g, actions=hg.actions, local_payoffs=tuple(locals_))


def is_polymatrix(hg: HypergraphicalGame) -> bool:
    """True when every hyperedge has size <= 2 (a graphical polymatrix game)."""
    return all(len(he) <= 2 for he in hg.hypergraph.hyperedges)


def is_hyperedge_symmetric(hg: HypergraphicalGame, atol: float = 0.0) -> bool:
    """True iff every player in a hyperedge carries the same table for it.

    Exact comparison by default; pass atol for a tolerant check.
    """
    for he in hg.hypergraph.hyperedges:
        ref = hg.clique_payoffs[(he[0], he)].table
        for i in he[1:]:
            other = hg.clique_payoffs[(i, he)].table
            if atol == 0.0:
                if not np.array_equal(ref, other):
                    return False
            elif not np.allclose(ref, other, rtol=0.0, atol=atol):
                return False
    return True


def is_pairwise_symmetric(hg: HypergraphicalGame) -> bool:
    return is_polymatrix(hg) and is_hyperedge_symmetric(hg)


def payoff_difference_equivalent(
    g1: Game, g2: Game, w, eps: float = EPS_EQ, cap: int | None = None
) -> bool:
    """Do unilateral payoff differences of g1 equal w_i times those of g2?

    Brute force over every (player, opponent profile, action pair).
    """
    if g1.n != g2.n or g1.actions.sizes != g2.actions.sizes:
        raise ValidationError("games must share player count and action space")
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if len(w) != g1.n or np.any(w <= 0):
        raise ValidationError(f"need {g1.n} strictly positive weights")
    sizes = g1.actions.sizes
    check_cap(g1.actions.joint_count, cap)
    for i in range(g1.n):
        m1 = np.moveaxis(payoff_tensor(g1, i, cap), i, 0).reshape(sizes[i], -1)
        m2 = np.moveaxis(payoff_tensor(g2, i, cap), i, 0).reshape(sizes[i], -1)
        for a, b in itertools.combinations(range(sizes[i]), 2):
            d1 = m1[a] - m1[b]
            d2 = m2[a] - m2[b]
            if np.max(np.abs(d1 - w[i] * d2), initial=0.0) > eps:
                return False
    return True
