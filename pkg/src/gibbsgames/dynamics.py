"""Stochastic sequential play and its exact round-chain analysis.

Players move one at a time in the fixed order 0..n-1; each draws its next
action from a strictly positive conditional distribution over its own actions
given its neighbors' current actions. One full pass is a round; the induced
round chain over joint actions is exactly a systematic-scan Gibbs sampler, so
its stationary law is computable by dense linear algebra at desk scale.

Randomness is counter-based: uniforms for a trace come from a Philox stream
keyed by the seed alone, so the draw at step t = r*n + i is a pure function of
(seed, t) and parallel chains with distinct seeds reproduce sequential runs.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import indexing
from .config import (
    DEFAULT_KERNEL_CAP,
    EPS_EQ,
    ROW_SUM_TOL,
    STATIONARY_RESIDUAL_TOL,
    TOL_COND,
    TOL_TV,
    check_cap,
)
from .errors import (
    InconsistentSchemeError,
    NonErgodicError,
    ValidationError,
)
from .games import ActionSpace, GraphicalGame
from .graphs import Graph
from .potentials import GibbsPotential, GlobalPotential, TransformWitness, decompose
from ._sweep import BACKEND, run_sweeps

_ORDER_SAMPLER_SEED = 20817


def tv_distance(p, q) -> float:
    """Total variation distance between two distributions on the same support."""
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


@dataclass(frozen=True, eq=False)
class PlayingScheme:
    """Per-player conditional action tables, local to a graph.

    ``tables[i]`` has one row per mixed-radix configuration of player i's open
    neighborhood (ascending players) and one column per own action. Rows must
    be strictly positive and sum to one.
    """

    graph: Graph
    actions: ActionSpace
    tables: tuple

    def __post_init__(self):
        if self.actions.n != self.graph.n:
            raise ValidationError("action space and graph disagree on player count")
        sizes = self.actions.sizes
        norm = []
        for i in range(self.graph.n):
            nbrs = sorted(self.graph.neighbors(i))
            nconf = indexing.total_actions([sizes[j] for j in nbrs])
            t = np.asarray(self.tables[i], dtype=np.float64).reshape(nconf, sizes[i])
            if np.any(t <= 0.0):
                raise ValidationError(f"player {i}: conditional entries must be > 0")
            if np.max(np.abs(t.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
                raise ValidationError(f"player {i}: conditional rows must sum to 1")
            norm.append(t)
        object.__setattr__(self, "tables", tuple(norm))

    @property
    def n(self) -> int:
        return self.graph.n

    def neighborhoods(self) -> tuple:
        return tuple(tuple(sorted(self.graph.neighbors(i))) for i in range(self.n))


@dataclass(frozen=True, eq=False)
class PlayTrace:
    """Joint-action outcome of each round, plus what produced it."""

    actions: ActionSpace
    x0: tuple
    outcomes: np.ndarray  # (rounds, n) int64
    seed: int

    @property
    def rounds(self) -> int:
        return int(self.outcomes.shape[0])


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    actions: ActionSpace
    counts: np.ndarray
    total_rounds: int

    @property
    def probs(self) -> np.ndarray:
        return self.counts / self.total_rounds


@dataclass(frozen=True, eq=False)
class TransitionKernel:
    """Dense row-stochastic matrix of the round chain over joint actions."""

    actions: ActionSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        total = self.actions.joint_count
        if m.shape != (total, total):
            raise ValidationError(f"kernel must be {total}x{total}, got {m.shape}")
        if np.any(m < 0.0):
            raise ValidationError("kernel entries must be nonnegative")
        if np.max(np.abs(m.sum(axis=1) - 1.0)) > ROW_SUM_TOL:
            raise ValidationError("kernel rows must sum to 1")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    """Stationary laws across scan orders plus the conditional-match test.

    consistent is true iff the worst pairwise total-variation gap between
    orders is within tol_tv and every player's conditionals match the
    stationary law's within tol_cond.
    """

    consistent: bool
    orders: tuple
    stationaries: tuple
    max_tv: float
    tv_witness: tuple | None  # (order a, order b, joint action)
    max_conditional_mismatch: float
    conditional_witness: tuple | None  # (player, neighbor configuration)
    tol_tv: float
    tol_cond: float


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _local_rows(game: GraphicalGame, i: int) -> np.ndarray:
    """Player i's local payoffs as (neighbor configuration, own action) rows."""
    sizes = game.actions.sizes
    lp = game.local_payoffs[i]
    pos_i = lp.scope.index(i)
    t = lp.table.reshape([sizes[j] for j in lp.scope])
    return np.moveaxis(t, pos_i, -1).reshape(-1, sizes[i])


def sbr_scheme(game: GraphicalGame, w) -> PlayingScheme:
    """Smoothed best response: action probabilities proportional to
    exp(local payoff / w_i), computed with a max shift per row."""
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if len(w) != game.n or np.any(w <= 0):
        raise ValidationError(f"need {game.n} strictly positive weights")
    tables = tuple(
        _softmax_rows(_local_rows(game, i) / w[i]) for i in range(game.n)
    )
    return PlayingScheme(graph=game.graph, actions=game.actions, tables=tables)


def sbrd_scheme(game: GraphicalGame, witness: TransformWitness) -> PlayingScheme:
    """Difference-based smoothed best response through a transform witness.

    Every realized payoff difference is mapped back to a potential difference
    via the witness's inverse; a missing entry raises MissingDifferenceError.
    Row masses become 1 / sum_b exp(inverse(M(b) - M(a))), evaluated in log
    space.
    """
    if witness.sizes != game.actions.sizes:
        raise ValidationError("witness and game disagree on the action space")
    tables = []
    for i in range(game.n):
        rows = _local_rows(game, i)
        nconf, k = rows.shape
        nbrs = tuple(sorted(game.graph.neighbors(i)))
        if witness.neighborhoods[i] != nbrs:
            raise ValidationError(f"witness neighborhood mismatch for player {i}")
        out = np.empty((nconf, k))
        for conf in range(nconf):
            d = np.empty((k, k))
            for a in range(k):
                for b in range(k):
                    d[b, a] = witness.inverse_difference(
                        i, conf, float(rows[conf, b] - rows[conf, a])
                    )
            # p(a) = 1 / sum_b exp(d[b, a]); log-sum-exp per column
            m = d.max(axis=0)
            log_denom = m + np.log(np.exp(d - m).sum(axis=0))
            p = np.exp(-log_denom)
            out[conf] = p / p.sum()
        tables.append(out)
    return PlayingScheme(graph=game.graph, actions=game.actions, tables=tuple(tables))


def _pack_scheme(scheme: PlayingScheme):
    sizes = scheme.actions.sizes
    nbr_flat, nbr_sizes, nbr_off = [], [], [0]
    cdf_parts, cdf_off = [], []
    offset = 0
    for i in range(scheme.n):
        nbrs = sorted(scheme.graph.neighbors(i))
        nbr_flat.extend(nbrs)
        nbr_sizes.extend(sizes[j] for j in nbrs)
        nbr_off.append(len(nbr_flat))
        cdf = np.cumsum(scheme.tables[i], axis=1).reshape(-1)
        cdf_parts.append(cdf)
        cdf_off.append(offset)
        offset += len(cdf)
    return (
        np.asarray(nbr_flat, dtype=np.int64),
        np.asarray(nbr_off, dtype=np.int64),
        np.asarray(nbr_sizes, dtype=np.int64),
        np.concatenate(cdf_parts),
        np.asarray(cdf_off, dtype=np.int64),
        np.asarray(sizes, dtype=np.int64),
    )


def play(scheme: PlayingScheme, x0, rounds: int, seed: int) -> PlayTrace:
    """Simulate `rounds` full sweeps from x0, deterministically in the seed."""
    x0 = scheme.actions.validate_joint_action(x0)
    if rounds < 1:
        raise ValidationError(f"round count must be >= 1, got {rounds}")
    if seed < 0:
        raise ValidationError("seed must be a nonnegative integer")
    n = scheme.n
    uniforms = np.random.Generator(np.random.Philox(key=seed)).random(rounds * n)
    state = np.asarray(x0, dtype=np.int64)
    out = np.empty((rounds, n), dtype=np.int64)
    run_sweeps(state, out, uniforms, *_pack_scheme(scheme))
    return PlayTrace(actions=scheme.actions, x0=x0, outcomes=out, seed=seed)


def empirical_distribution(trace: PlayTrace) -> EmpiricalDistribution:
    if trace.rounds < 1:
        raise ValidationError("need at least one round")
    sizes = trace.actions.sizes
    st = np.asarray(indexing.strides(sizes), dtype=np.int64)
    flat = trace.outcomes @ st
    counts = np.bincount(flat, minlength=trace.actions.joint_count)
    return EmpiricalDistribution(
        actions=trace.actions, counts=counts, total_rounds=trace.rounds
    )


def _conditional_fields(scheme: PlayingScheme):
    """For each player, p_i(x_i | neighbors) evaluated at every joint action."""
    sizes = scheme.actions.sizes
    fields = []
    for i in range(scheme.n):
        nbrs = sorted(scheme.graph.neighbors(i))
        conf = indexing.scope_index_vector(sizes, nbrs)
        own = indexing.coordinate_vector(sizes, i)
        fields.append(scheme.tables[i][conf, own].reshape(sizes))
    return fields


def round_kernel(
    scheme: PlayingScheme, order=None, cap: int = DEFAULT_KERNEL_CAP
) -> TransitionKernel:
    """Dense transition matrix of one full sweep in the given player order."""
    total = scheme.actions.joint_count
    check_cap(total, cap, what="kernel states")
    n = scheme.n
    order = tuple(range(n)) if order is None else tuple(order)
    if sorted(order) != list(range(n)):
        raise ValidationError(f"order {order} is not a permutation of 0..{n - 1}")
    sizes = scheme.actions.sizes
    fields = _conditional_fields(scheme)
    k = np.eye(total)
    for i in order:
        m = k.reshape((total,) + sizes)
        marg = m.sum(axis=1 + i, keepdims=True)
        k = (marg * fields[i][np.newaxis]).reshape(total, total)
    return TransitionKernel(actions=scheme.actions, matrix=k)


def stationary(kernel: TransitionKernel) -> np.ndarray:
    """Unique stationary distribution of a kernel that mixes within n steps.

    Solved densely; a residual above tolerance after refinement is an error
    rather than a silently degraded answer.
    """
    m = kernel.matrix
    total = m.shape[0]
    power = m
    for _ in range(kernel.actions.n):
        if np.all(power > 0.0):
            break
        power = power @ m
    else:
        raise NonErgodicError(
            "kernel is not strictly positive after a full sweep of compositions"
        )
    a = m.T - np.eye(total)
    a[-1, :] = 1.0
    b = np.zeros(total)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    pi = np.maximum(pi, 0.0)
    pi /= pi.sum()
    for _ in range(100):
        residual = float(np.max(np.abs(pi @ m - pi)))
        if residual <= STATIONARY_RESIDUAL_TOL:
            return pi
        pi = pi @ m
        pi /= pi.sum()
    raise ArithmeticError(f"stationary solve did not reach residual tolerance: {residual:.3e}")


def _scan_orders(n: int):
    orders = [tuple(range(n)), tuple(reversed(range(n)))]
    if n <= 4:
        orders.extend(itertools.permutations(range(n)))
    else:
        rng = np.random.default_rng(_ORDER_SAMPLER_SEED)
        for _ in range(8):
            orders.append(tuple(int(v) for v in rng.permutation(n)))
    seen, unique = set(), []
    for o in orders:
        if o not in seen:
            seen.add(o)
            unique.append(o)
    return unique


def consistency_check(
    scheme: PlayingScheme,
    tol_tv: float = TOL_TV,
    tol_cond: float = TOL_COND,
    cap: int = DEFAULT_KERNEL_CAP,
) -> ConsistencyReport:
    """Does every scan order lead to one stationary law with the scheme's
    conditionals? Order dependence is exactly the failure signature of
    conditionals that belong to no single joint distribution."""
    orders = _scan_orders(scheme.n)
    pis = [stationary(round_kernel(scheme, order=o, cap=cap)) for o in orders]

    max_tv, tv_witness = 0.0, None
    for (oa, pa), (ob, pb) in itertools.combinations(zip(orders, pis), 2):
        gap = np.abs(pa - pb)
        d = 0.5 * float(gap.sum())
        if d > max_tv:
            max_tv = d
            state = indexing.decode(int(np.argmax(gap)), scheme.actions.sizes)
            tv_witness = (oa, ob, state)

    sizes = scheme.actions.sizes
    pi = pis[0].reshape(sizes)
    max_cond, cond_witness = 0.0, None
    for i in range(scheme.n):
        nbrs = sorted(scheme.graph.neighbors(i))
        closed = sorted(nbrs + [i])
        drop = tuple(j for j in range(scheme.n) if j not in closed)
        q = pi.sum(axis=drop) if drop else pi
        pos_i = closed.index(i)
        cond = q / q.sum(axis=pos_i, keepdims=True)
        rows = np.moveaxis(cond, pos_i, -1).reshape(-1, sizes[i])
        gap = np.abs(rows - scheme.tables[i])
        worst = float(gap.max())
        if worst > max_cond:
            max_cond = worst
            conf = int(np.argmax(gap.max(axis=1)))
            conf_actions = indexing.decode(conf, [sizes[j] for j in nbrs])
            cond_witness = (i, conf_actions)

    return ConsistencyReport(
        consistent=(max_tv <= tol_tv and max_cond <= tol_cond),
        orders=tuple(orders),
        stationaries=tuple(pis),
        max_tv=max_tv,
        tv_witness=tv_witness,
        max_conditional_mismatch=max_cond,
        conditional_witness=cond_witness,
        tol_tv=tol_tv,
        tol_cond=tol_cond,
    )


def infer_potential_from_play(
    scheme: PlayingScheme,
    g: Graph,
    eps: float = EPS_EQ,
    cap: int = DEFAULT_KERNEL_CAP,
) -> GibbsPotential:
    """Recover clique potentials from a globally convergent scheme.

    The log of the (order-independent) stationary law is a global potential;
    splitting it over g's maximal cliques yields the game's potential up to an
    additive constant. Raises InconsistentSchemeError when the scheme is not
    globally convergent; a NotGibbsError from the split would mean the law is
    no Markov field over g and propagates.
    """
    report = consistency_check(scheme, cap=cap)
    if not report.consistent:
        raise InconsistentSchemeError(report)
    psi = GlobalPotential(actions=scheme.actions, table=np.log(report.stationaries[0]))
    return decompose(psi, g, eps=eps).gibbs


__all__ = [
    "BACKEND",
    "ConsistencyReport",
    "EmpiricalDistribution",
    "PlayTrace",
    "PlayingScheme",
    "TransitionKernel",
    "consistency_check",
    "empirical_distribution",
    "infer_potential_from_play",
    "play",
    "round_kernel",
    "sbr_scheme",
    "sbrd_scheme",
    "stationary",
    "tv_distance",
]
