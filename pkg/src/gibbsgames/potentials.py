"""Potentials for graphical games and their clique-additive (Gibbs) form.

A global potential is a dense table over all joint actions. A Gibbs potential
is a sum of clique-local tables over a graph. The bridge between the two is
the canonical interaction expansion relative to the all-zeros joint action:
a global table is clique-additive over a graph exactly when all of its
canonical terms outside the graph's cliques vanish, and in that case the
clique terms themselves reconstruct it up to an additive constant.

Checks come in four strengths. A candidate table is an exact potential when
unilateral payoff differences match potential differences; a weighted one
when they match after per-player positive scaling; ordinal when only the
signs match; transformed when, per neighbor configuration, some strictly
increasing map carries potential differences onto payoff differences. Sign
tests treat values within ``eps`` of zero as zero.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import indexing
from .config import EPS_EQ, check_cap
from .errors import (
    MissingDifferenceError,
    NeighborhoodError,
    NotGibbsError,
    NotSymmetricError,
    ValidationError,
)
from .games import (
    ActionSpace,
    Game,
    GraphicalGame,
    HypergraphicalGame,
    LocalPayoff,
    is_hyperedge_symmetric,
    payoff_tensor,
)
from .graphs import (
    Graph,
    Hypergraph,
    has_totally_disconnected_neighborhoods,
    maximal_cliques,
    primal_graph,
)


@dataclass(frozen=True, eq=False)
class GlobalPotential:
    """Dense table over the full joint-action space (row-major, player 0 most significant)."""

    actions: ActionSpace
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.float64).reshape(-1)
        if len(table) != self.actions.joint_count:
            raise ValidationError(
                f"potential table has {len(table)} entries, expected "
                f"{self.actions.joint_count}"
            )
        if not np.all(np.isfinite(table)):
            raise ValidationError("non-finite potential entry")
        object.__setattr__(self, "table", table)

    def tensor(self) -> np.ndarray:
        return self.table.reshape(self.actions.sizes)


@dataclass(frozen=True, eq=False)
class GibbsPotential:
    """Clique-local tables over a graph; the global value is their sum.

    Cliques may be sub-maximal (any mutually connected set, or a singleton).
    """

    graph: Graph
    actions: ActionSpace
    clique_potentials: tuple  # of (clique tuple, flat np.ndarray over the clique's actions)

    def __post_init__(self):
        if self.actions.n != self.graph.n:
            raise ValidationError("action space and graph disagree on player count")
        norm = []
        for clique, table in self.clique_potentials:
            clique = tuple(sorted(int(v) for v in clique))
            if len(set(clique)) != len(clique) or not clique:
                raise ValidationError(f"bad clique {clique}")
            if any(not 0 <= v < self.graph.n for v in clique):
                raise ValidationError(f"clique {clique} out of range")
            if not self.graph.is_clique(clique):
                raise ValidationError(f"{clique} is not a clique of the graph")
            table = np.asarray(table, dtype=np.float64).reshape(-1)
            want = indexing.total_actions([self.actions.sizes[j] for j in clique])
            if len(table) != want:
                raise ValidationError(
                    f"table for clique {clique} has {len(table)} entries, expected {want}"
                )
            if not np.all(np.isfinite(table)):
                raise ValidationError(f"non-finite entry in clique {clique}")
            norm.append((clique, table))
        object.__setattr__(self, "clique_potentials", tuple(norm))

    @property
    def cliques(self) -> tuple:
        return tuple(c for c, _ in self.clique_potentials)


@dataclass(frozen=True)
class Decomposition:
    """Result of splitting a global table over a graph's maximal cliques.

    The additive constant (the table's value at the all-zeros joint action) is
    reported here instead of being spread across clique tables.
    """

    gibbs: GibbsPotential
    constant: float
    max_residual: float


def recompose(gp: GibbsPotential, cap: int | None = None) -> GlobalPotential:
    """Sum the clique tables at every joint action."""
    sizes = gp.actions.sizes
    check_cap(gp.actions.joint_count, cap)
    flat = np.zeros(gp.actions.joint_count)
    for clique, table in gp.clique_potentials:
        flat += table[indexing.scope_index_vector(sizes, clique)]
    return GlobalPotential(actions=gp.actions, table=flat)


def _all_cliques(max_cliques) -> list[tuple]:
    """Every nonempty subset of a maximal clique, deduplicated, lexicographic."""
    seen = set()
    for c in max_cliques:
        for r in range(1, len(c) + 1):
            seen.update(itertools.combinations(c, r))
    return sorted(seen)


def decompose(
    psi: GlobalPotential, g: Graph, eps: float = EPS_EQ, cap: int | None = None
) -> Decomposition:
    """Split a global table into tables over the maximal cliques of g.

    Uses the canonical interaction expansion at the all-zeros joint action:
    for each clique S, the alternating sum of the table restricted to subsets
    of S (other coordinates pinned to 0). Sub-clique terms are folded into the
    lexicographically smallest containing maximal clique. Raises NotGibbsError
    (with the worst joint action as witness) when the clique terms fail to
    reconstruct the table within ``eps``.
    """
    if psi.actions.n != g.n:
        raise ValidationError("potential and graph disagree on player count")
    sizes = psi.actions.sizes
    n = g.n
    check_cap(psi.actions.joint_count, cap)
    psi_t = psi.tensor()
    constant = float(psi_t[(0,) * n])

    mc = maximal_cliques(g).cliques
    cliques = _all_cliques(mc)

    def pinned(subset):
        # table with coordinates outside `subset` pinned to action 0
        idx = tuple(slice(None) if j in subset else 0 for j in range(n))
        return psi_t[idx]

    canonical = {}
    for s in cliques:
        acc = np.zeros([sizes[j] for j in s])
        for r in range(len(s) + 1):
            sign = 1.0 if (len(s) - r) % 2 == 0 else -1.0
            for t in itertools.combinations(s, r):
                shape = [sizes[j] if j in t else 1 for j in s]
                acc += sign * pinned(t).reshape(shape)
        canonical[s] = acc

    recon = np.zeros(psi.actions.joint_count)
    for s in cliques:
        recon += canonical[s].reshape(-1)[indexing.scope_index_vector(sizes, s)]
    residual = psi.table - recon - constant
    worst = int(np.argmax(np.abs(residual)))
    max_residual = float(abs(residual[worst]))
    if max_residual > eps:
        raise NotGibbsError(indexing.decode(worst, sizes), max_residual, eps)

    tables = {
        c: np.zeros(indexing.total_actions([sizes[j] for j in c])) for c in mc
    }
    for s in cliques:
        home = min(c for c in mc if set(s) <= set(c))
        shape = [sizes[j] if j in s else 1 for j in home]
        tables[home] += np.broadcast_to(
            canonical[s].reshape(shape), [sizes[j] for j in home]
        ).reshape(-1)
    gp = GibbsPotential(
        graph=g,
        actions=psi.actions,
        clique_potentials=tuple((c, tables[c]) for c in mc),
    )
    return Decomposition(gibbs=gp, constant=constant, max_residual=max_residual)


def _difference_views(game: Game, psi: GlobalPotential, i: int, cap):
    """Payoff and potential tensors for player i with axis i leading, flattened."""
    sizes = game.actions.sizes
    mi = np.moveaxis(payoff_tensor(game, i, cap), i, 0).reshape(sizes[i], -1)
    pt = np.moveaxis(psi.tensor(), i, 0).reshape(sizes[i], -1)
    return mi, pt


def _check_compatible(game: Game, psi: GlobalPotential):
    if game.actions.sizes != psi.actions.sizes:
        raise ValidationError("game and potential disagree on the action space")


def check_w_potential(
    game: Game, psi: GlobalPotential, w, eps: float = EPS_EQ, cap: int | None = None
) -> bool:
    """Unilateral payoff differences equal w_i times potential differences."""
    _check_compatible(game, psi)
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if len(w) != game.n or np.any(w <= 0):
        raise ValidationError(f"need {game.n} strictly positive weights")
    sizes = game.actions.sizes
    for i in range(game.n):
        mi, pt = _difference_views(game, psi, i, cap)
        for a, b in itertools.combinations(range(sizes[i]), 2):
            dm = mi[a] - mi[b]
            dp = pt[a] - pt[b]
            if np.max(np.abs(dm - w[i] * dp), initial=0.0) > eps:
                return False
    return True


def check_exact_potential(
    game: Game, psi: GlobalPotential, eps: float = EPS_EQ, cap: int | None = None
) -> bool:
    return check_w_potential(game, psi, np.ones(game.n), eps=eps, cap=cap)


def _sign_dead_zone(values: np.ndarray, eps: float) -> np.ndarray:
    s = np.zeros(values.shape, dtype=np.int8)
    s[values > eps] = 1
    s[values < -eps] = -1
    return s


def check_ordinal_potential(
    game: Game, psi: GlobalPotential, eps: float = EPS_EQ, cap: int | None = None
) -> bool:
    """Signs of unilateral payoff and potential differences agree everywhere."""
    _check_compatible(game, psi)
    sizes = game.actions.sizes
    for i in range(game.n):
        mi, pt = _difference_views(game, psi, i, cap)
        for a, b in itertools.combinations(range(sizes[i]), 2):
            if np.any(
                _sign_dead_zone(mi[a] - mi[b], eps) != _sign_dead_zone(pt[a] - pt[b], eps)
            ):
                return False
    return True


@dataclass(frozen=True)
class TransformWitness:
    """Per player and neighbor configuration, the realized increasing map
    from potential differences to payoff differences.

    ``pairs[i][conf]`` is an ascending tuple of (potential difference, payoff
    difference) pairs; the (0, 0) pair is always present. Configurations are
    mixed-radix indices over the player's open neighborhood (ascending).
    """

    neighborhoods: tuple  # per player, ascending open neighborhood
    sizes: tuple
    pairs: tuple  # pairs[i][conf] = ((dpsi, dm), ...)
    eps: float

    def inverse_difference(self, i: int, conf: int, dm: float) -> float:
        """Potential difference whose payoff difference is dm (within eps)."""
        for dpsi, dmv in self.pairs[i][conf]:
            if abs(dmv - dm) <= self.eps:
                return dpsi
        raise MissingDifferenceError(
            f"player {i}, configuration {conf}: payoff difference {dm!r} "
            "not tabulated in the witness"
        )


def check_transformed_potential(
    game: GraphicalGame, psi: GlobalPotential, eps: float = EPS_EQ, cap: int | None = None
):
    """Witness that psi is a potential up to per-player increasing transforms.

    Returns None unless, for every player and neighbor configuration, (a) the
    potential difference of each own-action pair is constant over non-neighbor
    coordinates, and (b) the realized (potential difference -> payoff
    difference) correspondence is a well-defined strictly increasing map.
    """
    if not isinstance(game, GraphicalGame):
        raise ValidationError("transformed-potential check needs local payoff tables")
    _check_compatible(game, psi)
    sizes = game.actions.sizes
    n = game.n
    check_cap(game.actions.joint_count, cap)
    psi_t = psi.tensor()

    neighborhoods = []
    all_pairs = []
    for i in range(n):
        nbrs = sorted(game.graph.neighbors(i))
        rest = [j for j in range(n) if j != i and j not in nbrs]
        nconf = indexing.total_actions([sizes[j] for j in nbrs])
        perm = [i] + nbrs + rest
        pm = np.transpose(psi_t, perm).reshape(sizes[i], nconf, -1)

        lp = game.local_payoffs[i]
        pos_i = lp.scope.index(i)
        lm = np.moveaxis(
            lp.table.reshape([sizes[j] for j in lp.scope]), pos_i, 0
        ).reshape(sizes[i], nconf)

        raw = [[(0.0, 0.0)] for _ in range(nconf)]
        for a in range(sizes[i]):
            for b in range(sizes[i]):
                if a == b:
                    continue
                dpsi = pm[a] - pm[b]
                spread = dpsi.max(axis=1) - dpsi.min(axis=1)
                if np.max(spread, initial=0.0) > eps:
                    return None  # depends on non-neighbor coordinates
                dm = lm[a] - lm[b]
                for conf in range(nconf):
                    raw[conf].append((float(dpsi[conf, 0]), float(dm[conf])))

        conf_pairs = []
        for conf in range(nconf):
            groups = _group_increasing(raw[conf], eps)
            if groups is None:
                return None
            conf_pairs.append(tuple(groups))
        neighborhoods.append(tuple(nbrs))
        all_pairs.append(tuple(conf_pairs))
    return TransformWitness(
        neighborhoods=tuple(neighborhoods), sizes=sizes, pairs=tuple(all_pairs), eps=eps
    )


def _group_increasing(pairs, eps):
    """Collapse (key, value) pairs into an increasing map, or None.

    Keys within eps of each other count as one key and must carry one value
    (within eps); across distinct keys the values must strictly increase.
    """
    pairs = sorted(pairs)
    groups = []
    for k, v in pairs:
        if groups and k - groups[-1][0][-1] <= eps:
            groups[-1][0].append(k)
            groups[-1][1].append(v)
        else:
            groups.append(([k], [v]))
    out = []
    prev = None
    for ks, vs in groups:
        if max(vs) - min(vs) > eps:
            return None  # same potential difference, different payoff differences
        v = vs[0]
        if prev is not None and v - prev <= eps:
            return None  # not strictly increasing
        out.append((ks[0], v))
        prev = v
    return out


def find_exact_potential(
    game: Game, eps: float = EPS_EQ, cap: int | None = None
) -> GlobalPotential | None:
    """Accumulate unilateral differences along coordinate changes from the
    all-zeros joint action, then validate; None when validation fails.

    When an exact potential exists the construction is forced up to an
    additive constant, so validation failure certifies non-existence.
    """
    sizes = game.actions.sizes
    n = game.n
    check_cap(game.actions.joint_count, cap)
    psi_t = np.zeros(sizes)
    for k in range(n):
        tk = payoff_tensor(game, k, cap)
        head = tk[(slice(None),) * (k + 1) + (0,) * (n - k - 1)]
        base = tk[(slice(None),) * k + (0,) * (n - k)]
        psi_t = psi_t + head.reshape(sizes[: k + 1] + (1,) * (n - k - 1))
        psi_t = psi_t - base.reshape(sizes[:k] + (1,) * (n - k))
    psi = GlobalPotential(actions=game.actions, table=psi_t.reshape(-1))
    if check_exact_potential(game, psi, eps=eps, cap=cap):
        return psi
    return None


def find_w_potential(
    game: Game, w, eps: float = EPS_EQ, cap: int | None = None
) -> GlobalPotential | None:
    """Exact-potential construction applied to payoffs scaled by 1/w_i."""
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if len(w) != game.n or np.any(w <= 0):
        raise ValidationError(f"need {game.n} strictly positive weights")
    scaled = _scale_payoffs(game, 1.0 / w)
    psi = find_exact_potential(scaled, eps=eps, cap=cap)
    if psi is not None and check_w_potential(game, psi, w, eps=eps, cap=cap):
        return psi
    return None


def _scale_payoffs(game: Game, factors) -> Game:
    if isinstance(game, GraphicalGame):
        lps = tuple(
            LocalPayoff(scope=lp.scope, table=lp.table * factors[i])
            for i, lp in enumerate(game.local_payoffs)
        )
        return GraphicalGame(graph=game.graph, actions=game.actions, local_payoffs=lps)
    payoffs = {
        (i, he): LocalPayoff(scope=lp.scope, table=lp.table * factors[i])
        for (i, he), lp in game.clique_payoffs.items()
    }
    return HypergraphicalGame(
        hypergraph=game.hypergraph, actions=game.actions, clique_payoffs=payoffs
    )


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, v):
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def find_ordinal_potential(
    game: Game, eps: float = EPS_EQ, cap: int | None = None
) -> GlobalPotential | None:
    """Level joint actions by longest path in the strict-improvement order.

    Joint actions linked by zero-difference unilateral moves collapse into one
    class; classes are ordered by strict unilateral improvements. If that
    order is acyclic, the longest-path level of each class is an ordinal
    potential; otherwise (or when a strict move joins two collapsed states)
    none exists.
    """
    sizes = game.actions.sizes
    total = game.actions.joint_count
    check_cap(total, cap)
    uf = _UnionFind(total)
    strict = []  # (worse state, better state)
    for i in range(game.n):
        mi = np.moveaxis(payoff_tensor(game, i, cap), i, 0).reshape(sizes[i], -1)
        idx = np.moveaxis(np.arange(total).reshape(sizes), i, 0).reshape(sizes[i], -1)
        for a, b in itertools.combinations(range(sizes[i]), 2):
            dm = mi[a] - mi[b]
            for r in np.nonzero(np.abs(dm) <= eps)[0]:
                uf.union(int(idx[a, r]), int(idx[b, r]))
            for r in np.nonzero(dm > eps)[0]:
                strict.append((int(idx[b, r]), int(idx[a, r])))
            for r in np.nonzero(dm < -eps)[0]:
                strict.append((int(idx[a, r]), int(idx[b, r])))

    succ = {}
    indeg = {}
    roots = sorted({uf.find(v) for v in range(total)})
    for v in roots:
        succ[v] = set()
        indeg[v] = 0
    for lo, hi in strict:
        a, b = uf.find(lo), uf.find(hi)
        if a == b:
            return None  # strict move inside a zero-difference class
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1

    level = {v: 0 for v in roots}
    queue = [v for v in roots if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for u in succ[v]:
            level[u] = max(level[u], level[v] + 1)
            indeg[u] -= 1
            if indeg[u] == 0:
                queue.append(u)
    if done != len(roots):
        return None  # improvement cycle
    table = np.array([float(level[uf.find(v)]) for v in range(total)])
    return GlobalPotential(actions=game.actions, table=table)


def symmetric_hypergraphical_from_potential(
    gp: GibbsPotential, w=None
) -> HypergraphicalGame:
    """Game whose hyperedges are the potential's cliques and in which every
    member of a clique is paid the clique's table.

    The construction itself does not depend on w; any game holding this
    potential as a w-weighted potential is w-scaled payoff-difference
    equivalent to the result, for every positive w. Tables on repeated
    cliques are merged by summing.
    """
    if w is not None:
        w = np.asarray(w, dtype=np.float64).reshape(-1)
        if len(w) != gp.graph.n or np.any(w <= 0):
            raise ValidationError(f"need {gp.graph.n} strictly positive weights")
    merged = {}
    for clique, table in gp.clique_potentials:
        if clique in merged:
            merged[clique] = merged[clique] + table
        else:
            merged[clique] = table
    h = Hypergraph(n=gp.graph.n, hyperedges=tuple(sorted(merged)))
    payoffs = {
        (i, he): LocalPayoff(scope=he, table=merged[he])
        for he in h.hyperedges
        for i in he
    }
    return HypergraphicalGame(hypergraph=h, actions=gp.actions, clique_payoffs=payoffs)


def potential_from_symmetric(hg: HypergraphicalGame) -> GibbsPotential:
    """Read the shared clique tables of a hyperedge-symmetric game as a
    clique-additive potential over the primal graph.

    The result recomposes to an exact potential of the flattened game.
    """
    if not is_hyperedge_symmetric(hg):
        raise NotSymmetricError("players in some hyperedge carry different tables")
    g = primal_graph(hg.hypergraph)
    cps = tuple(
        (he, hg.clique_payoffs[(he[0], he)].table) for he in hg.hypergraph.hyperedges
    )
    return GibbsPotential(graph=g, actions=hg.actions, clique_potentials=cps)


def to_pairwise_polymatrix(gp: GibbsPotential, w=None) -> HypergraphicalGame:
    """Pairwise-symmetric polymatrix game from a potential over a graph with
    totally disconnected neighborhoods (where maximal cliques are edges)."""
    if not has_totally_disconnected_neighborhoods(gp.graph):
        raise NeighborhoodError(
            "graph has adjacent neighbors; no pairwise reduction exists"
        )
    game = symmetric_hypergraphical_from_potential(gp, w)
    assert all(len(he) <= 2 for he in game.hypergraph.hyperedges)
    return game
