"""Undirected interaction graphs and hypergraphs over players 0..n-1.

Both structures are immutable after construction. Edges are stored once as
ordered pairs (i, j) with i < j; hyperedges as ascending tuples. All clique
output is deterministic: each clique ascending, the list sorted
lexicographically, so downstream file output is bit-reproducible.
"""

from dataclasses import dataclass, field

from .errors import ValidationError


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; no self-loops, no parallel edges."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"player count must be positive, got {self.n}")
        norm = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise ValidationError(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValidationError(f"edge {e} out of range for n={self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [set() for _ in range(self.n)]
        for i, j in norm:
            adj[i].add(j)
            adj[j].add(i)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    def neighbors(self, i) -> frozenset:
        """Open neighborhood: adjacent nodes, not including i."""
        return self._adj[i]

    def closed_neighborhood(self, i) -> tuple[int, ...]:
        """N(i) = neighbors plus i itself, ascending."""
        return tuple(sorted(self._adj[i] | {i}))

    def has_edge(self, i, j) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_clique(self, nodes) -> bool:
        nodes = tuple(nodes)
        return all(
            self.has_edge(a, b) for k, a in enumerate(nodes) for b in nodes[k + 1 :]
        )


@dataclass(frozen=True)
class Hypergraph:
    """Node subsets of size >= 1; duplicates are rejected."""

    n: int
    hyperedges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"player count must be positive, got {self.n}")
        norm = []
        seen = set()
        for he in self.hyperedges:
            t = tuple(sorted(set(he)))
            if len(t) != len(tuple(he)):
                raise ValidationError(f"hyperedge {tuple(he)} has repeated nodes")
            if len(t) == 0:
                raise ValidationError("empty hyperedge")
            if any(not 0 <= v < self.n for v in t):
                raise ValidationError(f"hyperedge {t} out of range for n={self.n}")
            if t in seen:
                raise ValidationError(f"duplicate hyperedge {t}")
            seen.add(t)
            norm.append(t)
        object.__setattr__(self, "hyperedges", tuple(sorted(norm)))

    def edges_of(self, i) -> tuple:
        """Hyperedges containing player i, in stored order."""
        return tuple(he for he in self.hyperedges if i in he)


@dataclass(frozen=True)
class CliqueSet:
    cliques: tuple
    maximal: bool


def maximal_cliques(g: Graph) -> CliqueSet:
    """All maximal cliques of g, via Bron-Kerbosch with pivoting.

    Isolated nodes come out as singleton cliques, so the clique list always
    covers every node and every edge.
    """
    adj = [g.neighbors(i) for i in range(g.n)]
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda v: len(adj[v] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(g.n)), set())
    return CliqueSet(cliques=tuple(sorted(out)), maximal=True)


def has_totally_disconnected_neighborhoods(g: Graph) -> bool:
    """True iff no node has two adjacent neighbors (trees, cycles >= 4, grids)."""
    for i in range(g.n):
        nbrs = sorted(g.neighbors(i))
        for k, a in enumerate(nbrs):
            for b in nbrs[k + 1 :]:
                if g.has_edge(a, b):
                    return False
    return True


def primal_graph(h: Hypergraph) -> Graph:
    """Graph on the same nodes with an edge wherever a hyperedge joins two nodes."""
    edges = set()
    for he in h.hyperedges:
        for k, a in enumerate(he):
            for b in he[k + 1 :]:
                edges.add((a, b))
    return Graph(n=h.n, edges=frozenset(edges))
