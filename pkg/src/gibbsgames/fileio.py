"""Versioned JSON file formats.

Three kinds of input files share one envelope: ``kind`` is "graphical" or
"hypergraphical" for games, "gibbs_potential" for clique potentials, "scheme"
for playing schemes. Tables are flat lists in row-major mixed-radix order
over their (ascending) scope, most significant digit = smallest player index.
Floats are emitted with shortest-roundtrip repr, so parse/serialize is exact.
"""

import json

import numpy as np

from .dynamics import PlayingScheme
from .errors import ParseError
from .games import (
    ActionSpace,
    Game,
    GraphicalGame,
    HypergraphicalGame,
    LocalPayoff,
)
from .graphs import Graph, Hypergraph
from .potentials import GibbsPotential

FORMAT_VERSION = 1


def _require(obj, key, where):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _check_envelope(doc, path):
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    version = _require(doc, "format_version", path)
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format_version {version}")
    return _require(doc, "kind", path)


def _actions(doc, path) -> ActionSpace:
    return ActionSpace(sizes=tuple(_require(doc, "actions", path)))


def _payoff_map(doc, path):
    entries = {}
    for entry in _require(doc, "payoffs", path):
        player = _require(entry, "player", f"{path} payoff entry")
        scope = tuple(_require(entry, "scope", f"{path} payoff entry"))
        if list(scope) != sorted(scope):
            raise ParseError(
                f"{path}: payoff scope {list(scope)} of player {player} must be ascending"
            )
        key = (int(player), scope)
        if key in entries:
            raise ParseError(f"{path}: duplicate payoff entry for {key}")
        entries[key] = _require(entry, "table", f"{path} payoff entry")
    return entries


def game_from_dict(doc, path="<game>") -> Game:
    kind = _check_envelope(doc, path)
    n = int(_require(doc, "n", path))
    actions = _actions(doc, path)
    if actions.n != n:
        raise ParseError(f"{path}: n={n} but {actions.n} action counts")
    entries = _payoff_map(doc, path)

    if kind == "graphical":
        graph = Graph(
            n=n, edges=frozenset(tuple(e) for e in _require(doc, "edges", path))
        )
        locals_ = []
        for i in range(n):
            scope = graph.closed_neighborhood(i)
            if (i, scope) not in entries:
                raise ParseError(
                    f"{path}: missing payoff table for player {i}, scope {list(scope)}"
                )
            locals_.append(LocalPayoff(scope=scope, table=entries.pop((i, scope))))
        if entries:
            (i, scope) = next(iter(entries))
            raise ParseError(
                f"{path}: unexpected payoff table for player {i}, scope {list(scope)}"
            )
        return GraphicalGame(graph=graph, actions=actions, local_payoffs=tuple(locals_))

    if kind == "hypergraphical":
        hyper = Hypergraph(
            n=n, hyperedges=tuple(tuple(h) for h in _require(doc, "hyperedges", path))
        )
        payoffs = {}
        for he in hyper.hyperedges:
            for i in he:
                if (i, he) not in entries:
                    raise ParseError(
                        f"{path}: missing payoff table for player {i}, scope {list(he)}"
                    )
                payoffs[(i, he)] = LocalPayoff(scope=he, table=entries.pop((i, he)))
        if entries:
            (i, scope) = next(iter(entries))
            raise ParseError(
                f"{path}: unexpected payoff table for player {i}, scope {list(scope)}"
            )
        return HypergraphicalGame(
            hypergraph=hyper, actions=actions, clique_payoffs=payoffs
        )

    raise ParseError(f"{path}: {kind!r} is not a game file kind")


def game_to_dict(game: Game) -> dict:
    if isinstance(game, GraphicalGame):
        return {
            "format_version": FORMAT_VERSION,
            "kind": "graphical",
            "n": game.n,
            "actions": list(game.actions.sizes),
            "edges": [list(e) for e in sorted(game.graph.edges)],
            "payoffs": [
                {
                    "player": i,
                    "scope": list(lp.scope),
                    "table": lp.table.tolist(),
                }
                for i, lp in enumerate(game.local_payoffs)
            ],
        }
    return {
        "format_version": FORMAT_VERSION,
        "kind": "hypergraphical",
        "n": game.n,
        "actions": list(game.actions.sizes),
        "hyperedges": [list(h) for h in game.hypergraph.hyperedges],
        "payoffs": [
            {"player": i, "scope": list(he), "table": lp.table.tolist()}
            for (i, he), lp in sorted(game.clique_payoffs.items())
        ],
    }


def potential_from_dict(doc, path="<potential>") -> tuple[GibbsPotential, float]:
    kind = _check_envelope(doc, path)
    if kind != "gibbs_potential":
        raise ParseError(f"{path}: {kind!r} is not a potential file kind")
    n = int(_require(doc, "n", path))
    actions = _actions(doc, path)
    graph = Graph(n=n, edges=frozenset(tuple(e) for e in _require(doc, "edges", path)))
    cliques = []
    for entry in _require(doc, "cliques", path):
        scope = tuple(_require(entry, "scope", f"{path} clique entry"))
        cliques.append((scope, np.asarray(_require(entry, "table", f"{path} clique entry"))))
    gp = GibbsPotential(graph=graph, actions=actions, clique_potentials=tuple(cliques))
    return gp, float(doc.get("constant", 0.0))


def potential_to_dict(gp: GibbsPotential, constant: float = 0.0) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "gibbs_potential",
        "n": gp.graph.n,
        "actions": list(gp.actions.sizes),
        "edges": [list(e) for e in sorted(gp.graph.edges)],
        "cliques": [
            {"scope": list(c), "table": t.tolist()} for c, t in gp.clique_potentials
        ],
        "constant": constant,
    }


def scheme_from_dict(doc, path="<scheme>") -> PlayingScheme:
    kind = _check_envelope(doc, path)
    if kind != "scheme":
        raise ParseError(f"{path}: {kind!r} is not a scheme file kind")
    n = int(_require(doc, "n", path))
    actions = _actions(doc, path)
    graph = Graph(n=n, edges=frozenset(tuple(e) for e in _require(doc, "edges", path)))
    tables = _require(doc, "tables", path)
    if len(tables) != n:
        raise ParseError(f"{path}: need one conditional table per player")
    return PlayingScheme(
        graph=graph,
        actions=actions,
        tables=tuple(np.asarray(t, dtype=np.float64) for t in tables),
    )


def scheme_to_dict(scheme: PlayingScheme) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "scheme",
        "n": scheme.n,
        "actions": list(scheme.actions.sizes),
        "edges": [list(e) for e in sorted(scheme.graph.edges)],
        "tables": [t.reshape(-1).tolist() for t in scheme.tables],
    }


def load_document(path):
    """Parse any input file; returns (kind, parsed value)."""
    doc = _load_json(path)
    kind = _check_envelope(doc, path)
    if kind in ("graphical", "hypergraphical"):
        return kind, game_from_dict(doc, path)
    if kind == "gibbs_potential":
        return kind, potential_from_dict(doc, path)
    if kind == "scheme":
        return kind, scheme_from_dict(doc, path)
    raise ParseError(f"{path}: unknown kind {kind!r}")


def dump_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, stable float reprs."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
