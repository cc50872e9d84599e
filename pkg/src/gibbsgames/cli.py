"""Command-line entry points.

Four batch subcommands tie the analyses together: ``analyze`` (potential
checks, decomposition, equilibria), ``simulate`` (sequential play plus the
exact stationary law when feasible), ``consistency`` (scan-order invariance
and potential recovery), ``construct`` (game files from potential files).
Reports are canonical JSON; with fixed seeds repeated runs are byte-identical
except for the provenance timestamp. Exit codes: 0 success, 1 usage, 2
parse/validation, 3 violated precondition, 4 resource cap.
"""

import argparse
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, fileio
from .config import (
    DEFAULT_KERNEL_CAP,
    EPS_EQ,
    TOL_COND,
    TOL_TV,
    joint_action_cap,
)
from .dynamics import (
    BACKEND,
    consistency_check,
    empirical_distribution,
    play,
    round_kernel,
    sbr_scheme,
    stationary,
    tv_distance,
)
from .equilibria import enumerate_pne, potential_maximizers
from .errors import (
    CapExceededError,
    GibbsGamesError,
    NotGibbsError,
    ValidationError,
)
from .games import GraphicalGame, flatten
from .potentials import (
    GlobalPotential,
    check_transformed_potential,
    decompose,
    find_exact_potential,
    find_ordinal_potential,
    find_w_potential,
    symmetric_hypergraphical_from_potential,
    to_pairwise_polymatrix,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _provenance(seed, eps):
    return {
        "tool": "gibbsgames",
        "version": __version__,
        "kernel_backend": BACKEND,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "tolerances": {
            "equivalence": eps,
            "stationary_tv": TOL_TV,
            "conditional_match": TOL_COND,
        },
        "joint_action_cap": joint_action_cap(),
        "kernel_cap": DEFAULT_KERNEL_CAP,
    }


def _parse_weights(raw, n):
    if raw is None:
        return None
    parts = raw.split(",")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ValidationError(f"--weights: {exc}") from exc
    if len(values) == 1:
        values = values * n
    if len(values) != n:
        raise ValidationError(f"--weights: expected {n} values, got {len(values)}")
    if any(v <= 0 for v in values):
        raise ValidationError("--weights: all weights must be > 0")
    return values


def _parse_init(raw, actions):
    if raw is None:
        return (0,) * actions.n
    try:
        x0 = tuple(int(p) for p in raw.split(","))
    except ValueError as exc:
        raise ValidationError(f"--init: {exc}") from exc
    return actions.validate_joint_action(x0)


def _graphical(game) -> GraphicalGame:
    return game if isinstance(game, GraphicalGame) else flatten(game)


def _load_game(path):
    kind, value = fileio.load_document(path)
    if kind not in ("graphical", "hypergraphical"):
        raise ValidationError(f"{path}: expected a game file, got kind {kind!r}")
    return value


def _write(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _witness_to_json(witness):
    return {
        "neighborhoods": [list(nb) for nb in witness.neighborhoods],
        "pairs": [
            [[[dpsi, dm] for dpsi, dm in conf] for conf in player]
            for player in witness.pairs
        ],
    }


def _decomposition_section(psi, graph, eps):
    try:
        dec = decompose(psi, graph, eps=eps)
    except NotGibbsError as exc:
        return {
            "ok": False,
            "error": str(exc),
            "witness": list(exc.witness),
            "max_residual": exc.residual,
            "tolerance": eps,
        }
    return {
        "ok": True,
        "cliques": [list(c) for c in dec.gibbs.cliques],
        "tables": [t.tolist() for _, t in dec.gibbs.clique_potentials],
        "constant": dec.constant,
        "max_residual": dec.max_residual,
        "tolerance": eps,
    }


def cmd_analyze(args) -> int:
    game = _load_game(args.game_file)
    eps = args.tolerance
    weights = _parse_weights(args.weights, game.n)
    gg = _graphical(game)

    psi_exact = find_exact_potential(game, eps=eps)
    potential = {
        "exact": {
            "found": psi_exact is not None,
            "table": None if psi_exact is None else psi_exact.table.tolist(),
            "tolerance": eps,
        }
    }
    psi_w = None
    if weights is not None:
        psi_w = find_w_potential(game, weights, eps=eps)
        potential["weighted"] = {
            "weights": weights,
            "found": psi_w is not None,
            "table": None if psi_w is None else psi_w.table.tolist(),
            "tolerance": eps,
        }
    else:
        potential["weighted"] = None

    if psi_exact is not None:
        psi_ordinal, ordinal_source = psi_exact, "exact"
    else:
        psi_ordinal, ordinal_source = find_ordinal_potential(game, eps=eps), "leveling"
    potential["ordinal"] = {
        "found": psi_ordinal is not None,
        "source": ordinal_source if psi_ordinal is not None else None,
        "table": None if psi_ordinal is None else psi_ordinal.table.tolist(),
        "tolerance": eps,
    }

    candidate = psi_exact or psi_w or psi_ordinal
    witness = (
        None if candidate is None else check_transformed_potential(gg, candidate, eps=eps)
    )
    potential["transformed"] = {
        "found": witness is not None,
        "witness": None if witness is None else _witness_to_json(witness),
        "tolerance": eps,
    }

    decomposition = (
        None if candidate is None else _decomposition_section(candidate, gg.graph, eps)
    )

    equilibria = {
        "pure_nash": [list(x) for x in enumerate_pne(game, eps=eps)],
        "potential_maximizers": None
        if candidate is None
        else [list(x) for x in potential_maximizers(candidate, eps=eps)],
        "tolerance": eps,
    }

    report = {
        "format_version": fileio.FORMAT_VERSION,
        "command": "analyze",
        "provenance": _provenance(None, eps),
        "potential": potential,
        "decomposition": decomposition,
        "dynamics": None,
        "equilibria": equilibria,
    }
    _write(fileio.dump_canonical(report), args.out)
    return 0


def cmd_simulate(args) -> int:
    if args.rounds < 1:
        raise _UsageError(f"--rounds must be >= 1, got {args.rounds}")
    game = _load_game(args.game_file)
    eps = args.tolerance
    weights = _parse_weights(args.weights, game.n) or [1.0] * game.n
    gg = _graphical(game)
    x0 = _parse_init(args.init, gg.actions)

    scheme = sbr_scheme(gg, weights)
    trace = play(scheme, x0, args.rounds, args.seed)
    emp = empirical_distribution(trace)

    dynamics = {
        "weights": weights,
        "rounds": args.rounds,
        "seed": args.seed,
        "init": list(x0),
        "empirical": emp.probs.tolist(),
    }
    if gg.actions.joint_count <= DEFAULT_KERNEL_CAP:
        pi = stationary(round_kernel(scheme))
        dynamics["stationary"] = pi.tolist()
        dynamics["tv_empirical_vs_stationary"] = tv_distance(emp.probs, pi)
    else:
        dynamics["stationary"] = None
        dynamics["tv_empirical_vs_stationary"] = None

    lines = [" ".join(str(a) for a in row) for row in trace.outcomes.tolist()]
    with open(args.trace, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    dynamics["trace_file"] = args.trace

    report = {
        "format_version": fileio.FORMAT_VERSION,
        "command": "simulate",
        "provenance": _provenance(args.seed, eps),
        "potential": None,
        "decomposition": None,
        "dynamics": dynamics,
        "equilibria": None,
    }
    _write(fileio.dump_canonical(report), args.out)
    return 0


def cmd_consistency(args) -> int:
    kind, value = fileio.load_document(args.input_file)
    eps = args.tolerance
    if kind == "scheme":
        scheme = value
        weights = None
    elif kind in ("graphical", "hypergraphical"):
        gg = _graphical(value)
        weights = _parse_weights(args.weights, gg.n) or [1.0] * gg.n
        scheme = sbr_scheme(gg, weights)
    else:
        raise ValidationError(
            f"{args.input_file}: expected a game or scheme file, got {kind!r}"
        )

    report_cc = consistency_check(scheme)
    dynamics = {
        "weights": weights,
        "consistent": report_cc.consistent,
        "orders": [list(o) for o in report_cc.orders],
        "stationaries": [p.tolist() for p in report_cc.stationaries],
        "max_tv": report_cc.max_tv,
        "tv_witness": None
        if report_cc.tv_witness is None
        else {
            "order_a": list(report_cc.tv_witness[0]),
            "order_b": list(report_cc.tv_witness[1]),
            "joint_action": list(report_cc.tv_witness[2]),
        },
        "max_conditional_mismatch": report_cc.max_conditional_mismatch,
        "conditional_witness": None
        if report_cc.conditional_witness is None
        else {
            "player": report_cc.conditional_witness[0],
            "neighbor_configuration": list(report_cc.conditional_witness[1]),
        },
        "tol_tv": report_cc.tol_tv,
        "tol_cond": report_cc.tol_cond,
    }

    decomposition = None
    if report_cc.consistent:
        psi_hat = np.log(report_cc.stationaries[0])
        decomposition = _decomposition_section(
            GlobalPotential(actions=scheme.actions, table=psi_hat), scheme.graph, eps
        )

    report = {
        "format_version": fileio.FORMAT_VERSION,
        "command": "consistency",
        "provenance": _provenance(None, eps),
        "potential": None,
        "decomposition": decomposition,
        "dynamics": dynamics,
        "equilibria": None,
    }
    _write(fileio.dump_canonical(report), args.out)
    return 0


def cmd_construct(args) -> int:
    kind, value = fileio.load_document(args.potential_file)
    if kind != "gibbs_potential":
        raise ValidationError(
            f"{args.potential_file}: expected a potential file, got {kind!r}"
        )
    gp, _constant = value
    weights = _parse_weights(args.weights, gp.graph.n)
    if args.pairwise:
        game = to_pairwise_polymatrix(gp, weights)
    else:
        game = symmetric_hypergraphical_from_potential(gp, weights)
    _write(fileio.dump_canonical(fileio.game_to_dict(game)), args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbsgames", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="potential checks, decomposition, equilibria")
    p.add_argument("game_file")
    p.add_argument("--weights", default=None, help="comma-separated positive weights")
    p.add_argument("--tolerance", type=float, default=EPS_EQ)
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="sequential play and empirical distribution")
    p.add_argument("game_file")
    p.add_argument("--weights", default=None)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", default=None, help="comma-separated joint action")
    p.add_argument("--trace", default="trace.txt", help="trace output path")
    p.add_argument("--tolerance", type=float, default=EPS_EQ)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("consistency", help="scan-order invariance and recovery")
    p.add_argument("input_file", help="game file or scheme file")
    p.add_argument("--weights", default=None)
    p.add_argument("--tolerance", type=float, default=EPS_EQ)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("construct", help="game file from a potential file")
    p.add_argument("potential_file")
    p.add_argument("--weights", default=None)
    p.add_argument("--pairwise", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_construct)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except CapExceededError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return exc.exit_code
    except GibbsGamesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def entry() -> None:
    sys.exit(main())
