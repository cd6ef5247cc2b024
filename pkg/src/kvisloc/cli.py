"""Command-line entry point: ``kvisloc VERB ...``.

Exit codes: 0 cop win (or plain success), 1 robber win / not cleared,
2 invalid input or capacity refusal (error JSON on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from .bounds import bound_report, square_grid_side
from .errors import CapacityError, KVisError, ParameterError, StructuralError
from .game import GameConfig, Mode, ScheduleStrategy, Strategy, exact_number, solve_game, verify_strategy
from .graph import FAMILIES, Graph, from_edgelist, from_json, gen_graph, from_networkx, to_dot, to_edgelist, to_json
from .grid import (
    ZeroVisibilitySweep,
    coord,
    grid_endgame_strategy,
    grid_prox_strategy,
    grid_zeta_bracket,
    simulate_infection,
)
from .trees import (
    lower_bound_tree,
    spider_strategy,
    subdivide_for_prox1,
    subdivide_for_zeta1,
    tree_path_guard_strategy,
    tree_prox_plus_one_strategy,
    tree_radius_strategy,
    tree_zero_visibility_strategy,
)

TABLE_COLUMNS = ("n", "k", "m", "lower", "upper", "h", "sim_rounds", "published_value")
GAMES = {"loc": Mode.LOCALIZATION, "prox": Mode.PROXIMITY}
STRATEGIES = (
    "grid-prox",
    "grid-endgame",
    "tree-radius",
    "tree-path-guard",
    "tree-zero-vis",
    "spider",
    "prox-plus-one",
    "subdivision-schedule",
)
GEN_FAMILIES = FAMILIES + ("random_tree", "lower_bound_tree")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


# ---------------------------------------------------------------- helpers


def _read_graph(path: str) -> Graph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise StructuralError(f"cannot read {path}: {exc.strerror}") from None
    if path.endswith((".txt", ".edges", ".edgelist")):
        return from_edgelist(text)
    return from_json(text)


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _grid_side(g: Graph) -> int:
    side = square_grid_side(g)
    if side is None:
        raise ParameterError("strategy needs a square grid graph with coordinate labels")
    return side


def build_strategy(name: str, g: Graph, k: int, cops: Optional[int]) -> tuple[Strategy, Graph]:
    """Instantiate a registered strategy; returns it with the graph it plays on.

    ``subdivision-schedule`` reads ``g`` as the base tree and plays on its
    subdivision.
    """
    if name == "grid-prox":
        return grid_prox_strategy(_grid_side(g), k, cops), g
    if name == "grid-endgame":
        return grid_endgame_strategy(_grid_side(g), k, cops), g
    if name == "tree-radius":
        return tree_radius_strategy(g, k), g
    if name == "tree-path-guard":
        return tree_path_guard_strategy(g, k, cops), g
    if name == "tree-zero-vis":
        return tree_zero_visibility_strategy(g, k), g
    if name == "spider":
        return spider_strategy(g, k), g
    if name == "prox-plus-one":
        if not g.is_tree:
            raise StructuralError("prox-plus-one needs a tree")
        p = exact_number(g, k, Mode.PROXIMITY)
        res = solve_game(g, GameConfig(k, p, Mode.PROXIMITY))
        inner = ScheduleStrategy(g, k, res.schedule, cops=p)
        return tree_prox_plus_one_strategy(g, k, inner), g
    if name == "subdivision-schedule":
        sub = subdivide_for_prox1(g, k)
        return sub.schedule, sub.graph
    raise ParameterError(f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")


def _sweep_probes(n: int) -> Callable[[int], list]:
    s = ZeroVisibilitySweep(n)
    state = [s.initial_state()]

    def probe_at(t):
        P = s.probes(state[0])
        state[0] = s.update(state[0], P, (), 0)
        return [coord(v, n) for v in P]

    return probe_at


def _simulate(n: int, k: int, h: Optional[int], max_rounds: Optional[int], keep_frames: bool = False):
    if k == 0:
        cops = n + 1 if h is None else h
        if cops < n + 1:
            raise ParameterError(f"the k = 0 sweep uses n + 1 = {n + 1} cops")
        return simulate_infection(n, 0, _sweep_probes(n), max_rounds or n * (n + 1) + 1, keep_frames=keep_frames), cops
    s = grid_prox_strategy(n, k, h)
    return simulate_infection(n, k, s, max_rounds or s.round_bound(), keep_frames=keep_frames), s.h


def table_rows(k: int, n_min: int, n_max: int, max_rounds: Optional[int] = None) -> list[dict]:
    if n_min < 1 or n_max < n_min:
        raise ParameterError("need 1 <= n-min <= n-max")
    rows = []
    for n in range(n_min, n_max + 1):
        b = grid_zeta_bracket(n, k)
        res, h = _simulate(n, k, None, max_rounds)
        rows.append({
            "n": n,
            "k": k,
            "m": 2 * k * k + 2 * k + 1,
            "lower": b.lower,
            "upper": b.upper,
            "h": h,
            "sim_rounds": res.rounds if res.cleared else -1,
            "published_value": b.published,
        })
    return rows


# ---------------------------------------------------------------- verbs


def cmd_gen(a) -> int:
    p = a.params
    if a.family == "random_tree":
        import networkx as nx

        if len(p) != 1 or p[0] < 1:
            raise ParameterError("random_tree takes one positive vertex count")
        if a.seed is None:
            raise ParameterError("random_tree needs --seed")
        g = from_networkx(nx.random_labeled_tree(p[0], seed=random.Random(a.seed).randrange(2**31)))
    elif a.family == "lower_bound_tree":
        if len(p) != 3:
            raise ParameterError("lower_bound_tree takes h q k")
        g = lower_bound_tree(*p).graph
    else:
        g = gen_graph(a.family, *p)
    if a.subdivide:
        if a.k is None:
            raise ParameterError("--subdivide needs --k")
        g = subdivide_for_prox1(g, a.k).graph if a.subdivide == "prox1" else subdivide_for_zeta1(g, a.k).graph
    _emit(to_json(g) + "\n", a.output)
    return 0


def cmd_solve(a) -> int:
    g = _read_graph(a.graph)
    res = solve_game(g, GameConfig(a.k, a.cops, GAMES[a.game]), max_n=a.max_n, extract=a.witness)
    out = res.to_json()
    if not a.witness:
        out.pop("witness")
    _emit(_dump(out), a.output)
    return 0 if res.cop_win else 1


def cmd_exact(a) -> int:
    g = _read_graph(a.graph)
    _emit(f"{exact_number(g, a.k, GAMES[a.game], max_n=a.max_n)}\n", a.output)
    return 0


def cmd_bounds(a) -> int:
    g = _read_graph(a.graph)
    zeta = prox = None
    if a.exact:
        zeta = exact_number(g, a.k, Mode.LOCALIZATION)
        prox = exact_number(g, a.k, Mode.PROXIMITY)
    rep = bound_report(g, a.k, prox=prox, zeta=zeta)
    out = rep.to_json()
    if a.exact:
        out["exact"] = {"zeta": zeta, "prox": prox}
    _emit(_dump(out), a.output)
    return 0


def cmd_simulate(a) -> int:
    res, h = _simulate(a.grid, a.k, a.cops, a.max_rounds, keep_frames=bool(a.figures))
    out = {"n": a.grid, "k": a.k, "cops": h, "cleared": res.cleared, "rounds": res.rounds,
           "max_survivors": max(res.sizes, default=0)}
    if a.figures:
        from .plotting import infection_figure

        fig = infection_figure(a.grid, a.k, res.frames, Path(a.figures) / f"infection_n{a.grid}_k{a.k}.svg")
        out["figures"] = [fig.name]
    _emit(_dump(out), a.output)
    return 0 if res.cleared else 1


def cmd_verify(a) -> int:
    g = _read_graph(a.graph)
    s, board = build_strategy(a.strategy, g, a.k, a.cops)
    m = a.cops if a.cops is not None else s.cops
    cfg = GameConfig(a.k, m, Mode.parse(s.mode), round_bound=a.max_rounds)
    res = verify_strategy(board, cfg, s)
    out = res.to_json()
    out.update({"strategy": a.strategy, "k": a.k, "cops": m, "game": cfg.mode.value, "n": board.n})
    if not a.witness:
        out.pop("witness")
    _emit(_dump(out), a.output)
    return 0 if res.captured else 1


def cmd_table(a) -> int:
    if not a.grid:
        raise ParameterError("only the grid table is available (pass --grid)")
    rows = table_rows(a.k, a.n_min, a.n_max, a.max_rounds)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), a.output)
    if a.figures:
        from .plotting import bracket_figure, tiling_figure

        d = Path(a.figures)
        bracket_figure(rows, d / f"bracket_k{a.k}.svg")
        if a.k >= 1:
            tiling_figure(a.k, a.n_min, d / f"tiling_k{a.k}_n{a.n_min}.svg")
    return 0


def cmd_export(a) -> int:
    g = _read_graph(a.graph)
    fmt = {"json": lambda x: to_json(x) + "\n", "edgelist": to_edgelist, "dot": to_dot}.get(a.format)
    if fmt is None:
        raise ParameterError(f"unknown format {a.format!r}")
    _emit(fmt(g), a.output)
    return 0


# ---------------------------------------------------------------- parser


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kvisloc", description="Limited-visibility localization and proximity games.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, graph=True):
        if graph:
            sp.add_argument("graph", help="graph file (JSON, or edge list for .txt/.edges), '-' for stdin")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("gen", help="generate a graph")
    sp.add_argument("--family", required=True, choices=GEN_FAMILIES)
    sp.add_argument("params", nargs="*", type=_nonneg, help="family parameters (spider: leg lengths)")
    sp.add_argument("--seed", type=int, help="seed for random_tree")
    sp.add_argument("--subdivide", choices=("prox1", "zeta1"), help="replace the tree by its subdivision")
    sp.add_argument("--k", type=_nonneg)
    common(sp, graph=False)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="decide the game for a fixed cop count")
    common(sp)
    sp.add_argument("--game", choices=GAMES, required=True)
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--cops", type=_positive, required=True)
    sp.add_argument("--max-n", type=_positive, help="override the exact-solver size limit")
    sp.add_argument("--witness", action="store_true", help="include the winning policy")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("exact", help="least number of cops that wins")
    common(sp)
    sp.add_argument("--game", choices=GAMES, required=True)
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--max-n", type=_positive)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("bounds", help="report every applicable bound")
    common(sp)
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--exact", action="store_true", help="also solve both games exactly")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("simulate", help="run the grid sweep and report whether it clears")
    sp.add_argument("--grid", type=_positive, required=True, metavar="N")
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--cops", type=_positive, help="default: the sufficient count")
    sp.add_argument("--max-rounds", type=_positive)
    sp.add_argument("--figures", metavar="DIR", help="write SVG snapshots here")
    common(sp, graph=False)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="check a named strategy against every robber")
    common(sp)
    sp.add_argument("--strategy", choices=STRATEGIES, required=True)
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--cops", type=_positive)
    sp.add_argument("--max-rounds", type=_positive, default=1000)
    sp.add_argument("--witness", action="store_true", help="include the longest play found")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser(
        "table",
        help="grid bracket table as CSV",
        description="CSV columns: " + ", ".join(TABLE_COLUMNS) + ". sim_rounds is -1 when the "
        "simulation does not clear; published_value is the published closed form for comparison.",
    )
    sp.add_argument("--grid", action="store_true", required=True)
    sp.add_argument("--k", type=_nonneg, required=True)
    sp.add_argument("--n-min", type=_positive, required=True)
    sp.add_argument("--n-max", type=_positive, required=True)
    sp.add_argument("--format", choices=("csv",), default="csv")
    sp.add_argument("--max-rounds", type=_positive)
    sp.add_argument("--figures", metavar="DIR", help="write SVG figures here alongside the CSV")
    common(sp, graph=False)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("export", help="re-serialise a graph")
    common(sp)
    sp.add_argument("--format", required=True, help="json, edgelist or dot")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except KVisError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return 2
    except RecursionError:
        err = CapacityError("recursion limit reached")
        sys.stderr.write(json.dumps(err.to_json(), sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
