"""Graph parameters behind the general bounds, and the bound report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, ParameterError
from .graph import Graph, Metrics, bits, graph_metrics, popcount

ISO_LIMIT = 20
DOM_LIMIT = 24


def square_grid_side(g: Graph) -> Optional[int]:
    """Side length if ``g`` carries the labels and edges of ``grid(n)``."""
    if not g.labels:
        return None
    side = math.isqrt(g.n)
    if side * side != g.n or set(g.labels) != {(x, y) for x in range(1, side + 1) for y in range(1, side + 1)}:
        return None
    if len(g.edges) != 2 * side * (side - 1):
        return None
    for a, b in g.edges:
        (x1, y1), (x2, y2) = g.labels[a], g.labels[b]
        if abs(x1 - x2) + abs(y1 - y2) != 1:
            return None
    return side


def ball_max(g: Graph, k: int) -> int:
    """Largest closed k-ball."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    side = square_grid_side(g)
    if side is not None and g.n > 400:
        c = (side + 1) // 2
        return sum(
            max(0, min(side, c + k - abs(dx)) - max(1, c - k + abs(dx)) + 1)
            for dx in range(-k, k + 1)
            if 1 <= c + dx <= side
        )
    return max((popcount(b) for b in g.dm.balls(k)), default=0)


def _popcount32(a: np.ndarray) -> np.ndarray:
    a = a - ((a >> 1) & 0x55555555)
    a = (a & 0x33333333) + ((a >> 2) & 0x33333333)
    a = (a + (a >> 4)) & 0x0F0F0F0F
    return (a * 0x01010101 & 0xFFFFFFFF) >> 24


@dataclass
class Isoperimetry:
    table: list[int]  # table[s] = min border over sets of size s; empty if closed form
    value: int
    method: str


def vertex_isoperimetric(g: Graph, s: Optional[int] = None, *, max_n: int = ISO_LIMIT):
    """Minimum border ``|N(S)|`` over ``|S| = s``; with ``s=None`` the table and max.

    Exact by enumerating all subsets (vectorised).  The square grid uses the
    cited closed form ``n`` for its maximum when it is too large to enumerate.
    """
    n = g.n
    if n > max_n:
        side = square_grid_side(g)
        if side is not None and s is None:
            return Isoperimetry([], side, "closed form (square grid)")
        raise CapacityError(f"exact isoperimetry limited to n <= {max_n}", max_n)
    if s is not None and not 0 <= s <= n:
        raise ParameterError(f"volume s must be in [0, {n}]")
    size = 1 << n
    spread = np.zeros(size, dtype=np.int64)
    for i, nb in enumerate(g.closed_nbr):
        half = 1 << i
        spread[half:2 * half] = spread[:half] | nb
    idx = np.arange(size, dtype=np.int64)
    border = _popcount32(spread & ~idx)
    card = _popcount32(idx)
    table = [0] * (n + 1)
    order = np.argsort(card, kind="stable")
    sc, sb = card[order], border[order]
    starts = np.searchsorted(sc, np.arange(n + 2))
    for t in range(n + 1):
        table[t] = int(sb[starts[t]:starts[t + 1]].min())
    if s is not None:
        return table[s]
    return Isoperimetry(table, max(table), "exhaustive")


def j_domination(g: Graph, j: int, *, max_n: int = DOM_LIMIT) -> int:
    """Size of a smallest set within distance ``j`` of every vertex."""
    if j < 0:
        raise ParameterError("j must be non-negative")
    if g.n > max_n:
        raise CapacityError(f"exact domination limited to n <= {max_n}", max_n)
    if g.n == 0:
        return 0
    balls = g.dm.balls(j)
    full = g.full
    # greedy seed
    best = 0
    covered = 0
    while covered != full:
        v = max(range(g.n), key=lambda u: popcount(balls[u] & ~covered))
        covered |= balls[v]
        best += 1
    maxball = max(popcount(b) for b in balls)

    def search(covered: int, used: int) -> None:
        nonlocal best
        if covered == full:
            best = min(best, used)
            return
        left = popcount(full & ~covered)
        if used + -(-left // maxball) >= best:
            return
        v = (full & ~covered & -(full & ~covered)).bit_length() - 1
        # some chosen vertex must cover v
        for u in sorted(bits(balls[v]), key=lambda w: -popcount(balls[w] & ~covered)):
            search(covered | balls[u], used + 1)

    search(0, 0)
    return best


# ---------------------------------------------------------------- report


@dataclass
class BoundRecord:
    theorem: str
    kind: str  # "lower" | "upper"
    game: str  # "zeta" | "prox"
    value: Optional[int]
    applicable: bool
    reason: str

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "kind": self.kind,
            "game": self.game,
            "value": self.value,
            "applicable": self.applicable,
            "reason": self.reason,
        }


@dataclass
class BoundReport:
    k: int
    n: int
    ball_max: int
    iso_table: list[int]
    iso_max: Optional[int]
    gamma: dict[int, int]
    girth: float
    radius: int
    is_tree: bool
    records: list[BoundRecord] = field(default_factory=list)

    def applicable(self, game: str, kind: str) -> list[BoundRecord]:
        return [r for r in self.records if r.applicable and r.game == game and r.kind == kind]

    def best(self, game: str, kind: str) -> Optional[int]:
        vals = [r.value for r in self.applicable(game, kind)]
        if not vals:
            return None
        return max(vals) if kind == "lower" else min(vals)

    def violations(self, zeta: Optional[int] = None, prox: Optional[int] = None) -> list[BoundRecord]:
        out = []
        for r in self.records:
            if not r.applicable:
                continue
            val = zeta if r.game == "zeta" else prox
            if val is None:
                continue
            if (r.kind == "lower" and val < r.value) or (r.kind == "upper" and val > r.value):
                out.append(r)
        return out

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "ball_max": self.ball_max,
            "isoperimetric": {"table": self.iso_table, "max": self.iso_max},
            "gamma": {str(j): v for j, v in sorted(self.gamma.items())},
            "girth": None if math.isinf(self.girth) else int(self.girth),
            "radius": self.radius,
            "bounds": [r.to_json() for r in self.records],
        }


def bound_report(g: Graph, k: int, *, prox: Optional[int] = None, zeta: Optional[int] = None,
                 max_j: Optional[int] = None) -> BoundReport:
    """Collect every bound that applies to ``g`` at visibility ``k``.

    ``prox`` / ``zeta`` may be supplied (e.g. from the exact solver) to
    instantiate the bounds that relate the two games.
    """
    if k < 0:
        raise ParameterError("k must be non-negative")
    side = square_grid_side(g)
    if side is not None and g.n > 400:
        met = Metrics(radius=2 * (side // 2), center=(), girth=4, max_degree=4, diameter=2 * side - 2)
    else:
        met = graph_metrics(g)
    dk = ball_max(g, k)
    recs: list[BoundRecord] = []

    def add(theorem, kind, game, value, ok, reason):
        recs.append(BoundRecord(theorem, kind, game, value if ok else None, ok, reason))

    recs.append(BoundRecord("trivial", "lower", "zeta", 1, True, "at least one cop"))
    recs.append(BoundRecord("trivial", "lower", "prox", 1, True, "at least one cop"))

    # isoperimetric lower bound: prox > Phi_V / Delta_k
    try:
        iso = vertex_isoperimetric(g)
    except CapacityError as e:
        iso = None
        add("isoperimetric", "lower", "prox", None, False, str(e))
    if iso is not None:
        v = iso.value // dk + 1
        add("isoperimetric", "lower", "prox", v, True,
            f"prox_k > Phi_V/Delta_k = {iso.value}/{dk} ({iso.method})")
        if k >= 1:
            add("isoperimetric", "lower", "zeta", v, True, "zeta_k >= prox_k for k >= 1")
        else:
            add("isoperimetric", "lower", "zeta", None, False, "zeta_k >= prox_k needs k >= 1")

    # sandwich between the games
    if k >= 1:
        if prox is not None:
            add("visibility-sandwich", "lower", "zeta", prox, True, "zeta_k >= prox_k")
            add("visibility-sandwich", "upper", "zeta", dk * prox, True, f"zeta_k <= Delta_k * prox_k = {dk}*{prox}")
        else:
            add("visibility-sandwich", "upper", "zeta", None, False, "needs prox_k")
        if zeta is not None:
            add("visibility-sandwich", "upper", "prox", zeta, True, "prox_k <= zeta_k")
    else:
        add("visibility-sandwich", "upper", "zeta", None, False, "stated for k >= 1")
        if prox is not None:
            add("zero-visibility", "upper", "zeta", prox, True, "a proximity win at k = 0 locates the robber")

    # girth / domination upper bound
    gamma: dict[int, int] = {}
    best = None
    top = k if max_j is None else min(k, max_j)
    for j in range(0, top + 1):
        if met.girth < 2 * j + 3:
            continue
        try:
            gamma[j] = j_domination(g, j)
        except CapacityError:
            continue
        val = gamma[j] + ball_max(g, j)
        if best is None or val <= best[0]:
            best = (val, j)
    if best is not None:
        add("girth-domination", "upper", "zeta", best[0], True,
            f"girth {met.girth} >= {2 * best[1] + 3}; gamma_{best[1]} + Delta_{best[1]} = "
            f"{gamma[best[1]]} + {best[0] - gamma[best[1]]}")
    else:
        add("girth-domination", "upper", "zeta", None, False, "no j <= k with girth >= 2j+3 at computable size")

    # trees
    tree = g.is_tree
    if tree:
        rad = met.radius
        if k == 0:
            add("tree-zero-visibility", "upper", "zeta", rad + 1, True, f"rad + 1 = {rad + 1}")
        else:
            b = math.ceil((rad + k) / (k * k)) + 1
            add("tree-path-guard", "upper", "zeta", b, True, f"ceil((rad+k)/k^2)+1 with rad = {rad}")
        if k == rad and g.n > 1:
            add("tree-radius", "upper", "zeta", 2, True, "k = rad(T)")
        if k >= 1 and prox is not None:
            add("tree-prox-plus-one", "upper", "zeta", prox + 1, True, "zeta_k <= prox_k + 1 on trees")
        hubs = [v for v in range(g.n) if len(g.adj[v]) >= 3]
        if k >= 2 and len(hubs) == 1:
            add("spider", "upper", "zeta", 1, True, "spider with k >= 2")
    else:
        add("tree-path-guard", "upper", "zeta", None, False, "graph is not a tree")

    return BoundReport(
        k=k, n=g.n, ball_max=dk,
        iso_table=iso.table if iso else [], iso_max=iso.value if iso else None,
        gamma=gamma, girth=met.girth, radius=met.radius, is_tree=tree, records=recs,
    )
