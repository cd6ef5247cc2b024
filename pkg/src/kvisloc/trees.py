"""Cop strategies on trees and the subdivision constructions for trees."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .errors import ContractError, ParameterError, StructuralError
from .game import GameConfig, Mode, ScheduleStrategy, Strategy, verify_strategy
from .graph import Graph, SubdivisionPlan, bits, graph_metrics, subdivide


# ---------------------------------------------------------------- rooted trees


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A tree with a chosen root; children are kept in increasing id order."""

    graph: Graph
    root: int

    def __post_init__(self):
        if not self.graph.is_tree:
            raise StructuralError("graph is not a tree")
        if not 0 <= self.root < self.graph.n:
            raise ParameterError(f"root {self.root} out of range")

    @classmethod
    def at_center(cls, g: Graph) -> "RootedTree":
        return cls(g, graph_metrics(g).center[0] if g.n else 0)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        par = [-1] * self.graph.n
        seen = {self.root}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for w in self.graph.adj[u]:
                if w not in seen:
                    seen.add(w)
                    par[w] = u
                    stack.append(w)
        return tuple(par)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.graph.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(v)
        return tuple(tuple(sorted(c)) for c in ch)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        return self.graph.dm.dist[self.root]

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        out = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return tuple(out)

    @cached_property
    def desc(self) -> tuple[int, ...]:
        """Bit mask of each vertex's descendants, itself included."""
        masks = [1 << v for v in range(self.graph.n)]
        for u in reversed(self.preorder):
            p = self.parent[u]
            if p >= 0:
                masks[p] |= masks[u]
        return tuple(masks)

    @cached_property
    def words(self) -> tuple[tuple[int, ...], ...]:
        """Word labels: the root is the empty word, the i-th child of u is ``u + (i,)``."""
        w: list[tuple[int, ...]] = [()] * self.graph.n
        for u in self.preorder:
            for i, c in enumerate(self.children[u], start=1):
                w[c] = w[u] + (i,)
        return tuple(w)

    def height(self, u: Optional[int] = None) -> int:
        u = self.root if u is None else u
        du = self.depth[u]
        return max(self.depth[v] - du for v in bits(self.desc[u]))

    def leaves_under(self, u: int) -> list[int]:
        """Leaves of the subtree at ``u`` in depth-first order."""
        out = []
        stack = [u]
        while stack:
            x = stack.pop()
            if not self.children[x]:
                out.append(x)
            stack.extend(reversed(self.children[x]))
        return out

    def path_down(self, u: int, leaf: int) -> list[int]:
        out = [leaf]
        while out[-1] != u:
            out.append(self.parent[out[-1]])
        return out[::-1]


def _rooted(T) -> RootedTree:
    return T if isinstance(T, RootedTree) else RootedTree.at_center(T)


# ---------------------------------------------------------------- pin and sweep


class PinSweepStrategy(Strategy):
    """One cop pins the current root ``u``; the others sweep child subtrees.

    State is ``(u, c, s, C)``: the pinned vertex, the child whose subtree is
    being swept, the step of that sweep and the last observed class.  After
    each round the possible robber positions ``R`` decide what happens next:
    if ``R`` (apart from ``u`` itself, which the pin would see) lies below a
    single child, the pin moves down to it; a child with no possible robber
    position below it is finished; otherwise the sweep advances.
    """

    def __init__(self, tree: RootedTree, k: int, cops: int):
        super().__init__(tree.graph, k, cops)
        self.tree = tree

    # hooks
    def sweep_probes(self, u: int, c: int, s: int) -> Sequence[int]:
        raise NotImplementedError

    def sweep_length(self, u: int, c: int) -> int:
        raise NotImplementedError

    def _next_child(self, u: int, R: int, prefer: int = -1) -> int:
        desc = self.tree.desc
        if prefer >= 0 and R & desc[prefer]:
            return prefer
        for c in self.tree.children[u]:
            if R & desc[c]:
                return c
        return -1

    def initial_state(self):
        r = self.tree.root
        return (r, self._next_child(r, self.graph.full), 0, self.graph.full)

    def probes(self, state):
        u, c, s, _ = state
        P = {u}
        if c >= 0:
            P.update(self.sweep_probes(u, c, s))
        return tuple(sorted(P))

    def update(self, state, probes, sig, candidates):
        u, c, s, _ = state
        desc = self.tree.desc
        R = self.graph.spread(candidates)
        rest = R & ~(1 << u)
        below = [x for x in self.tree.children[u] if rest & desc[x]]
        if len(below) == 1 and not R >> u & 1:
            v = below[0]
            return (v, self._next_child(v, R), 0, candidates)
        if c < 0 or not R & desc[c]:
            return (u, self._next_child(u, R), 0, candidates)
        s += 1
        if s >= self.sweep_length(u, c):
            s = 0
        return (u, c, s, candidates)


class TreeRadiusStrategy(PinSweepStrategy):
    """Two cops at ``k = rad(T)``: pin the root, test one child per round."""

    name = "tree-radius"

    def __init__(self, tree: RootedTree, k: int):
        rad = graph_metrics(tree.graph).radius
        if k != rad:
            raise ParameterError(f"tree-radius needs k = rad(T) = {rad}, got {k}")
        if tree.height() != rad:
            raise ParameterError("root must be a centre vertex")
        super().__init__(tree, k, 2 if tree.graph.n > 1 else 1)

    def sweep_probes(self, u, c, s):
        return (c,)

    def sweep_length(self, u, c):
        return 1


class ZeroVisibilityPathStrategy(PinSweepStrategy):
    """``k = 0``: occupy the root-to-leaf paths one at a time, depth first."""

    name = "tree-zero-vis"

    def __init__(self, tree: RootedTree):
        super().__init__(tree, 0, tree.height() + 1)
        self._leaves: dict[int, list[int]] = {}

    def _lv(self, c):
        if c not in self._leaves:
            self._leaves[c] = self.tree.leaves_under(c)
        return self._leaves[c]

    def sweep_probes(self, u, c, s):
        return self.tree.path_down(c, self._lv(c)[s])

    def sweep_length(self, u, c):
        return len(self._lv(c))


def path_guard_budget(rad: int, k: int) -> int:
    if k < 1:
        raise ParameterError("path guard needs k >= 1")
    return math.ceil((rad + k) / (k * k)) + 1


class PathGuardStrategy(PinSweepStrategy):
    """Checkpoint sweep of root-to-leaf paths at spacing ``k``.

    On each path below the current child the checkpoints sit at distance
    ``0, k, 2k, ...`` from the child, plus the leaf.  Cop ``i`` starts on
    checkpoint ``i k`` and moves one checkpoint deeper per round, returning
    to the top after the leaf, so each checkpoint is probed within every
    ``k`` rounds; each path gets ``k`` rounds.  The pin is the extra cop.
    """

    name = "tree-path-guard"

    def __init__(self, tree: RootedTree, k: int, cops: Optional[int] = None):
        if k < 1:
            raise ParameterError("path guard needs k >= 1")
        self.tree, self.k = tree, k
        self._paths: dict[int, list[list[int]]] = {}
        rad = graph_metrics(tree.graph).radius
        # fewer than the formula budget is fine when every path is covered each k rounds
        need = self.min_cops()
        cops = path_guard_budget(rad, k) if cops is None else cops
        if cops < need:
            raise ParameterError(f"path guard needs {need} cops")
        super().__init__(tree, k, cops)
        self.guards = cops - 1

    def min_cops(self) -> int:
        longest = max((len(p) for c in range(self.tree.graph.n) if c != self.tree.root
                       for p in self.checkpoints(c)), default=0)
        return 1 + max(1, -(-longest // self.k))

    def checkpoints(self, c: int) -> list[list[int]]:
        if c not in self._paths:
            k = self.k
            out = []
            for leaf in self.tree.leaves_under(c):
                p = self.tree.path_down(c, leaf)
                cps = p[::k]
                if (len(p) - 1) % k:
                    cps.append(p[-1])
                out.append(cps)
            self._paths[c] = out
        return self._paths[c]

    def sweep_probes(self, u, c, s):
        paths = self.checkpoints(c)
        cps = paths[s // self.k]
        t = s % self.k
        return tuple(cps[(i * self.k + t) % len(cps)] for i in range(self.guards))

    def sweep_length(self, u, c):
        return self.k * len(self.checkpoints(c))


class ProxPlusOneStrategy(PinSweepStrategy):
    """Pin plus a proximity schedule replayed inside each child subtree.

    Probes of the inner schedule that fall outside the child subtree are
    moved to the nearest vertex inside it.
    """

    name = "prox-plus-one"

    def __init__(self, tree: RootedTree, k: int, inner: Strategy, *, check_inner: bool = True):
        if k < 1:
            raise ParameterError("prox-plus-one needs k >= 1")
        if Mode.parse(inner.mode) is not Mode.PROXIMITY:
            raise ParameterError("inner strategy must be a proximity strategy")
        if inner.graph != tree.graph:
            raise ParameterError("inner strategy is for a different graph")
        if check_inner:
            res = verify_strategy(tree.graph, GameConfig(k, inner.cops, Mode.PROXIMITY), inner)
            if not res.captured:
                raise ContractError(f"inner strategy fails: {res.reason}")
        super().__init__(tree, k, inner.cops + 1)
        sched = []
        st = inner.initial_state()
        for _ in range(10 * tree.graph.n + 1000):
            P = inner.probes(st)
            sched.append(tuple(P))
            st = inner.update(st, P, (None,) * len(P), 0)
            if isinstance(inner, ScheduleStrategy) and not inner.cyclic and st >= len(inner.schedule):
                break
        self.schedule = sched
        self._nearest: dict[int, list[int]] = {}

    def _project(self, c: int) -> list[int]:
        if c not in self._nearest:
            dm = self.graph.dm.dist
            inside = list(bits(self.tree.desc[c]))
            self._nearest[c] = [min(inside, key=lambda w: (dm[v][w], w)) for v in range(self.graph.n)]
        return self._nearest[c]

    def sweep_probes(self, u, c, s):
        f = self._project(c)
        return tuple(sorted({f[v] for v in self.schedule[s]}))

    def sweep_length(self, u, c):
        return len(self.schedule)


def tree_radius_strategy(T, k: Optional[int] = None) -> Strategy:
    tree = _rooted(T)
    rad = graph_metrics(tree.graph).radius
    return TreeRadiusStrategy(tree, rad if k is None else k)


def tree_path_guard_strategy(T, k: int, cops: Optional[int] = None) -> Strategy:
    return PathGuardStrategy(_rooted(T), k, cops)


def tree_zero_visibility_strategy(T, k: int = 0) -> Strategy:
    if k != 0:
        raise ParameterError("zero-visibility strategy needs k = 0")
    return ZeroVisibilityPathStrategy(_rooted(T))


def tree_prox_plus_one_strategy(T, k: int, inner: Strategy) -> Strategy:
    return ProxPlusOneStrategy(_rooted(T), k, inner)


# ---------------------------------------------------------------- spiders


def spider_legs(g: Graph) -> tuple[int, list[list[int]]]:
    """Hub and legs (each listed from the hub outwards) of a spider."""
    if not g.is_tree:
        raise ParameterError("not a spider: graph is not a tree")
    hubs = [v for v in range(g.n) if len(g.adj[v]) >= 3]
    if len(hubs) != 1:
        raise ParameterError("not a spider: needs exactly one vertex of degree >= 3")
    h = hubs[0]
    legs = []
    for w in sorted(g.adj[h]):
        leg, prev = [w], h
        while len(g.adj[leg[-1]]) == 2:
            nxt = [x for x in g.adj[leg[-1]] if x != prev][0]
            prev = leg[-1]
            leg.append(nxt)
        legs.append(leg)
    return h, legs


class SpiderStrategy(Strategy):
    """One cop, ``k >= 2``, alternating the hub with a leg probe.

    The state carries the last observed class.  On leg rounds, if at most one
    candidate remains per leg the cop probes one step beyond the candidate on
    the leg nearest the hub (or that leg's leaf); otherwise it probes the
    outermost possible robber position on the first leg that may still hold
    the robber, clearing that leg inwards.
    """

    name = "spider"

    def __init__(self, g: Graph, k: int):
        if k < 2:
            raise ParameterError("spider strategy needs k >= 2")
        super().__init__(g, k, 1)
        self.hub, self.legs = spider_legs(g)
        pos = {self.hub: (-1, 0)}
        for j, leg in enumerate(self.legs):
            for i, v in enumerate(leg, start=1):
                pos[v] = (j, i)
        self.pos = pos
        self.leg_masks = [sum(1 << v for v in leg) for leg in self.legs]
        # with ids increasing outwards the far end of a leg is its top bit
        self._outward_ids = all(list(leg) == sorted(leg) for leg in self.legs)
        self._star = all(len(leg) == 1 for leg in self.legs)

    def initial_state(self):
        return (self.graph.full, 0)

    def probes(self, state):
        C, t = state
        if self._star:
            # a hub probe tells nothing on a star; walk the leaves instead
            leaves = self.graph.spread(C) & ~(1 << self.hub)
            return ((leaves & -leaves).bit_length() - 1,) if leaves else (self.hub,)
        if t % 2 == 0:
            return (self.hub,)
        seen = [C & m for m in self.leg_masks]
        if all(not x & (x - 1) for x in seen):
            # at most one candidate per leg: probe one step beyond the
            # candidate nearest the hub (or that leg's leaf)
            best = None
            for j, x in enumerate(seen):
                if x:
                    lvl = self.pos[x.bit_length() - 1][1]
                    if best is None or lvl < best[0]:
                        best = (lvl, j)
            if best is None:
                return (self.hub,)
            lvl, j = best
            leg = self.legs[j]
            return (leg[min(lvl, len(leg) - 1)],)
        R = self.graph.spread(C)
        for m in self.leg_masks:
            x = R & m
            if x:
                if self._outward_ids:
                    return (x.bit_length() - 1,)
                return (max(bits(x), key=lambda v: self.pos[v][1]),)
        return (self.hub,)

    def update(self, state, probes, sig, candidates):
        return (candidates, state[1] + 1)


def spider_strategy(g: Graph, k: int) -> Strategy:
    return SpiderStrategy(g, k)


# ---------------------------------------------------------------- subdivisions


@dataclass
class SubdivisionRecursion:
    """Per-edge tables of the single-cop subdivision (keys are child vertices)."""

    k: int
    x: dict[int, int] = field(default_factory=dict)
    y: dict[int, int] = field(default_factory=dict)
    t: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "x": {str(v): c for v, c in sorted(self.x.items())},
            "y": {str(v): c for v, c in sorted(self.y.items())},
            "t": {str(v): c for v, c in sorted(self.t.items())},
        }


def path_budget(x: int, k: int) -> int:
    """Rounds to clear a subdivided edge with ``x`` inner vertices."""
    return (2 * k + 1) * math.ceil((x + 1 + k) / (4 * k * k + k))


def subdivision_recursion(tree: RootedTree, k: int) -> SubdivisionRecursion:
    if k < 1:
        raise ParameterError("k must be >= 1")
    rec = SubdivisionRecursion(k)
    for u in reversed(tree.preorder):
        kids = tree.children[u]
        for i, c in enumerate(kids):
            if i == 0:
                rec.x[c] = 1
            else:
                prev = kids[:i]
                rec.x[c] = sum(rec.y[p] for p in prev) + max(rec.t[p] for p in prev)
            rec.y[c] = path_budget(rec.x[c], k)
        ys = sum(rec.y[c] for c in kids)
        rec.t[u] = len(kids) * ys + sum(rec.t[c] for c in kids)
    return rec


@dataclass
class ProxSubdivision:
    plan: SubdivisionPlan
    recursion: SubdivisionRecursion
    schedule: ScheduleStrategy
    tree: RootedTree

    @property
    def graph(self) -> Graph:
        return self.schedule.graph


def _edge_paths(base: RootedTree, sub: Graph, plan: SubdivisionPlan) -> dict[int, list[int]]:
    """For each child ``c`` the vertex sequence of ``P_c`` in the subdivision."""
    # new vertices are laid out per sorted base edge from the smaller endpoint
    out = {}
    nxt = base.graph.n
    for (a, b) in plan.base.edges:
        cnt = plan.counts.get((a, b), 0)
        inner = list(range(nxt, nxt + cnt))
        nxt += cnt
        seq = [a] + inner + [b]
        if base.parent[b] == a:
            out[b] = seq
        else:
            out[a] = seq[::-1]
    return out


def subdivide_for_prox1(T, k: int) -> ProxSubdivision:
    """Subdivide a tree so one cop wins the proximity game, with the schedule."""
    tree = _rooted(T)
    if k < 1:
        raise ParameterError("k must be >= 1")
    rec = subdivision_recursion(tree, k)
    plan = SubdivisionPlan(tree.graph, {tuple(sorted((tree.parent[c], c))): x for c, x in rec.x.items()})
    sub = subdivide(plan)
    paths = _edge_paths(tree, sub, plan)
    sched: list[tuple[int, ...]] = []

    def clear_path(c: int):
        # One pass: probe u, then 2k probes at stride 2k behind the frontier.
        # ``front`` is the nearest position the robber may hold when u is probed.
        p = paths[c]
        end = len(p) - 1
        front = k + 1
        while True:
            sched.append((p[0],))
            pos = front - 1 + k
            for _ in range(2 * k):
                sched.append((p[min(pos, end)],))
                if pos + k >= end:
                    return
                pos += 2 * k
            front = pos - 2 * k + k

    def clear(u: int):
        kids = tree.children[u]
        for c in kids:
            for i in reversed(kids):
                clear_path(i)
            clear(c)

    clear(tree.root)
    sched.append((tree.root,))
    return ProxSubdivision(plan, rec, ScheduleStrategy(sub, k, sched, cops=1), tree)


def harmonic_threshold(target: Fraction) -> int:
    """Least ``N`` with ``H_N >= target`` (exact rational arithmetic)."""
    h = Fraction(0)
    n = 0
    while h < target:
        n += 1
        h += Fraction(1, n)
    return n


def zeta1_presubdivision(max_degree: int, k: int) -> tuple[int, int]:
    """``(N, per-edge count)`` for the spread-out pre-subdivision."""
    N = harmonic_threshold(Fraction(4 * max_degree, k))
    return N, math.ceil(N * k / 2) + k + 1


@dataclass
class Zeta1Subdivision:
    plan: SubdivisionPlan
    N: int
    pre_count: int
    prox: ProxSubdivision

    @property
    def graph(self) -> Graph:
        return self.prox.graph


def subdivide_for_zeta1(T, k: int) -> Zeta1Subdivision:
    """Pre-subdivide uniformly, then apply :func:`subdivide_for_prox1`.

    The returned plan is on the original tree: each edge's count is the
    pre-subdivision count plus the counts added on its segments.
    """
    if k < 2:
        raise ParameterError("k must be >= 2 (k = 1 only works for caterpillars)")
    base = T.graph if isinstance(T, RootedTree) else T
    if not base.is_tree:
        raise StructuralError("graph is not a tree")
    delta = max((len(a) for a in base.adj), default=0)
    N, pre = zeta1_presubdivision(delta, k)
    plan1 = SubdivisionPlan(base, {e: pre for e in base.edges})
    mid = subdivide(plan1)
    prox = subdivide_for_prox1(RootedTree.at_center(mid), k)
    # fold segment counts back onto the original edges
    seg_owner = {}
    nxt = base.n
    for e in base.edges:
        chain = [e[0]] + list(range(nxt, nxt + pre)) + [e[1]]
        nxt += pre
        for a, b in zip(chain, chain[1:]):
            seg_owner[tuple(sorted((a, b)))] = e
    counts = {e: pre for e in base.edges}
    for seg, c in prox.plan.counts.items():
        counts[seg_owner[seg]] += c
    return Zeta1Subdivision(SubdivisionPlan(base, counts), N, pre, prox)


# ---------------------------------------------------------------- lower-bound family


@dataclass
class LowerBoundTree:
    graph: Graph
    h: int
    q: int
    k: int
    bound: Fraction
    applicable: bool
    radius_formula: int
    note: str = ""

    def to_json(self) -> dict:
        return {
            "h": self.h, "q": self.q, "k": self.k,
            "n": self.graph.n,
            "bound": str(self.bound),
            "applicable": self.applicable,
            "radius_formula": self.radius_formula,
            "note": self.note,
        }


def lower_bound_value(h: int, k: int) -> Fraction:
    """Lower bound on the cops needed on the stretched tree, times ``log n``."""
    return Fraction(3, 160) * Fraction(h - 2, 2 * k + 1)


def lower_bound_tree(h: int, q: int, k: int) -> LowerBoundTree:
    """``T(h, q)`` with inner edges stretched to length ``2k+1``, leaf edges to ``k``."""
    from .graph import complete_qary_tree

    if h < 1 or q < 1 or k < 1:
        raise ParameterError("need h, q, k >= 1")
    base = complete_qary_tree(h, q)
    counts = {}
    for a, b in base.edges:
        leafy = len(base.adj[a]) == 1 or len(base.adj[b]) == 1
        counts[(a, b)] = (k - 1) if leafy else 2 * k
    g = subdivide(SubdivisionPlan(base, counts))
    ok = h >= 3 and q >= 4
    return LowerBoundTree(
        g, h, q, k,
        bound=lower_bound_value(h, k),
        applicable=ok,
        radius_formula=h * (2 * k + 1) - (k + 1),
        note="height read as h(2k+1)-(k+1); one statement of the source prints h(2k_1)-(k+1)",
    )
