"""Game semantics, exact solvers and the adversarial strategy verifier.

Knowledge states (candidate sets) are bit vectors over the vertex ids.  A
round is: the cops probe a set ``P``; the robber's vertex determines its
signature; the cops learn which signature class contains the robber; the
robber then moves inside the closed neighbourhood of that class.
"""

from __future__ import annotations

import enum
import sys
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Optional, Sequence

from .errors import CapacityError, ContractError, ParameterError
from .graph import DistanceMatrix, Graph, bits, popcount, to_mask

STAR = None  # out-of-range probe symbol

LOCALIZATION_LIMIT = 18
PROXIMITY_LIMIT = 24


class Mode(str, enum.Enum):
    LOCALIZATION = "localization"
    PROXIMITY = "proximity"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"loc": cls.LOCALIZATION, "prox": cls.PROXIMITY}
        try:
            return aliases.get(value) or cls(value)
        except ValueError:
            raise ParameterError(f"unknown game mode {value!r}") from None


@dataclass(frozen=True)
class GameConfig:
    k: int
    m: int
    mode: Mode = Mode.LOCALIZATION
    round_bound: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if self.k < 0:
            raise ParameterError("visibility k must be >= 0")
        if self.m < 1:
            raise ParameterError("need at least one cop")
        if self.round_bound < 1:
            raise ParameterError("round_bound must be >= 1")


def fmt_signature(sig: Sequence[Optional[int]]) -> str:
    return "(" + ",".join("*" if d is None else str(d) for d in sig) + ")"


# ---------------------------------------------------------------- semantics


def signature(dm: DistanceMatrix, v: int, probes: Sequence[int], k: int) -> tuple:
    row = dm.dist[v]
    return tuple(row[p] if row[p] <= k else STAR for p in probes)


def signature_partition(dm: DistanceMatrix, S: int, P: Sequence[int], k: int) -> dict[tuple, int]:
    """Split candidate set ``S`` by the signature each member would produce."""
    if not P:
        raise ParameterError("probe set must be non-empty")
    if not S:
        raise ParameterError("candidate set must be non-empty")
    probes = tuple(sorted(set(P)))
    out: dict[tuple, int] = {}
    for v in bits(S):
        sig = signature(dm, v, probes, k)
        out[sig] = out.get(sig, 0) | (1 << v)
    return out


def split(S: int, P: Iterable[int], rings) -> list[int]:
    """Signature classes of ``S`` as bit vectors (no keys), by refinement."""
    classes = [S]
    for p in P:
        rp = rings[p]
        new = []
        for c in classes:
            rest = c
            for ring in rp:
                x = rest & ring
                if x:
                    new.append(x)
                    rest ^= x
                    if not rest:
                        break
            if rest:
                new.append(rest)
        classes = new
    return classes


def class_of(dm: DistanceMatrix, S: int, P: Sequence[int], sig: Sequence, k: int) -> int:
    """Members of ``S`` consistent with observing ``sig`` for probes ``P``."""
    if len(sig) != len(P):
        return 0
    rings, balls = dm.rings(k), dm.balls(k)
    for p, d in zip(P, sig):
        if d is None:
            S &= ~balls[p]
        elif 0 <= d < len(rings[p]):
            S &= rings[p][d]
        else:
            return 0
    return S


def proximity_survivors(dm: DistanceMatrix, S: int, P: Iterable[int], k: int) -> int:
    balls = dm.balls(k)
    seen = 0
    for p in P:
        seen |= balls[p]
    return S & ~seen


def spread(g: Graph, S: int) -> int:
    return g.spread(S)


# ---------------------------------------------------------------- exact solving


@dataclass
class SolveResult:
    cop_win: bool
    states_explored: int
    k: int
    m: int
    mode: Mode
    table: dict[int, tuple[int, ...]] = field(default_factory=dict)
    schedule: list[tuple[int, ...]] = field(default_factory=list)
    rounds: Optional[int] = None

    def to_json(self) -> dict:
        witness = [list(p) for p in self.schedule]
        if self.mode is Mode.LOCALIZATION and self.cop_win:
            witness = [[sorted(bits(s)), list(p)] for s, p in sorted(self.table.items())]
        return {
            "game": self.mode.value,
            "k": self.k,
            "m": self.m,
            "cop_win": self.cop_win,
            "states_explored": self.states_explored,
            "rounds": self.rounds,
            "witness": witness,
        }


def _guard(g: Graph, mode: Mode, max_n: Optional[int]) -> None:
    limit = max_n if max_n is not None else (
        LOCALIZATION_LIMIT if mode is Mode.LOCALIZATION else PROXIMITY_LIMIT
    )
    if g.n > limit:
        raise CapacityError(
            f"exact {mode.value} solving refused for n={g.n} > {limit}; "
            "raise max_n to override",
            limit=limit,
        )


def _probe_sets(n: int, m: int) -> list[tuple[int, ...]]:
    # Adding probes only refines partitions / enlarges cleared sets, so sets
    # of exactly min(m, n) probes dominate all smaller ones.
    return list(combinations(range(n), min(m, n)))


def solve_game(g: Graph, config: GameConfig, *, max_n: Optional[int] = None,
               extract: bool = True) -> SolveResult:
    """Decide whether ``config.m`` cops win; optionally extract a strategy."""
    _guard(g, config.mode, max_n)
    if config.mode is Mode.LOCALIZATION:
        return _solve_localization(g, config.k, config.m, extract)
    return _solve_proximity(g, config.k, config.m, extract)


def _solve_localization(g: Graph, k: int, m: int, extract: bool) -> SolveResult:
    rings = g.dm.rings(k)
    cn = g.closed_nbr
    probe_sets = _probe_sets(g.n, m)
    start = g.full

    def spread_(c: int) -> int:
        out = 0
        for v in bits(c):
            out |= cn[v]
        return out

    # moves[S] = list of (probe index, successor tuple); absent => immediate win
    moves: dict[int, list] = {}
    win_move: dict[int, int] = {}
    rank: dict[int, int] = {}
    rev: dict[int, list] = {}
    counters: dict[tuple[int, int], int] = {}
    queue = deque()

    todo = [start]
    seen = {start}
    while todo:
        S = todo.pop()
        mv = []
        immediate = None
        for i, P in enumerate(probe_sets):
            succ = set()
            for c in split(S, P, rings):
                if c & (c - 1):
                    succ.add(spread_(c))
            if not succ:
                immediate = i
                break
            mv.append((i, tuple(succ)))
        if immediate is not None:
            win_move[S] = immediate
            rank[S] = 1
            queue.append(S)
            continue
        moves[S] = mv
        for i, succ in mv:
            counters[(S, i)] = len(succ)
            for T in succ:
                rev.setdefault(T, []).append((S, i))
                if T not in seen:
                    seen.add(T)
                    todo.append(T)

    while queue:
        T = queue.popleft()
        for S, i in rev.get(T, ()):
            if S in win_move:
                continue
            key = (S, i)
            counters[key] -= 1
            if counters[key] == 0:
                win_move[S] = i
                succ = next(s for j, s in moves[S] if j == i)
                rank[S] = 1 + max(rank[t] for t in succ)
                queue.append(S)

    cop_win = start in win_move
    res = SolveResult(cop_win, len(seen), k, m, Mode.LOCALIZATION)
    if cop_win:
        res.rounds = rank[start]
        if extract:
            res.table = _reachable_table(g, start, win_move, probe_sets, rings)
    return res


def _reachable_table(g, start, win_move, probe_sets, rings) -> dict[int, tuple[int, ...]]:
    table = {}
    stack = [start]
    while stack:
        S = stack.pop()
        if S in table:
            continue
        P = probe_sets[win_move[S]]
        table[S] = P
        for c in split(S, P, rings):
            if c & (c - 1):
                stack.append(g.spread(c))
    return table


def _solve_proximity(g: Graph, k: int, m: int, extract: bool) -> SolveResult:
    balls = g.dm.balls(k)
    probe_sets = _probe_sets(g.n, m)
    cleared = []
    for P in probe_sets:
        c = 0
        for p in P:
            c |= balls[p]
        cleared.append(c)
    cn = g.closed_nbr
    start = g.full
    parent: dict[int, tuple[int, int]] = {start: (-1, -1)}
    frontier = [start]
    found = None
    while frontier and found is None:
        nxt = []
        for S in frontier:
            for i, c in enumerate(cleared):
                T = S & ~c
                if not T:
                    found = (S, i)
                    break
                R = 0
                for v in bits(T):
                    R |= cn[v]
                if R not in parent:
                    parent[R] = (S, i)
                    nxt.append(R)
            if found is not None:
                break
        frontier = nxt
    res = SolveResult(found is not None, len(parent), k, m, Mode.PROXIMITY)
    if found is not None:
        seq = [probe_sets[found[1]]]
        S = found[0]
        while parent[S][0] != -1:
            S, i = parent[S]
            seq.append(probe_sets[i])
        seq.reverse()
        res.schedule = seq if extract else []
        res.rounds = len(seq)
    return res


def exact_number(g: Graph, k: int, mode: "Mode | str", *, max_n: Optional[int] = None) -> int:
    """Least cop count that wins (zeta_k or prox_k)."""
    mode = Mode.parse(mode)
    _guard(g, mode, max_n)
    for m in range(1, g.n + 1):
        if solve_game(g, GameConfig(k, m, mode), max_n=max_n, extract=False).cop_win:
            return m
    raise AssertionError("probing every vertex always wins")  # pragma: no cover


def localization_number(g: Graph, *, max_n: Optional[int] = None) -> int:
    """Unlimited-visibility localization number (probes return exact distances)."""
    return exact_number(g, max(g.dm.diameter, 0), Mode.LOCALIZATION, max_n=max_n)


# ---------------------------------------------------------------- strategies


class Strategy:
    """Deterministic cop policy.

    Subclasses implement :meth:`initial_state`, :meth:`probes` and
    :meth:`update`; states must be hashable and treated as immutable.  The
    ``candidates`` handed to :meth:`update` is the signature class that was
    observed (before the robber moves) and is itself a function of the
    observation history, so a strategy that inspects it is still a pure
    function of that history, as :meth:`__call__` demonstrates by replay.
    """

    name = "strategy"
    mode = Mode.LOCALIZATION

    def __init__(self, graph: Graph, k: int, cops: int):
        self.graph = graph
        self.k = k
        self.cops = cops

    def initial_state(self) -> Hashable:
        return None

    def probes(self, state) -> tuple[int, ...]:
        raise NotImplementedError

    def update(self, state, probes: tuple[int, ...], sig: tuple, candidates: int):
        return state

    def __call__(self, history: Sequence[tuple[Sequence[int], Sequence]]) -> tuple[int, ...]:
        """Probe set for the next round given ``[(probes, signature), ...]``."""
        g, dm, k = self.graph, self.graph.dm, self.k
        state = self.initial_state()
        S = g.full
        for P, sig in history:
            P = tuple(P)
            C = class_of(dm, S, P, sig, k)
            if not C:
                raise ContractError("history is inconsistent with the game")
            state = self.update(state, P, tuple(sig), C)
            S = g.spread(C)
        return self.probes(state)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} cops={self.cops} k={self.k}>"


class ScheduleStrategy(Strategy):
    """Fixed probe sequence (the natural form of a proximity strategy)."""

    mode = Mode.PROXIMITY
    name = "schedule"

    def __init__(self, graph: Graph, k: int, schedule: Sequence[Sequence[int]], cops: Optional[int] = None,
                 cyclic: bool = False):
        sched = [tuple(sorted(set(p))) for p in schedule]
        super().__init__(graph, k, cops if cops is not None else max((len(p) for p in sched), default=1))
        self.schedule = sched
        self.cyclic = cyclic

    def initial_state(self):
        return 0

    def probes(self, state):
        if not self.schedule:
            return ()
        if self.cyclic:
            return self.schedule[state % len(self.schedule)]
        return self.schedule[state] if state < len(self.schedule) else ()

    def update(self, state, probes, sig, candidates):
        return state + 1


class TableStrategy(Strategy):
    """Localization strategy read from a solver table (candidate set -> probes)."""

    name = "solver-table"

    def __init__(self, graph: Graph, k: int, table: dict[int, tuple[int, ...]], cops: int):
        super().__init__(graph, k, cops)
        self.table = table

    def initial_state(self):
        return self.graph.full

    def probes(self, state):
        return self.table.get(state, ())

    def update(self, state, probes, sig, candidates):
        return self.graph.spread(candidates)


# ---------------------------------------------------------------- verification


@dataclass
class VerificationResult:
    captured: bool
    worst_rounds: int
    witness: list = field(default_factory=list)
    nodes: int = 0
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "captured": self.captured,
            "worst_rounds": self.worst_rounds,
            "nodes": self.nodes,
            "reason": self.reason,
            "witness": [[list(p), fmt_signature(s)] for p, s in self.witness],
        }


def _check_probes(P, g: Graph, m: int) -> tuple[int, ...]:
    P = tuple(P)
    if len(P) > m:
        raise ContractError(f"strategy probed {len(P)} vertices with only {m} cops")
    for p in P:
        if not 0 <= p < g.n:
            raise ContractError(f"probe {p} is not a vertex")
    return P


def verify_strategy(g: Graph, config: GameConfig, s: Strategy, *, replay_samples: int = 64) -> VerificationResult:
    """Play ``s`` against every robber behaviour.

    ``replay_samples`` nodes (the first ones visited) are cross-checked by
    recomputing the probes from the raw observation history.
    """
    if Mode.parse(s.mode) is not config.mode:
        raise ParameterError(f"strategy mode {s.mode} does not match game mode {config.mode.value}")
    if s.graph is not g and s.graph != g:
        raise ParameterError("strategy was built for a different graph")
    if config.mode is Mode.PROXIMITY:
        return _verify_proximity(g, config, s)
    return _LocalizationVerifier(g, config, s, replay_samples).run()


def _verify_proximity(g: Graph, config: GameConfig, s: Strategy) -> VerificationResult:
    dm = g.dm
    balls = dm.balls(config.k)
    S = g.full
    state = s.initial_state()
    trace = []
    for t in range(1, config.round_bound + 1):
        P = _check_probes(s.probes(state), g, config.m)
        seen = 0
        for p in P:
            seen |= balls[p]
        T = S & ~seen
        sig = (STAR,) * len(P)
        trace.append((P, sig))
        if not T:
            return VerificationResult(True, t, trace, t)
        state = s.update(state, P, sig, T)
        S = g.spread(T)
    return VerificationResult(False, config.round_bound, trace, config.round_bound,
                              reason="round bound exceeded")


class _Fail(Exception):
    def __init__(self, witness, reason):
        self.witness = witness
        self.reason = reason


class _LocalizationVerifier:
    def __init__(self, g, config, s, replay_samples):
        self.g, self.config, self.s = g, config, s
        self.dm = g.dm
        self.rings = self.dm.rings(config.k)
        self.memo: dict = {}
        self.nodes = 0
        self.replay_left = replay_samples
        self.path: list = []

    def run(self) -> VerificationResult:
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20 * self.config.round_bound + 1000))
        try:
            key = (self.g.full, self.s.initial_state())
            worst = self._explore(key, 0)
        except _Fail as f:
            return VerificationResult(False, self.config.round_bound, f.witness, self.nodes, f.reason)
        finally:
            sys.setrecursionlimit(old)
        return VerificationResult(True, worst, self._longest(key), self.nodes)

    def _explore(self, key, depth) -> int:
        hit = self.memo.get(key)
        if hit is not None:
            if depth + hit[0] > self.config.round_bound:
                raise _Fail(list(self.path), "round bound exceeded (memoized subtree)")
            return hit[0]
        S, state = key
        self.nodes += 1
        if depth >= self.config.round_bound:
            raise _Fail(list(self.path), "round bound exceeded")
        P = _check_probes(self.s.probes(state), self.g, self.config.m)
        if self.replay_left > 0:
            self.replay_left -= 1
            again = tuple(self.s(self.path))
            if again != P:
                raise ContractError(
                    f"strategy is not a function of its history: {P} vs replayed {again}")
        worst, best_child = 1, None
        for C in split(S, P, self.rings) if P else [S]:
            if not C & (C - 1):
                continue
            v = next(bits(C))
            sig = signature(self.dm, v, P, self.config.k)
            child = (self.g.spread(C), self.s.update(state, P, sig, C))
            self.path.append((P, sig))
            r = 1 + self._explore(child, depth + 1)
            self.path.pop()
            if r > worst:
                worst, best_child = r, (P, sig, child)
        self.memo[key] = (worst, best_child)
        return worst

    def _longest(self, key) -> list:
        out = []
        while True:
            _, nxt = self.memo[key]
            if nxt is None:
                return out
            P, sig, key = nxt
            out.append((P, sig))


def simulate_proximity(g: Graph, k: int, schedule: Sequence[Sequence[int]], *,
                       start: Optional[int] = None) -> tuple[bool, int, list[int]]:
    """Run a fixed probe schedule; returns (cleared, rounds used, survivor sizes)."""
    balls = g.dm.balls(k)
    S = g.full if start is None else start
    sizes = []
    if not S:
        return True, 0, sizes
    for t, P in enumerate(schedule, 1):
        seen = 0
        for p in P:
            seen |= balls[p]
        T = S & ~seen
        sizes.append(popcount(T))
        if not T:
            return True, t, sizes
        S = g.spread(T)
    return False, len(schedule), sizes
