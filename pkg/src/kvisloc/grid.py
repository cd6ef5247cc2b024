"""Lee-sphere tilings of grid graphs and the grid cop strategies.

Coordinates follow the grid convention used throughout: ``(x, y)`` is row
``x`` (counted upwards) and column ``y``; ``G_{n,n}`` has ``x, y`` in
``[1, n]``.  ``D^q`` translates a coordinate set ``q`` rows down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import ParameterError
from .game import Mode, Strategy, split
from .graph import Graph, bits, grid, popcount

Coord = tuple[int, int]


def tile_size(k: int) -> int:
    return 2 * k * k + 2 * k + 1


def lee_sphere(c: Coord, k: int, window: "Optional[tuple[int, int, int, int] | int]" = None) -> frozenset[Coord]:
    """Coordinates within Manhattan distance ``k`` of ``c``.

    ``window`` is either ``(xlo, xhi, ylo, yhi)`` or an int ``n`` meaning the
    square ``[1, n]^2``.
    """
    if k < 0:
        raise ParameterError("radius must be non-negative")
    if isinstance(window, int):
        window = (1, window, 1, window)
    x, y = c
    out = []
    for dx in range(-k, k + 1):
        r = k - abs(dx)
        for dy in range(-r, r + 1):
            out.append((x + dx, y + dy))
    if window is not None:
        xlo, xhi, ylo, yhi = window
        out = [(a, b) for a, b in out if xlo <= a <= xhi and ylo <= b <= yhi]
    return frozenset(out)


def lattice_index(c: Coord, k: int) -> Optional[tuple[int, int]]:
    """``(i, j)`` with ``c = (ik + j(k+1), i(k+1) - jk)``, or None."""
    x, y = c
    m = tile_size(k)
    a = k * x + (k + 1) * y
    b = (k + 1) * x - k * y
    if a % m or b % m:
        return None
    return a // m, b // m


def is_center(c: Coord, k: int) -> bool:
    if k < 1:
        raise ParameterError("tile centres are defined for k >= 1")
    return lattice_index(c, k) is not None


def lattice_point(i: int, j: int, k: int) -> Coord:
    return (i * k + j * (k + 1), i * (k + 1) - j * k)


def centers_in(window: tuple[int, int, int, int], k: int, reach: int = 0) -> list[Coord]:
    """Lattice points whose ``reach``-ball meets the window."""
    xlo, xhi, ylo, yhi = window
    return [
        (x, y)
        for x in range(xlo - reach, xhi + reach + 1)
        for y in range(ylo - reach, yhi + reach + 1)
        if lattice_index((x, y), k) is not None
    ]


def clamp(c: Coord, n: int) -> Coord:
    """Nearest vertex of ``[1, n]^2`` in Manhattan distance (unique)."""
    return (min(max(c[0], 1), n), min(max(c[1], 1), n))


def manhattan(a: Coord, b: Coord) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


# ---------------------------------------------------------------- tile labelling


@dataclass(frozen=True)
class TileSystem:
    """Labelled tiling ``T_i`` of the strip ``Z x [1, n]`` by k-tiles."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ParameterError("tile system needs k >= 1 and n >= 1")

    @property
    def m(self) -> int:
        return tile_size(self.k)

    @property
    def period(self) -> int:
        return self.n + 2 * self.k

    def in_strip(self, c: Coord) -> bool:
        return 1 - self.k <= c[1] <= self.n + self.k

    def successor(self, c: Coord) -> Coord:
        k = self.k
        x, y = c
        nxt = (x + k, y + k + 1)
        if self.in_strip(nxt):
            return nxt
        # Wrap to the start of the next diagonal chain.  The number of
        # back-steps comes from the column; counting it from the row can
        # leave the strip.
        alpha = (y - 1) // (k + 1)
        return (x + k + 1 - alpha * k, y - k - alpha * (k + 1))

    def predecessor(self, c: Coord) -> Coord:
        k = self.k
        x, y = c
        prv = (x - k, y - k - 1)
        if self.in_strip(prv):
            return prv
        for alpha in range(0, self.n + 2 * k + 2):
            yy = y + k + alpha * (k + 1)
            if self.n <= yy <= self.n + k:
                return (x - (k + 1) + alpha * k, yy)
        raise AssertionError("no predecessor")  # pragma: no cover

    @property
    def base_period(self) -> tuple[Coord, ...]:
        return _base_period(self.k, self.n)

    def center(self, i: int) -> Coord:
        """Centre of ``T_i`` for any integer ``i`` (periodic fast path)."""
        a, r = divmod(i, self.period)
        x, y = self.base_period[r]
        return (x + a * self.m, y)

    def tile(self, i: int, window=None) -> frozenset[Coord]:
        x, y = self.center(i)
        win = (-10**9, 10**9, 1, self.n) if window is None else window
        return lee_sphere((x, y), self.k, win)


@lru_cache(maxsize=None)
def _base_period(k: int, n: int) -> tuple[Coord, ...]:
    ts = TileSystem(k, n)
    c = (0, 0)
    out = []
    for _ in range(ts.period):
        out.append(c)
        c = ts.successor(c)
    return tuple(out)


def tile_sequence(ts: TileSystem, i_lo: int, i_hi: int) -> list[Coord]:
    """Centres of ``T_{i_lo} .. T_{i_hi}`` by walking the labelling rules."""
    c = (0, 0)
    i = 0
    while i > i_lo:
        c = ts.predecessor(c)
        i -= 1
    while i < i_lo:
        c = ts.successor(c)
        i += 1
    out = []
    for _ in range(i_lo, i_hi + 1):
        out.append(c)
        c = ts.successor(c)
    return out


# ---------------------------------------------------------------- windowed sets


Region = tuple[int, int, int, int]


def _meet(a: Region, b: Region) -> Region:
    return (max(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), min(a[3], b[3]))


@dataclass(frozen=True)
class WindowSet:
    """A possibly infinite coordinate set known exactly inside ``region``.

    ``cols`` is the ambient column range (``(1, n)`` for the strip
    ``G_{inf,n}``, ``None`` for the whole plane).  ``points`` may contain
    coordinates outside ``region``; they are ignored by comparisons.
    """

    points: frozenset
    region: Region
    cols: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.cols is not None:
            lo, hi = self.cols
            object.__setattr__(self, "region", (self.region[0], self.region[1],
                                                max(self.region[2], lo), min(self.region[3], hi)))

    def inside(self, region: Optional[Region] = None) -> frozenset:
        r = self.region if region is None else region
        assert r[0] >= self.region[0] and r[1] <= self.region[1] and \
            r[2] >= self.region[2] and r[3] <= self.region[3], \
            f"query region {r} leaves exact region {self.region}"
        return frozenset(p for p in self.points if r[0] <= p[0] <= r[1] and r[2] <= p[1] <= r[3])

    def same_as(self, other: "WindowSet") -> bool:
        r = _meet(self.region, other.region)
        if r[0] > r[1] or r[2] > r[3]:
            raise AssertionError("windows do not overlap")
        return self.inside(r) == other.inside(r)

    def down(self, q: int = 1) -> "WindowSet":
        return down_shift(self, q)

    def closed_nbhd(self) -> "WindowSet":
        pts = set(self.points)
        for x, y in self.points:
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                yy = y + dy
                if self.cols is None or self.cols[0] <= yy <= self.cols[1]:
                    pts.add((x + dx, yy))
        xlo, xhi, ylo, yhi = self.region
        if self.cols is None or ylo > self.cols[0]:
            ylo += 1
        if self.cols is None or yhi < self.cols[1]:
            yhi -= 1
        return WindowSet(frozenset(pts), (xlo + 1, xhi - 1, ylo, yhi), self.cols)

    def __sub__(self, other: "WindowSet") -> "WindowSet":
        return WindowSet(self.points - other.points, _meet(self.region, other.region), self.cols)

    def __and__(self, other: "WindowSet") -> "WindowSet":
        return WindowSet(self.points & other.points, _meet(self.region, other.region), self.cols)

    def __or__(self, other: "WindowSet") -> "WindowSet":
        return WindowSet(self.points | other.points, _meet(self.region, other.region), self.cols)

    def border(self) -> "WindowSet":
        """``N(U) = N[U] \\ U``."""
        return self.closed_nbhd() - self

    def down_border(self) -> "WindowSet":
        """``D(U) = D[U] \\ U``."""
        return self.down(1) - self

    def clip(self, n: int) -> frozenset:
        """Exact intersection with ``[1, n]^2`` (asserts it is covered)."""
        return self.inside((1, n, 1, n))


def down_shift(U: WindowSet, q: int) -> WindowSet:
    pts = frozenset((x - q, y) for x, y in U.points)
    r = U.region
    return WindowSet(pts, (r[0] - q, r[1] - q, r[2], r[3]), U.cols)


def union_of_tiles(ts: TileSystem, p: int, region: Region) -> WindowSet:
    """``U_p`` (tiles ``T_i``, ``i >= p``) inside the strip, exact on ``region``."""
    k, n = ts.k, ts.n
    xlo, xhi, _, _ = region
    pts = set()
    i = p
    # Tiles advance upwards by m rows every full period of labels.
    while True:
        block = [ts.center(j) for j in range(i, i + ts.period)]
        for c in block:
            if c[0] + k >= xlo and c[0] - k <= xhi:
                pts |= lee_sphere(c, k, (xlo, xhi, 1, n))
        if min(c[0] for c in block) - k > xhi:
            break
        i += ts.period
    return WindowSet(frozenset(pts), (xlo, xhi, 1, n), (1, n))


def half_lattice_union(i0: int, j0: int, k: int, region: Region) -> WindowSet:
    """``U_{i0,j0}``: tiles centred on the half lattice ``S_{i0,j0}`` (plane)."""
    xlo, xhi, ylo, yhi = region
    pts = set()
    for c in centers_in(region, k, reach=k):
        i, j = lattice_index(c, k)
        if j > j0 or (j == j0 and i >= i0):
            pts |= lee_sphere(c, k, region)
    return WindowSet(frozenset(pts), region)


# ---------------------------------------------------------------- fast grid sets


class GridBits:
    """Bit-vector sets on ``[1, n]^2`` with a one-cell zero pad.

    Cell ``(x, y)`` is bit ``x * W + y`` with ``W = n + 2``, so shifts by 1
    and by ``W`` implement the four grid moves without wrap-around.
    """

    def __init__(self, n: int):
        self.n = n
        self.W = W = n + 2
        row = ((1 << n) - 1) << 1
        self.valid = sum(row << (x * W) for x in range(1, n + 1))
        self._balls: dict[tuple[Coord, int], int] = {}

    def bit(self, c: Coord) -> int:
        return c[0] * self.W + c[1]

    def from_coords(self, cs: Iterable[Coord]) -> int:
        m = 0
        for c in cs:
            m |= 1 << self.bit(c)
        return m

    def coords(self, mask: int) -> list[Coord]:
        return [divmod(b, self.W) for b in bits(mask)]

    def spread(self, S: int) -> int:
        W = self.W
        return (S | (S << 1) | (S >> 1) | (S << W) | (S >> W)) & self.valid

    def ball(self, c: Coord, k: int) -> int:
        key = (c, k)
        b = self._balls.get(key)
        if b is None:
            n, W = self.n, self.W
            b = 0
            x0, y0 = c
            for x in range(max(1, x0 - k), min(n, x0 + k) + 1):
                r = k - abs(x - x0)
                lo, hi = max(1, y0 - r), min(n, y0 + r)
                if lo <= hi:
                    b |= ((1 << (hi - lo + 1)) - 1) << (x * W + lo)
            self._balls[key] = b
        return b


# ---------------------------------------------------------------- grid graph helpers


def vid(c: Coord, n: int) -> int:
    return (c[0] - 1) * n + (c[1] - 1)


def coord(v: int, n: int) -> Coord:
    x, y = divmod(v, n)
    return (x + 1, y + 1)


def initial_shift(n: int, k: int) -> int:
    """Smallest documented shift with ``[n]^2`` inside ``D^q[U_0]``."""
    return k * math.ceil(n / (k + 1)) + k


def prox_cops(n: int, k: int) -> int:
    return math.ceil((n + 2 * k + 1) / tile_size(k))


class GridProxStrategy(Strategy):
    """Tile-removal proximity strategy on ``G_{n,n}`` with ``h`` cops.

    Round ``t`` (from 1) removes the tiles ``D^q[T'_p] .. D^q[T'_{p+h-1}]``
    with ``q = q0 + t - 1`` and ``p = (t - 1) h``; each tile is removed by
    probing the grid vertex nearest its centre.  Tiles missing the grid are
    skipped.
    """

    name = "grid-prox"
    mode = Mode.PROXIMITY

    def __init__(self, n: int, k: int, h: int, graph: Optional[Graph] = None):
        if n < 1 or k < 1:
            raise ParameterError("grid-prox needs n >= 1 and k >= 1")
        if h < 1:
            raise ParameterError("need at least one cop")
        super().__init__(graph if graph is not None else grid(n), k, h)
        self.n = n
        self.h = h
        self.ts = TileSystem(k, n)
        self.q0 = initial_shift(n, k)

    def round_bound(self) -> int:
        """Generous cap on the rounds needed when ``h`` is sufficient."""
        m = self.ts.m
        return (self.n + 2 * self.k) * (self.n + self.q0 + 2 * m + 2) + 10

    @property
    def guaranteed(self) -> bool:
        return self.h >= prox_cops(self.n, self.k)

    def coord_probes(self, t: int) -> tuple[Coord, ...]:
        q = self.q0 + t - 1
        p = (t - 1) * self.h
        n, k = self.n, self.k
        m, period, base = self.ts.m, self.ts.period, self.ts.base_period
        out: list[Coord] = []
        seen: set[Coord] = set()
        for i in range(p, p + self.h):
            a, j = divmod(i, period)
            x, y = base[j]
            x += a * m - q
            # the same test as clamp + manhattan, with far rows rejected first
            if x < 1 - k or x > n + k:
                continue
            rx, ry = min(max(x, 1), n), min(max(y, 1), n)
            if abs(x - rx) + abs(y - ry) <= k and (rx, ry) not in seen:
                seen.add((rx, ry))
                out.append((rx, ry))
        return tuple(out)

    def initial_state(self):
        return 1

    def probes(self, state):
        return tuple(sorted(vid(c, self.n) for c in self.coord_probes(state)))

    def update(self, state, probes, sig, candidates):
        return state + 1


@dataclass
class InfectionResult:
    cleared: bool
    rounds: int
    sizes: list[int] = field(default_factory=list)
    frames: list[int] = field(default_factory=list)


def simulate_infection(n: int, k: int, strategy, round_bound: int, *, start: Optional[Iterable[Coord]] = None,
                       keep_frames: bool = False) -> InfectionResult:
    """Iterate ``S <- N[S \\ N_k[P_t]]`` on ``G_{n,n}`` from ``S = V``.

    ``strategy`` is a :class:`GridProxStrategy`, any proximity
    :class:`Strategy` built on ``grid(n)``, or a callable ``t -> coords``.
    ``sizes[t-1]`` is the number of survivors right after round ``t``'s probes.
    """
    gb = GridBits(n)
    S = gb.valid if start is None else gb.from_coords(start)
    res = InfectionResult(False, 0)
    if keep_frames:
        res.frames.append(S)
    if not S:
        res.cleared = True
        return res
    if isinstance(strategy, GridProxStrategy):
        probe_at = strategy.coord_probes
    elif isinstance(strategy, Strategy):
        if Mode.parse(strategy.mode) is not Mode.PROXIMITY:
            raise ParameterError("simulate_infection needs a proximity strategy")
        state = [strategy.initial_state()]

        def probe_at(t):
            P = strategy.probes(state[0])
            state[0] = strategy.update(state[0], P, (None,) * len(P), 0)
            return [coord(v, n) for v in P]
    else:
        probe_at = strategy
    for t in range(1, round_bound + 1):
        seen = 0
        for c in probe_at(t):
            seen |= gb.ball(c, k)
        T = S & ~seen
        res.sizes.append(popcount(T))
        res.rounds = t
        if not T:
            res.cleared = True
            if keep_frames:
                res.frames.append(0)
            return res
        S = gb.spread(T)
        if keep_frames:
            res.frames.append(S)
    return res


# ---------------------------------------------------------------- value bracket


@dataclass(frozen=True)
class Bracket:
    n: int
    k: int
    lower: int
    upper: int
    formula_note: str
    published: str
    endgame_budget: int


def published_expression(n: int, k: int) -> str:
    m = tile_size(k)
    base = n // m
    if k >= 1 and 1 <= n % m <= 2 * k * k:
        return str(base)
    return "{%d,%d}" % (base, base + 1)


def grid_zeta_bracket(n: int, k: int) -> Bracket:
    """Lower/upper bounds on the grid value from isoperimetry and tile removal.

    ``lower = floor(n/m) + 1`` since the value strictly exceeds ``n/m`` with
    ``m = 2k^2+2k+1``; ``upper`` is the tile-removal cop count, raised to the
    endgame budget when that is larger (``n+1`` when ``k = 0``).  ``published`` is the closed form quoted for large grids, kept
    alongside for comparison.
    """
    if n < 1 or k < 0:
        raise ParameterError("bracket needs n >= 1, k >= 0")
    m = tile_size(k)
    lower = n // m + 1
    if k == 0:
        upper = n + 1
        budget = n + 1
    else:
        budget = max(prox_cops(n, k), 3 if k == 1 else 2)
        upper = budget
    pub = published_expression(n, k)
    valid = (k >= 2 and n >= m) or (k == 1 and n >= 2 * m)
    pub_high = int(pub.strip("{}").split(",")[-1])
    note = f"published={pub}"
    if valid and pub_high < lower:
        note += f"; published value {pub_high} is below the isoperimetric bound {lower}"
    if not valid:
        note += "; published form not claimed at this size"
    return Bracket(n, k, lower, upper, note, pub, budget)


# ---------------------------------------------------------------- localization endgames


def _b_set(i: int, j: int, n: int) -> list[Coord]:
    """``B_{i,j}``: column ``j`` below row ``i`` and column ``j-1`` from row ``i-1`` up."""
    out = [(x, j) for x in range(1, min(i - 1, n) + 1) if 1 <= j <= n]
    out += [(x, j - 1) for x in range(max(i - 1, 1), n + 1) if 1 <= j - 1 <= n]
    return out


class ZeroVisibilitySweep(Strategy):
    """Column-by-column sweep for ``k = 0`` with ``n + 1`` cops."""

    name = "grid-endgame"

    def __init__(self, n: int, graph: Optional[Graph] = None):
        super().__init__(graph if graph is not None else grid(n), 0, n + 1)
        self.n = n

    def initial_state(self):
        return (1, 1)

    def probes(self, state):
        i, j = state
        if j > self.n:
            return ()
        return tuple(sorted(vid(c, self.n) for c in _b_set(i + 1, j + 1, self.n)))

    def update(self, state, probes, sig, candidates):
        i, j = state
        i += 1
        if i >= self.n + 1:
            i, j = 1, j + 1
        return (i, j)


class GridEndgameStrategy(Strategy):
    """Two-phase localization on ``G_{n,n}`` for ``k >= 1``.

    Phase 1 plays :class:`GridProxStrategy` until a probe returns a finite
    distance.  Phase 2 works on the observed candidate class: the probes are
    drawn from the endgame moves (cops beside the sighting, diagonal pair
    pushes, strip bisection) under the grid's dihedral symmetries, chosen to
    split the robber's possible positions into singletons or a diagonal pair
    moved towards the border.
    """

    name = "grid-endgame"

    def __init__(self, n: int, k: int, cops: int, graph: Optional[Graph] = None):
        if k < 1:
            raise ParameterError("use ZeroVisibilitySweep for k = 0")
        need = max(prox_cops(n, k), 3 if k == 1 else 2)
        if cops < need:
            raise ParameterError(f"grid endgame needs {need} cops for n={n}, k={k}")
        g = graph if graph is not None else grid(n)
        super().__init__(g, k, cops)
        self.n = n
        self.phase1 = GridProxStrategy(n, k, prox_cops(n, k), g)
        self.c2 = 3 if k == 1 else 2
        self._cache: dict[int, tuple[int, ...]] = {}
        self._dead: set[int] = set()

    def initial_state(self):
        return ("sweep", 1)

    def probes(self, state):
        if state[0] == "sweep":
            return self.phase1.probes(state[1])
        return self.endgame_probes(state[1])

    def update(self, state, probes, sig, candidates):
        if state[0] == "sweep" and all(d is None for d in sig):
            return ("sweep", state[1] + 1)
        return ("chase", candidates)

    # -- phase 2

    def endgame_probes(self, C: int) -> tuple[int, ...]:
        hit = self._cache.get(C)
        return hit if hit is not None else self._choose(C)

    def _measure(self, X: int) -> tuple[int, int]:
        return (popcount(X), self._potential(X))

    def _choose(self, C: int) -> tuple[int, ...]:
        P = self._solve(C)
        if P is None:
            # no certified move; fall back to the first scripted move
            return next(iter(self._candidates(C, self.graph.spread(C))), ())
        return P

    def _solve(self, X: int) -> Optional[tuple[int, ...]]:
        """A move whose leftover classes are all strictly smaller and solved.

        Smaller means lower ``(size, distance to border)``; the order is
        well founded, so a failure at ``X`` is final and is memoized too.
        """
        if X in self._cache:
            return self._cache[X]
        if X in self._dead:
            return None
        g = self.graph
        R = g.spread(X)
        rings = g.dm.rings(self.k)
        mx = self._measure(X)
        scored = []
        for P in self._candidates(X, R):
            bad = [c for c in split(R, P, rings) if c & (c - 1)]
            if not bad:
                self._cache[X] = P
                return P
            ms = [self._measure(c) for c in bad]
            if max(ms) < mx:
                scored.append((max(ms), len(bad), P, bad))
        scored.sort(key=lambda t: (t[0], t[1]))
        for _, _, P, bad in scored:
            if all(self._solve(c) is not None for c in bad):
                self._cache[X] = P
                return P
        self._dead.add(X)
        return None

    def _potential(self, c: int) -> int:
        n = self.n
        out = n
        for v in bits(c):
            x, y = coord(v, n)
            out = min(out, x - 1, n - x, y - 1, n - y)
        return out

    def _candidates(self, C: int, R: int):
        """Scripted moves first, then every probe set near the candidates."""
        n, k, c2 = self.n, self.k, self.c2
        yielded = set()
        for P in self._scripted_moves(C, R):
            P = tuple(sorted(set(vid(p, n) for p in P if 1 <= p[0] <= n and 1 <= p[1] <= n)))
            if len(P) == c2 and P not in yielded:
                yielded.add(P)
                yield P
        dm = self.graph.dm
        near = sorted(v for v in range(self.graph.n)
                      if any(dm.dist[v][u] <= k for u in bits(R)))
        from itertools import combinations
        for P in combinations(near, min(c2, len(near))):
            if P not in yielded:
                yield P

    def _scripted_moves(self, C: int, R: int):
        n, k = self.n, self.k
        cs = [coord(v, n) for v in bits(C)]
        syms = [lambda a, b: (a, b), lambda a, b: (-a, b), lambda a, b: (a, -b), lambda a, b: (-a, -b),
                lambda a, b: (b, a), lambda a, b: (-b, a), lambda a, b: (b, -a), lambda a, b: (-b, -a)]
        if len(cs) == 2:
            (x1, y1), (x2, y2) = sorted(cs)
            if abs(x1 - x2) == 1 and abs(y1 - y2) == 1:
                # diagonal pair push: for the pair {o, o+(1,1)} play o+(1,-1), o+(2,1)
                for f in syms:
                    for o in cs:
                        other = [c for c in cs if c != o][0]
                        d = (other[0] - o[0], other[1] - o[1])
                        if f(1, 1) != d:
                            continue
                        if k == 1:
                            rel = [(1, -1), (2, 1), (-1, 1)]
                        else:
                            rel = [(1, -1), (2, 1)]
                        yield [(o[0] + f(*r)[0], o[1] + f(*r)[1]) for r in rel]
            if abs(x1 - x2) + abs(y1 - y2) in (1, 2):
                for f in syms:
                    o = cs[0]
                    for rel in ([(-1, -2), (1, -2), (0, -1)], [(-1, 0), (1, 0), (0, 1)]):
                        yield [(o[0] + f(*r)[0], o[1] + f(*r)[1]) for r in rel[: self.c2]]
        # neighbours of a candidate, as played right after a sighting
        for x, y in cs:
            if k == 1:
                yield [(x - 1, y), (x + 1, y), (x, y + 1)]
                yield [(x - 1, y), (x + 1, y), (x, y - 1)]
            else:
                yield [(x - 1, y), (x + 1, y)]
                yield [(x, y - 1), (x, y + 1)]
                yield [(x, y), (x + k // 2, y + k // 2)]
                yield [(x, y), (x + k // 2, y - k // 2)]


def grid_endgame_strategy(n: int, k: int, cops: Optional[int] = None) -> Strategy:
    if n < 2:
        raise ParameterError("grid endgame needs n >= 2")
    if k == 0:
        if cops is not None and cops < n + 1:
            raise ParameterError(f"k = 0 sweep needs n + 1 = {n + 1} cops")
        return ZeroVisibilitySweep(n)
    if cops is None:
        cops = max(prox_cops(n, k), 3 if k == 1 else 2)
    return GridEndgameStrategy(n, k, cops)


def grid_prox_strategy(n: int, k: int, h: Optional[int] = None) -> GridProxStrategy:
    return GridProxStrategy(n, k, prox_cops(n, k) if h is None else h)
