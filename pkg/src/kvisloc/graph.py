"""Graph substrate: representation, generators, distances and metrics.

Vertex sets are passed around as Python ints used as bit vectors (bit ``v``
set means vertex ``v`` is a member); the solver and the verifier both rely on
this encoding.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ParameterError, StructuralError

INF = math.inf


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the members of a bit-vector set in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite undirected simple graph on vertices ``0..n-1``.

    ``labels`` optionally carries ``(row, col)`` coordinates (grids). ``origin``
    maps vertices created by :func:`subdivide` to the base edge they came from.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[tuple[int, int], ...] | None = None
    origin: Mapping[int, tuple[int, int]] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("graph needs at least one vertex")
        canon = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise StructuralError(f"edge {(u, v)} outside vertex range 0..{self.n - 1}")
            if u == v:
                raise StructuralError(f"self-loop at {u}; reflexivity is implicit")
            e = (u, v) if u < v else (v, u)
            if e in canon:
                raise StructuralError(f"parallel edge {e}")
            canon.add(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.labels is not None:
            labels = tuple((int(a), int(b)) for a, b in self.labels)
            if len(labels) != self.n:
                raise StructuralError("labels must list one coordinate per vertex")
            object.__setattr__(self, "labels", labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.edges, self.labels) == (other.n, other.edges, other.labels)

    def __hash__(self):
        return hash((self.n, self.edges, self.labels))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def closed_nbr(self) -> tuple[int, ...]:
        """Bit vector of N[v] for every vertex."""
        return tuple((1 << v) | to_mask(self.adj[v]) for v in range(self.n))

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def is_connected(self) -> bool:
        return _bfs(self, 0).count(-1) == 0

    @cached_property
    def is_tree(self) -> bool:
        return self.is_connected and len(self.edges) == self.n - 1

    @cached_property
    def dm(self) -> "DistanceMatrix":
        return all_pairs_distances(self)

    def index_of(self, label: tuple[int, int]) -> int:
        if self.labels is None:
            raise ParameterError("graph has no coordinate labels")
        try:
            return self._label_index[tuple(label)]
        except KeyError:
            raise ParameterError(f"no vertex labelled {label}") from None

    @cached_property
    def _label_index(self) -> dict[tuple[int, int], int]:
        return {lab: i for i, lab in enumerate(self.labels or ())}

    @cached_property
    def _spread_tables(self) -> list[list[int]]:
        # one 256-entry table per byte of the vertex mask
        cn = self.closed_nbr
        tables = []
        for base in range(0, self.n, 8):
            t = [0] * 256
            for b in range(1, 256):
                low = b & -b
                v = base + low.bit_length() - 1
                t[b] = t[b ^ low] | (cn[v] if v < self.n else 0)
            tables.append(t)
        return tables

    def spread(self, mask: int) -> int:
        """Closed neighbourhood N[S] of a bit-vector set."""
        out = 0
        i = 0
        tables = self._spread_tables
        while mask:
            b = mask & 255
            if b:
                out |= tables[i][b]
            mask >>= 8
            i += 1
        return out


def _bfs(g: Graph, src: int) -> list[int]:
    dist = [-1] * g.n
    dist[src] = 0
    q = deque([src])
    adj = g.adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


class DistanceMatrix:
    """All-pairs hop distances, with cached ring and ball bit vectors."""

    __slots__ = ("n", "dist", "_rings", "_balls")

    def __init__(self, dist: Sequence[Sequence[int]]):
        self.n = len(dist)
        self.dist = tuple(tuple(row) for row in dist)
        self._rings: dict[int, tuple[tuple[int, ...], ...]] = {}
        self._balls: dict[int, tuple[int, ...]] = {}

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        return self.dist[u][v]

    def rings(self, k: int) -> tuple[tuple[int, ...], ...]:
        """``rings(k)[p][d]`` is the set of vertices at distance exactly ``d`` from ``p``, ``d <= k``."""
        r = self._rings.get(k)
        if r is None:
            out = []
            for p in range(self.n):
                row = [0] * (k + 1)
                for v, d in enumerate(self.dist[p]):
                    if d <= k:
                        row[d] |= 1 << v
                out.append(tuple(row))
            r = self._rings[k] = tuple(out)
        return r

    def balls(self, k: int) -> tuple[int, ...]:
        """Closed k-balls as bit vectors."""
        b = self._balls.get(k)
        if b is None:
            b = self._balls[k] = tuple(
                to_mask(v for v, d in enumerate(row) if d <= k) for row in self.dist
            )
        return b

    @property
    def diameter(self) -> int:
        return max(max(row) for row in self.dist)


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    rows = [_bfs(g, s) for s in range(g.n)]
    if any(d < 0 for d in rows[0]):
        raise StructuralError("graph is disconnected")
    return DistanceMatrix(rows)


def ball(g: Graph, v: int, k: int) -> frozenset[int]:
    if k < 0:
        raise ParameterError("ball radius must be non-negative")
    row = g.dm.dist[v]
    return frozenset(u for u in range(g.n) if row[u] <= k)


def ball_mask(g: Graph, v: int, k: int) -> int:
    return g.dm.balls(k)[v]


@dataclass(frozen=True)
class Metrics:
    radius: int
    center: tuple[int, ...]
    girth: float
    max_degree: int
    diameter: int


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``inf`` for forests."""
    best = INF
    adj = g.adj
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def graph_metrics(g: Graph) -> Metrics:
    dist = g.dm.dist
    ecc = [max(row) for row in dist]
    rad = min(ecc)
    return Metrics(
        radius=rad,
        center=tuple(v for v in range(g.n) if ecc[v] == rad),
        girth=girth(g),
        max_degree=max((len(a) for a in g.adj), default=0),
        diameter=max(ecc),
    )


# ---------------------------------------------------------------- generators


def path(n: int) -> Graph:
    if n < 1:
        raise ParameterError("path needs n >= 1")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ParameterError("cycle needs n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star(leaves: int) -> Graph:
    """K_{1,leaves} with the hub at vertex 0."""
    if leaves < 1:
        raise ParameterError("star needs at least one leaf")
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def spider(legs: Sequence[int]) -> Graph:
    """Hub 0; leg ``j`` occupies consecutive ids, nearest-to-hub first."""
    legs = list(legs)
    if len(legs) < 3:
        raise ParameterError("spider needs at least 3 legs")
    if any(l < 1 for l in legs):
        raise ParameterError("spider legs must have length >= 1")
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph(nxt, tuple(edges))


def complete_qary_tree(h: int, q: int) -> Graph:
    """T(h, q) in breadth-first order, root 0."""
    if h < 0 or q < 1:
        raise ParameterError("complete q-ary tree needs h >= 0 and q >= 1")
    edges = []
    level = [0]
    nxt = 1
    for _ in range(h):
        new = []
        for u in level:
            for _ in range(q):
                edges.append((u, nxt))
                new.append(nxt)
                nxt += 1
        level = new
    return Graph(nxt, tuple(edges))


def grid(n: int, cols: int | None = None) -> Graph:
    """n x cols Cartesian grid; vertex (x, y) has id (x-1)*cols + (y-1)."""
    cols = n if cols is None else cols
    if n < 1 or cols < 1:
        raise ParameterError("grid sides must be positive")
    edges = []
    labels = []
    for x in range(1, n + 1):
        for y in range(1, cols + 1):
            v = (x - 1) * cols + (y - 1)
            labels.append((x, y))
            if y < cols:
                edges.append((v, v + 1))
            if x < n:
                edges.append((v, v + cols))
    return Graph(n * cols, tuple(edges), tuple(labels))


FAMILIES = ("path", "cycle", "star", "spider", "complete_qary_tree", "grid")


def gen_graph(family: str, *params) -> Graph:
    """Dispatch to a named generator.

    ``spider`` takes the leg lengths (either as one sequence or as separate
    integers); every other family takes plain positive integers.
    """
    if family == "spider":
        legs = params[0] if len(params) == 1 and not isinstance(params[0], int) else params
        return spider(legs)
    if any(not isinstance(p, int) or p < 1 for p in params):
        if not (family == "complete_qary_tree" and len(params) == 2 and params[0] == 0):
            raise ParameterError(f"{family}: parameters must be positive integers, got {params}")
    try:
        gen = {
            "path": path,
            "cycle": cycle,
            "star": star,
            "complete_qary_tree": complete_qary_tree,
            "grid": grid,
        }[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}; expected one of {FAMILIES}") from None
    try:
        return gen(*params)
    except TypeError as exc:
        raise ParameterError(f"{family}: {exc}") from None


# ---------------------------------------------------------------- subdivision


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SubdivisionPlan:
    base: Graph
    counts: Mapping[tuple[int, int], int]

    def __post_init__(self):
        norm = {}
        edge_set = set(self.base.edges)
        for (u, v), c in self.counts.items():
            e = _edge(u, v)
            if e not in edge_set:
                raise ParameterError(f"edge {e} is not in the base graph")
            if c < 0:
                raise ParameterError(f"negative subdivision count on {e}")
            norm[e] = int(c)
        object.__setattr__(self, "counts", norm)

    def count(self, u: int, v: int) -> int:
        return self.counts.get(_edge(u, v), 0)

    @property
    def added(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> str:
        counts = [[u, v, c] for (u, v), c in sorted(self.counts.items())]
        return json.dumps({"base": json.loads(to_json(self.base)), "counts": counts})

    @classmethod
    def from_json(cls, text: str) -> "SubdivisionPlan":
        obj = json.loads(text)
        base = graph_from_obj(obj["base"])
        return cls(base, {(u, v): c for u, v, c in obj["counts"]})


def subdivide(plan: SubdivisionPlan) -> Graph:
    """Replace each base edge by a path through ``counts[e]`` new vertices.

    New vertices get ids after the base ids, in sorted edge order, ordered
    from the smaller base endpoint to the larger one.
    """
    base = plan.base
    edges = []
    origin = {}
    nxt = base.n
    for u, v in base.edges:
        c = plan.counts.get((u, v), 0)
        prev = u
        for _ in range(c):
            edges.append((prev, nxt))
            origin[nxt] = (u, v)
            prev = nxt
            nxt += 1
        edges.append((prev, v))
    return Graph(nxt, tuple(edges), origin=origin)


def uniform_plan(base: Graph, count: int) -> SubdivisionPlan:
    return SubdivisionPlan(base, {e: count for e in base.edges})


# ---------------------------------------------------------------- I/O


def to_json(g: Graph) -> str:
    obj: dict = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if g.labels is not None:
        obj["labels"] = [list(l) for l in g.labels]
    return json.dumps(obj)


def graph_from_obj(obj: Mapping) -> Graph:
    try:
        n = int(obj["n"])
        edges = tuple((int(u), int(v)) for u, v in obj["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed graph JSON: {exc}") from None
    labels = obj.get("labels")
    return Graph(n, edges, tuple(tuple(l) for l in labels) if labels is not None else None)


def from_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructuralError(f"invalid JSON: {exc}") from None
    return graph_from_obj(obj)


def to_edgelist(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def from_edgelist(text: str) -> Graph:
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise StructuralError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    n = 1 + max((max(e) for e in edges), default=0)
    return Graph(n, tuple(edges))


def to_dot(g: Graph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(g.n)]
    lines += [f"  {u} -- {v};" for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph relabelled densely; returns it with the new->old map."""
    keep = sorted(set(vertices))
    idx = {v: i for i, v in enumerate(keep)}
    edges = tuple((idx[u], idx[v]) for u, v in g.edges if u in idx and v in idx)
    labels = tuple(g.labels[v] for v in keep) if g.labels is not None else None
    return Graph(len(keep), edges, labels), keep


def from_networkx(nxg) -> Graph:
    nodes = sorted(nxg.nodes())
    idx = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), tuple((idx[u], idx[v]) for u, v in nxg.edges()))
