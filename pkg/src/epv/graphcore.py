"""Simple undirected graphs, the graph operators used in the energy arguments,
and exact combinatorial counters (girth, 4-cycles, closed 4-walks)."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSize, EmptyList, Infeasible, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 0:
            raise BadSize(f"negative vertex count {self.n}")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {(u, v)} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Normalise pairs to ``u < v``; loops raise, duplicates collapse."""
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            es.add((u, v) if u < v else (v, u))
        return cls(n, frozenset(es))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_lists(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency_lists]

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        if self.edges:
            idx = np.array(sorted(self.edges))
            a[idx[:, 0], idx[:, 1]] = 1
            a[idx[:, 1], idx[:, 0]] = 1
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def bipartite_double(g: Graph) -> Graph:
    """Vertex ``(u, 0)`` gets id u and ``(u, 1)`` gets id ``n + u``."""
    n = g.n
    edges = set()
    for u, v in g.edges:
        edges.add((u, n + v))
        edges.add((v, n + u))
    return Graph.from_edges(2 * n, edges)


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    if not gs:
        raise EmptyList("disjoint_union needs at least one graph")
    offset, edges = 0, []
    for g in gs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Graph(offset, frozenset(edges))


def complete_bipartite(k: int) -> Graph:
    if k < 1:
        raise BadSize("complete_bipartite needs k >= 1")
    return Graph.from_edges(2 * k, ((i, k + j) for i in range(k) for j in range(k)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise BadSize("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise BadSize("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


_FAMILIES = {"complete_bipartite": complete_bipartite, "cycle": cycle, "path": path}


def standard_family(name: str, size: int) -> Graph:
    try:
        build = _FAMILIES[name]
    except KeyError:
        raise BadSize(f"unknown family {name!r}; expected one of {sorted(_FAMILIES)}") from None
    return build(size)


def is_regular(g: Graph) -> int | None:
    degs = set(g.degrees())
    if len(degs) == 1:
        return degs.pop()
    return None if degs else 0


def bipartition(g: Graph) -> tuple[list[int], list[int]] | None:
    """Two colour classes from BFS 2-colouring, or None if g has an odd cycle."""
    colour = [-1] * g.n
    adj = g.adjacency_lists
    for s in range(g.n):
        if colour[s] != -1:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return [v for v in range(g.n) if colour[v] == 0], [v for v in range(g.n) if colour[v] == 1]


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    adj = g.adjacency_lists
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def girth(g: Graph) -> float:
    """Shortest cycle length by BFS from every vertex; ``math.inf`` for forests."""
    adj = g.adjacency_lists
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            # nothing shorter than best can be found past this depth
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
        if best == 3:
            break
    return best


def _common_neighbour_counts(g: Graph) -> np.ndarray:
    a = g.adjacency_matrix(np.int64)
    return a @ a


def count_4cycles(g: Graph) -> int:
    """Distinct 4-cycles.  Each one has two diagonals, so summing
    C(common(u, v), 2) over unordered pairs counts it twice."""
    w2 = _common_neighbour_counts(g)
    iu = np.triu_indices(g.n, k=1)
    c = w2[iu]
    return int((c * (c - 1) // 2).sum()) // 2


def closed_walks4(g: Graph) -> int:
    """tr A^4 in exact integer arithmetic: sum of squared 2-walk counts."""
    w2 = _common_neighbour_counts(g)
    return int((w2 * w2).sum())


def random_regular(n: int, k: int, seed: int) -> Graph:
    """Pairing model; any loop or repeated edge restarts the whole pairing."""
    if k < 0 or k >= n or (n * k) % 2:
        raise Infeasible(f"no simple {k}-regular graph on {n} vertices")
    rng = random.Random(seed)
    all_stubs = [v for v in range(n) for _ in range(k)]
    while True:
        # match the last open stub to a uniform other one: a uniform perfect
        # matching, built lazily so a bad pair aborts the attempt early
        stubs = all_stubs[:]
        edges = set()
        while stubs:
            u = stubs.pop()
            j = rng.randrange(len(stubs))
            stubs[j], stubs[-1] = stubs[-1], stubs[j]
            v = stubs.pop()
            e = (u, v) if u < v else (v, u)
            if u == v or e in edges:
                break
            edges.add(e)
        else:
            return Graph(n, frozenset(edges))


# -- edge-list files ---------------------------------------------------------


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path: str | PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(g))


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split(" ")
    if len(parts) != count or not all(p.isdigit() for p in parts):
        raise ParseError(f"expected {count} space-separated non-negative integers, got {line!r}", lineno)
    return [int(p) for p in parts]


def parse_graph(text: str) -> Graph:
    header = None
    edges = set()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = _ints(line, lineno, 2)
            continue
        u, v = _ints(line, lineno, 2)
        n = header[0]
        if not u < v:
            raise ParseError(f"edge endpoints must satisfy u < v, got {u} {v}", lineno)
        if v >= n:
            raise ParseError(f"endpoint {v} out of range for n={n}", lineno)
        if (u, v) in edges:
            raise ParseError(f"duplicate edge {u} {v}", lineno)
        edges.add((u, v))
    if header is None:
        raise ParseError("missing header line '<n> <edge_count>'")
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], frozenset(edges))


def read_graph(path: str | PathLike) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())
