"""Core graph abstractions.

Generic undirected graphs are stored explicitly; grid graphs R[n,d] and
Hamming graphs H[n,d] share the vertex set [n]^d (1-based tuples) and are
kept implicit because their adjacency is computable.  The boustrophedon
Hamiltonian path of R[n,d] lives here as well since the TSP generator
orders its gadgets along it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import InputError

GridPoint = tuple  # d-tuple of ints, components in [1, n]


@dataclass(frozen=True)
class Graph:
    """Explicit undirected graph on vertices 0..vertex_count-1, no self-loops."""

    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InputError("vertex_count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InputError(f"edge {e} has endpoint outside vertex range")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @staticmethod
    def from_edges(vertex_count, edges):
        return Graph(vertex_count, frozenset((min(u, v), max(u, v)) for u, v in edges))

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def max_degree(self):
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0)

    def neighbors(self, v):
        out = set()
        for a, b in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def has_isolated_vertex(self):
        seen = set()
        for u, v in self.edges:
            seen.add(u)
            seen.add(v)
        return len(seen) < self.vertex_count


@dataclass(frozen=True)
class GridGraph:
    """d-dimensional grid R[n,d]: vertex set [n]^d, edges at L1 distance 1."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise InputError("grid requires n >= 1 and d >= 1")

    def vertices(self):
        return product(range(1, self.n + 1), repeat=self.d)

    def vertex_count(self):
        return self.n**self.d

    def contains(self, p):
        return len(p) == self.d and all(1 <= c <= self.n for c in p)

    def adjacent(self, a, b):
        return grid_adjacent(self.n, self.d, a, b)

    def neighbors(self, p):
        _check_point(self.n, self.d, p)
        out = []
        for i in range(self.d):
            for s in (-1, 1):
                c = p[i] + s
                if 1 <= c <= self.n:
                    out.append(p[:i] + (c,) + p[i + 1 :])
        return out

    def edges(self):
        for p in self.vertices():
            for i in range(self.d):
                if p[i] < self.n:
                    yield p, p[:i] + (p[i] + 1,) + p[i + 1 :]


@dataclass(frozen=True)
class HammingGraph:
    """Hamming graph H[n,d]: vertex set [n]^d, edges at Hamming distance 1."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise InputError("Hamming graph requires n >= 1 and d >= 1")

    def vertices(self):
        return product(range(1, self.n + 1), repeat=self.d)

    def vertex_count(self):
        return self.n**self.d

    def contains(self, p):
        return len(p) == self.d and all(1 <= c <= self.n for c in p)

    def adjacent(self, a, b):
        return hamming_adjacent(self.n, self.d, a, b)

    def neighbors(self, p):
        _check_point(self.n, self.d, p)
        out = []
        for i in range(self.d):
            for c in range(1, self.n + 1):
                if c != p[i]:
                    out.append(p[:i] + (c,) + p[i + 1 :])
        return out

    def edges(self):
        for p in self.vertices():
            for i in range(self.d):
                for c in range(p[i] + 1, self.n + 1):
                    yield p, p[:i] + (c,) + p[i + 1 :]


def _check_point(n, d, p):
    if len(p) != d:
        raise InputError(f"point {p} does not have dimension {d}")
    if not all(isinstance(c, int) and 1 <= c <= n for c in p):
        raise InputError(f"point {p} has a component outside [1, {n}]")


def grid_adjacent(n, d, a, b):
    """True iff a and b are adjacent in R[n,d] (sum of |a_i - b_i| is 1)."""
    _check_point(n, d, a)
    _check_point(n, d, b)
    return sum(abs(x - y) for x, y in zip(a, b)) == 1


def hamming_adjacent(n, d, a, b):
    """True iff a and b differ in exactly one coordinate (by any amount)."""
    _check_point(n, d, a)
    _check_point(n, d, b)
    return sum(1 for x, y in zip(a, b) if x != y) == 1


def grid_snake_path(n, d):
    """Boustrophedon Hamiltonian path of R[n,d].

    The first coordinate sweeps fastest, reversing direction whenever any
    slower coordinate advances, so consecutive points are grid-adjacent.
    Returns the n^d points in visiting order.
    """
    if n < 1 or d < 1:
        raise InputError("snake path requires n >= 1 and d >= 1")

    def rec(dim):
        if dim == 1:
            return [(c,) for c in range(1, n + 1)]
        tail = rec(dim - 1)
        out = []
        for idx, c in enumerate(range(1, n + 1)):
            block = tail if idx % 2 == 0 else list(reversed(tail))
            out.extend(p + (c,) for p in block)
        return out

    return rec(d)
