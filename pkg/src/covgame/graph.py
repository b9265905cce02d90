"""Observation graph: which stations see each other's transmit power."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidArgumentError

__all__ = ["ObservationGraph", "parse_edge_list", "format_edge_list"]


@dataclass(frozen=True)
class ObservationGraph:
    """Undirected simple graph on vertices 1..n."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise InvalidArgumentError("graph needs at least one vertex")
        canon = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise InvalidArgumentError(f"self-loop at vertex {a}")
            if not (1 <= a <= n and 1 <= b <= n):
                raise InvalidArgumentError(f"edge ({a}, {b}) has a vertex outside 1..{n}")
            canon.add((min(a, b), max(a, b)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(canon))
        adj = {v: set() for v in range(1, n + 1)}
        for a, b in canon:
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in adj.items()})

    @classmethod
    def complete(cls, n: int) -> "ObservationGraph":
        return cls(n, [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)])

    @classmethod
    def cycle(cls, n: int) -> "ObservationGraph":
        if n < 3:
            raise InvalidArgumentError("a cycle needs at least three vertices")
        return cls(n, [(k, k % n + 1) for k in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> "ObservationGraph":
        return cls(n, [(k, k + 1) for k in range(1, n)])

    def _check(self, v):
        if not (isinstance(v, int) and 1 <= v <= self.n):
            raise InvalidArgumentError(f"invalid vertex {v!r}")

    def neighbors(self, i: int) -> frozenset:
        self._check(i)
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def without_edge(self, a: int, b: int) -> "ObservationGraph":
        return ObservationGraph(self.n, self.edges - {(min(a, b), max(a, b))})

    def _reach(self, start, removed=None):
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self._adj[v]:
                if w != removed and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def is_connected(self, removed: int | None = None) -> bool:
        rest = [v for v in range(1, self.n + 1) if v != removed]
        if not rest:
            return True
        return len(self._reach(rest[0], removed)) == len(rest)

    def is_two_connected(self) -> bool:
        """Connected, and still connected after deleting any one vertex.

        A single vertex qualifies vacuously; two vertices never do.
        """
        if self.n == 1:
            return True
        if self.n == 2:
            return False
        return self.is_connected() and all(self.is_connected(v) for v in range(1, self.n + 1))

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def shortest_path_lengths(self) -> dict:
        """All-pairs hop counts from breadth-first search; ``math.inf`` if unreachable."""
        table = {}
        for s in range(1, self.n + 1):
            dist = {v: math.inf for v in range(1, self.n + 1)}
            dist[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if dist[w] == math.inf:
                        dist[w] = dist[v] + 1
                        queue.append(w)
            table[s] = dist
        return table


def parse_edge_list(text: str, n: int) -> ObservationGraph:
    """Read one ``i j`` pair per line (1-based); blank lines and ``#`` comments are skipped."""
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidArgumentError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise InvalidArgumentError(f"line {lineno}: vertex ids must be integers") from None
    return ObservationGraph(n, edges)


def format_edge_list(graph: ObservationGraph) -> str:
    return "".join(f"{a} {b}\n" for a, b in sorted(graph.edges))
