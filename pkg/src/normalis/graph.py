"""Vertex-indexed undirected graphs drawn on a point set."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Space


def canonical_edges(edges) -> tuple[tuple[int, int], ...]:
    out = set()
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise ValueError(f"loop at vertex {i}")
        out.add((i, j) if i < j else (j, i))
    return tuple(sorted(out))


@dataclass(frozen=True)
class GeoGraph:
    """Undirected graph on vertices ``0..n-1``.

    Edges are stored as sorted ``(i, j)`` tuples with ``i < j``.  Edges are
    drawn as segments (plane, space3) or minor great-circle arcs (sphere).
    ``colors`` and ``crossing_class`` are optional per-edge annotations.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    space: Space
    colors: dict = field(default_factory=dict, compare=False)
    crossing_class: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        edges = canonical_edges(self.edges)
        for i, j in edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge {(i, j)} out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        i, j = edge
        return ((i, j) if i < j else (j, i)) in self.edge_set

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def issubset(self, other: "GeoGraph") -> bool:
        return self.edge_set <= other.edge_set

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def with_edges(self, edges, **annotations) -> "GeoGraph":
        return GeoGraph(self.n, tuple(edges), self.space, **annotations)

    def to_dict(self) -> dict:
        d = {"n": self.n, "space": self.space.value, "edges": [list(e) for e in self.edges]}
        if self.colors:
            d["colors"] = {f"{i}-{j}": c for (i, j), c in sorted(self.colors.items())}
        if self.crossing_class:
            d["crossing_class"] = {f"{i}-{j}": c for (i, j), c in sorted(self.crossing_class.items())}
        return d
