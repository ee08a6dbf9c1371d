"""2-skeleta of the Rips subcomplexes on metric spheres."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator

from ..group.ball import CayleyBall, DistanceUnavailable

DEFAULT_TRIANGLE_BUDGET = 5_000_000


class ComplexTooLarge(RuntimeError):
    pass


class InsufficientRadius(DistanceUnavailable):
    pass


@dataclass
class SphereComplex:
    """Clique 2-skeleton on ``S_n`` for Rips parameter ``D``.

    ``vertices`` are ball indices in shortlex order; edges and triangles use
    local vertex positions.  When every pair of sphere points is within ``D``
    (``2n <= D``) the complex is a full simplex and ``complete`` is set; its
    edges and triangles are then generated on demand rather than stored.
    """

    n: int
    D: int
    vertices: list[int]
    complete: bool = False
    _edges: list[tuple[int, int]] = field(default_factory=list, repr=False)
    _triangles: list[tuple[int, int, int]] = field(default_factory=list, repr=False)
    _nbrs: list[set[int]] | None = field(default=None, repr=False)
    words: list[str] = field(default_factory=list, repr=False)
    clique: bool = True
    _tri_set: set[tuple[int, int, int]] | None = field(default=None, repr=False)

    @classmethod
    def abstract(cls, labels: list[str], edges, triangles=(), clique: bool = False) -> "SphereComplex":
        """A complex given by explicit simplices (not necessarily a clique complex)."""
        es = sorted({(min(a, b), max(a, b)) for a, b in edges if a != b})
        ts = sorted({tuple(sorted(t)) for t in triangles})
        for a, b, c in ts:
            for e in ((a, b), (a, c), (b, c)):
                if e not in es:
                    es.append(e)
        es.sort()
        k = cls(-1, -1, list(range(len(labels))), False, es, ts, None, list(labels), clique)
        if not clique:
            k._tri_set = set(ts)
        return k

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return comb(len(self.vertices), 2) if self.complete else len(self._edges)

    @property
    def n_triangles(self) -> int:
        return comb(len(self.vertices), 3) if self.complete else len(self._triangles)

    def iter_edges(self) -> Iterator[tuple[int, int]]:
        if self.complete:
            return combinations(range(len(self.vertices)), 2)
        return iter(self._edges)

    def iter_triangles(self) -> Iterator[tuple[int, int, int]]:
        if self.complete:
            return combinations(range(len(self.vertices)), 3)
        return iter(self._triangles)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(self.iter_edges())

    @property
    def triangles(self) -> list[tuple[int, int, int]]:
        if self.complete and self.n_triangles > DEFAULT_TRIANGLE_BUDGET:
            raise ComplexTooLarge(f"full simplex on {self.n_vertices} vertices has {self.n_triangles} triangles")
        return list(self.iter_triangles())

    def neighbours(self, i: int) -> set[int]:
        if self.complete:
            return set(range(len(self.vertices))) - {i}
        if self._nbrs is None:
            nb: list[set[int]] = [set() for _ in self.vertices]
            for a, b in self._edges:
                nb[a].add(b)
                nb[b].add(a)
            self._nbrs = nb
        return self._nbrs[i]

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and (self.complete or j in self.neighbours(i))

    def spans_simplex(self, vs) -> bool:
        """Whether a vertex multiset spans a simplex of the 2-skeleton (repeats allowed)."""
        s = sorted(set(vs))
        if len(s) > 3:
            return False
        if any(not self.adjacent(a, b) for a, b in combinations(s, 2)):
            return False
        if len(s) == 3 and not self.clique:
            return self.has_triangle(*s)
        return True

    def has_triangle(self, a: int, b: int, c: int) -> bool:
        if self._tri_set is not None:
            return tuple(sorted((a, b, c))) in self._tri_set
        # clique complex: three pairwise adjacent vertices always span a triangle
        return self.adjacent(a, b) and self.adjacent(b, c) and self.adjacent(a, c)

    def position(self, element: int) -> int:
        """Local vertex position of a ball element."""
        if self.n < 0:
            return element
        start = self.vertices[0] if self.vertices else 0
        pos = element - start  # sphere elements are contiguous
        if not 0 <= pos < len(self.vertices) or self.vertices[pos] != element:
            raise KeyError(f"element {element} is not a vertex of K_{self.n}")
        return pos

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "vertices": list(self.words),
            "edges": [list(e) for e in self.iter_edges()],
            "triangles": [list(t) for t in self.iter_triangles()],
        }

    def to_dot(self) -> str:
        lines = [f'graph K{self.n} {{']
        for i, w in enumerate(self.words):
            lines.append(f'  {i} [label="{w}"];')
        for a, b in self.iter_edges():
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def sphere_neighbour_lists(ball: CayleyBall, n: int, D: int) -> list[set[int]]:
    """For each vertex of S_n (local position), the positions within distance D."""
    sphere = ball.sphere(n)
    start = sphere.start
    out: list[set[int]] = []
    for g in sphere:
        dist = ball.bfs([g], D)
        out.append({h - start for h in dist if h in sphere and h != g})
    return out


def build_sphere_complex(ball: CayleyBall, n: int, D: int,
                         triangle_budget: int = DEFAULT_TRIANGLE_BUDGET) -> SphereComplex:
    """Exact clique 2-skeleton of the Rips complex on S_n.

    Distances up to ``D`` between points of ``S_n`` are certified by BFS inside
    the ball, which requires radius ``n + ceil(D/2)``; the builder refuses
    smaller balls.  If ``2n <= D`` the identity already witnesses every pair,
    so the full simplex is returned without any distance computation.
    """
    if D < 0:
        raise ValueError("Rips parameter must be non-negative")
    sphere = ball.sphere(n)
    vertices = list(sphere)
    words = [ball.presentation.compact(ball.words[g]) for g in vertices]
    if 2 * n <= D:
        return SphereComplex(n, D, vertices, complete=True, words=words)
    need = n + (D + 1) // 2
    if ball.radius < need:
        raise InsufficientRadius(f"K_{n} with D={D} needs a ball of radius {need}, have {ball.radius}")
    nbrs = sphere_neighbour_lists(ball, n, D)
    edges = [(a, b) for a in range(len(vertices)) for b in sorted(nbrs[a]) if b > a]
    triangles: list[tuple[int, int, int]] = []
    for a, b in edges:
        common = nbrs[a] & nbrs[b]
        for c in sorted(common):
            if c > b:
                triangles.append((a, b, c))
                if len(triangles) > triangle_budget:
                    raise ComplexTooLarge(f"K_{n} with D={D} has more than {triangle_budget} triangles")
    k = SphereComplex(n, D, vertices, False, edges, triangles, nbrs, words)
    return k


def connected_components(k: SphereComplex) -> list[list[int]]:
    """Vertex partition into components (union-find), each sorted, ordered by least vertex."""
    if k.complete:
        return [list(range(k.n_vertices))] if k.n_vertices else []
    parent = list(range(k.n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in k.iter_edges():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(k.n_vertices):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def dump_complex(k: SphereComplex) -> str:
    return json.dumps(k.to_json(), sort_keys=True)
