"""Edge paths and budgeted null-homotopy search in a 2-skeleton."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .homology import H1Context, h1_context
from .sphere import SphereComplex


@dataclass(frozen=True)
class SimplicialLoop:
    """Closed vertex sequence; consecutive vertices are equal or adjacent."""

    vertices: tuple[int, ...]

    @property
    def combinatorial_length(self) -> int:
        return len(self.vertices)

    def validate(self, k: SphereComplex) -> None:
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if a != b and not k.adjacent(a, b):
                raise ValueError(f"loop step {a} -> {b} is not an edge")

    def reduced(self) -> tuple[int, ...]:
        """Cyclically reduced form: stationary steps and backtracks removed."""
        out: list[int] = []
        for v in self.vertices:
            if out and out[-1] == v:
                continue
            if len(out) >= 2 and out[-2] == v:
                out.pop()
                continue
            out.append(v)
        changed = True
        while changed and len(out) > 1:
            changed = False
            if out[0] == out[-1]:
                out.pop()
                changed = True
            elif len(out) >= 3 and out[1] == out[-1]:
                out.pop(0)
                out.pop()
                changed = True
        return tuple(out)


@dataclass
class DiskDiagram:
    """Triangulated disk with a simplicial map into a complex.

    Disk vertices are numbered; ``image[i]`` is the target vertex of disk
    vertex ``i``.  ``boundary`` lists disk vertices around the boundary cycle.
    """

    image: list[int]
    triangles: list[tuple[int, int, int]]
    boundary: list[int]
    depth: int = 0

    @property
    def area(self) -> int:
        return len(self.triangles)

    def boundary_loop(self) -> tuple[int, ...]:
        return tuple(self.image[i] for i in self.boundary)

    def as_dict(self) -> dict:
        return {"depth": self.depth, "area": self.area}


@dataclass(frozen=True)
class Verdict:
    kind: str  # "NontrivialH1" or "Unknown"
    reason: str = ""


def certify_disk(d: DiskDiagram, k: SphereComplex, loop) -> list[str]:
    """Independent validity check; returns a list of problems (empty when valid)."""
    problems: list[str] = []
    loop = tuple(loop)
    if d.boundary_loop() != loop:
        problems.append("boundary does not equal the loop")
    if len(set(d.boundary)) != len(d.boundary):
        problems.append("boundary cycle repeats a disk vertex")
    for t in d.triangles:
        if len(set(t)) != 3:
            problems.append(f"disk triangle {t} is degenerate in the disk")
        if not k.spans_simplex([d.image[i] for i in t]):
            problems.append(f"disk triangle {t} does not map into a simplex")
    edge_count: dict[tuple[int, int], int] = {}
    for t in d.triangles:
        for a, b in combinations(sorted(t), 2):
            edge_count[(a, b)] = edge_count.get((a, b), 0) + 1
    n = len(d.boundary)
    bd = {tuple(sorted((d.boundary[i], d.boundary[(i + 1) % n]))) for i in range(n)}
    for e, c in edge_count.items():
        want = 1 if e in bd else 2
        if c != want:
            problems.append(f"disk edge {e} lies in {c} triangles, expected {want}")
    if not bd <= set(edge_count):
        problems.append("boundary edge missing from the disk")
    verts = {v for t in d.triangles for v in t}
    if len(verts) - len(edge_count) + len(d.triangles) != 1:
        problems.append("Euler characteristic of the disk is not 1")
    if set(d.boundary) - verts:
        problems.append("boundary vertex not covered by a triangle")
    return problems


def edge_path_search(k: SphereComplex, u: int, v: int, max_edges: int) -> list[int] | None:
    """Shortest edge path from u to v (vertex list) if it has at most max_edges edges."""
    if u == v:
        return [u]
    if k.adjacent(u, v):
        return [u, v] if max_edges >= 1 else None
    parent = {u: u}
    frontier = [u]
    for _ in range(max_edges):
        nxt = []
        for x in frontier:
            for y in sorted(k.neighbours(x)):
                if y not in parent:
                    parent[y] = x
                    if y == v:
                        path = [v]
                        while path[-1] != u:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    nxt.append(y)
        frontier = nxt
        if not frontier:
            break
    return None


def _graph_distances(k: SphereComplex, source: int) -> dict[int, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for x in frontier:
            for y in k.neighbours(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def _centre_distances(k: SphereComplex, loop: tuple[int, ...]) -> dict[int, int]:
    """Distances from the vertex minimising the largest distance to the loop."""
    per = [_graph_distances(k, v) for v in sorted(set(loop))]
    common = set(per[0]).intersection(*per[1:])
    centre = min(common, key=lambda x: (max(d[x] for d in per), sum(d[x] for d in per), x))
    return _graph_distances(k, centre)


def _fill(k: SphereComplex, loop: tuple[int, ...], depth_budget: int, area_budget: int) -> DiskDiagram | None:
    image = list(loop)
    toward = None if k.complete else _centre_distances(k, loop)
    cur = list(range(len(loop)))
    tris: list[tuple[int, int, int]] = []
    depth = 0
    while True:
        if len(cur) == 3 and k.spans_simplex([image[i] for i in cur]):
            tris.append(tuple(cur))
            return DiskDiagram(image, tris, list(range(len(loop))), depth)
        if depth >= depth_budget or len(tris) >= area_budget:
            return None
        depth += 1
        # one round of non-overlapping ear clips
        clipped = False
        i = 0
        while i < len(cur) and len(cur) > 3:
            a, b, c = cur[i - 1], cur[i], cur[(i + 1) % len(cur)]
            if k.spans_simplex((image[a], image[b], image[c])):
                tris.append((a, b, c))
                del cur[i]
                clipped = True
                i += 1
            else:
                i += 1
        if clipped:
            continue
        # no ear: cone disjoint runs of loop edges, longest first
        L = len(cur)
        runs = []
        cands = sorted({y for i in cur for y in k.neighbours(image[i])} | {image[i] for i in cur})
        for x in cands:
            ok = [k.spans_simplex((image[cur[t]], image[cur[(t + 1) % L]], x)) for t in range(L)]
            if all(ok):
                xv = len(image)
                image.append(x)
                for t in range(L):
                    tris.append((cur[t], cur[(t + 1) % L], xv))
                return DiskDiagram(image, tris, list(range(len(loop))), depth)
            for s in range(L):
                if ok[s - 1]:
                    continue
                run = 0
                while run < L and ok[(s + run) % L]:
                    run += 1
                # two-edge runs only pay off when they move the loop toward the centre
                if run >= 3:
                    runs.append((run, x, s))
                elif run == 2 and toward is not None and \
                        toward.get(x, L) < toward.get(image[cur[(s + 1) % L]], L):
                    runs.append((run, x, s))
        if not runs:
            return None
        runs.sort(key=lambda r: (-r[0], toward.get(r[1], 0) if toward else 0, r[1], r[2]))
        used = [False] * L
        after: dict[int, int] = {}
        interior: set[int] = set()
        for run, x, s in runs:
            edges = [(s + t) % L for t in range(run)]
            if any(used[e] for e in edges):
                continue
            for e in edges:
                used[e] = True
            xv = len(image)
            image.append(x)
            after[s] = xv
            interior.update((s + t) % L for t in range(1, run))
            for t in range(run):
                tris.append((cur[(s + t) % L], cur[(s + t + 1) % L], xv))
        nxt = []
        for t in range(L):
            if t in interior:
                continue
            nxt.append(cur[t])
            if t in after:
                nxt.append(after[t])
        cur = nxt


def null_homotopy_search(k: SphereComplex, loop, depth_budget: int = 8, area_budget: int = 512,
                         context: H1Context | None = None) -> DiskDiagram | Verdict:
    """Disk diagram, NontrivialH1 (certified), or Unknown when budgets run out."""
    loop = tuple(loop.vertices if isinstance(loop, SimplicialLoop) else loop)
    if len(loop) < 3:
        raise ValueError("loops need combinatorial length at least 3")
    SimplicialLoop(loop).validate(k)
    ctx = context
    if not k.complete:
        ctx = ctx or h1_context(k)
        if not ctx.is_boundary(list(loop)):
            return Verdict("NontrivialH1", "loop class is nonzero in H_1")
    d = _fill(k, loop, depth_budget, area_budget)
    if d is not None and d.depth <= depth_budget and d.area <= area_budget:
        return d
    return Verdict("Unknown", f"no disk within depth {depth_budget} and area {area_budget}")
