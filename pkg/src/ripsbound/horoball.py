"""Finite horoball stages built from translated sphere neighbourhoods.

For a vertex sequence v_n in S_n and a base vertex v, the translate
g_n = v v_n^-1 moves v_n onto v.  Stage i keeps the points of N_i(v) that
lie at distance exactly n_i from g_i, for an increasing choice of n_i whose
neighbourhood patterns agree with every earlier stage.  Elements outside
the ball are handled as normal-form words through the word oracle.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .complex.sphere import SphereComplex
from .group.ball import CayleyBall, OutsideBall
from .group.presentation import Word
from .inverse_system import BoundaryRay, admissible_projections, max_pair_distance


def _dist_from(ball: CayleyBall, start: int, word: Word) -> int:
    """|w_start * word| by walking the table when possible, else through the oracle."""
    try:
        return ball.length(ball.element(word, start))
    except OutsideBall:
        return ball.word_length(ball.words[start] + tuple(word))


def pattern_hash(words) -> str:
    h = hashlib.sha256()
    for w in sorted(words):
        h.update(",".join(map(str, w)).encode() + b";")
    return h.hexdigest()[:16]


@dataclass
class HoroballStage:
    i: int
    n_i: int
    source: int  # ball index of v_{n_i}
    g_i: Word
    v: Word
    vertices: list[Word]
    complex: SphereComplex | None = None
    certificate: list[tuple[int, str]] = field(default_factory=list)

    def as_dict(self, ball: CayleyBall) -> dict:
        fmt = ball.presentation.format
        out = {"i": self.i, "n_i": self.n_i, "g_i": fmt(self.g_i), "v": fmt(self.v),
               "vertices": [fmt(w) for w in self.vertices], "pattern": pattern_hash(self.vertices),
               "matches": [{"j": j, "pattern": h} for j, h in self.certificate]}
        if self.complex is not None:
            out["edges"] = [list(e) for e in self.complex.iter_edges()]
            out["triangles"] = [list(t) for t in self.complex.iter_triangles()]
        return out


def neighbourhood_words(ball: CayleyBall, v: Word, j: int) -> list[Word]:
    """Normal forms of N_j(v) = v * ball(j)."""
    stop = int(ball.offsets[j + 1])
    if not v:
        return [ball.words[u] for u in range(stop)]
    return sorted({ball.normalize(v + ball.words[u]) for u in range(stop)})


def stage_pattern(ball: CayleyBall, v: Word, vn: int, n: int, j: int) -> list[Word]:
    """N_j(v) meet g S_n with g = v vn^-1, i.e. the h with |vn v^-1 h| = n."""
    out = []
    vinv = ball.presentation.invert(v)
    for h in neighbourhood_words(ball, v, j):
        rel = ball.normalize(vinv + h) if v else h
        if _dist_from(ball, vn, rel) == n:
            out.append(h)
    return sorted(out)


def _stage_complex(ball: CayleyBall, verts: list[Word], D: int) -> SphereComplex:
    edges = [(a, b) for a, b in combinations(range(len(verts)), 2)
             if ball.word_distance(verts[a], verts[b]) <= D]
    labels = [ball.presentation.compact(w) for w in verts]
    return SphereComplex.abstract(labels, edges, _cliques(len(verts), edges), clique=True)


def _cliques(nv: int, edges) -> list[tuple[int, int, int]]:
    nb: dict[int, set[int]] = {i: set() for i in range(nv)}
    for a, b in edges:
        nb[a].add(b)
        nb[b].add(a)
    return [(a, b, c) for a, b in edges for c in sorted(nb[a] & nb[b]) if c > b]


def extract_stable_stages(ball: CayleyBall, sequence: list[int], max_stage: int, D: int,
                          v: Word = (), complex_limit: int = 400):
    """Greedy admission of stages whose neighbourhood patterns stabilize.

    ``sequence[n]`` must lie in S_n.  Stage i is the first n > n_{i-1} (and
    n >= i) whose j-patterns equal those of every admitted stage j < i.
    Returns ``(stages, direction_word)`` where the direction word is the
    normal form of the deepest translate, the proxy for the limit point.
    Stage complexes are built when a stage has at most ``complex_limit``
    vertices.
    """
    for n, g in enumerate(sequence):
        if ball.length(g) != n:
            raise ValueError(f"sequence entry {n} is not in S_{n}")
    v = tuple(v)
    stages: list[HoroballStage] = []
    last = len(sequence) - 1
    n = 0
    for i in range(1, max_stage + 1):
        n = max(n + 1, i)
        admitted = None
        while n <= last:
            pats = {j: stage_pattern(ball, v, sequence[n], n, j) for j in range(1, i + 1)}
            if all(pats[s.i] == s.vertices for s in stages):
                admitted = pats[i]
                break
            n += 1
        if admitted is None:
            break
        g = ball.normalize(v + ball.presentation.invert(ball.words[sequence[n]]))
        st = HoroballStage(i, n, sequence[n], g, v, admitted,
                           certificate=[(s.i, pattern_hash(s.vertices)) for s in stages])
        if len(admitted) <= complex_limit:
            st.complex = _stage_complex(ball, admitted, D)
        stages.append(st)
    direction = ball.normalize(v + ball.presentation.invert(ball.words[sequence[last]]))
    return stages, direction


def stabilization_problems(ball: CayleyBall, stages: list[HoroballStage]) -> list[str]:
    """Recompute nesting and pattern equalities from scratch."""
    problems = []
    for a in stages:
        for b in stages:
            if b.i <= a.i:
                continue
            for j in range(1, a.i + 1):
                pa = stage_pattern(ball, a.v, a.source, a.n_i, j)
                pb = stage_pattern(ball, b.v, b.source, b.n_i, j)
                if pa != pb:
                    problems.append(f"stages {a.i},{b.i} disagree on N_{j}")
            inner = set(neighbourhood_words(ball, a.v, a.i))
            if not set(a.vertices) <= set(b.vertices) & inner:
                problems.append(f"stage {a.i} not nested in stage {b.i}")
    return problems


def translation_isometry_problems(ball: CayleyBall, stage: HoroballStage, D: int) -> list[str]:
    """g_i^-1 must carry H_i onto the points of S_{n_i} within i of v_{n_i}, preserving D-adjacency."""
    problems = []
    ginv = ball.presentation.invert(stage.g_i)
    pulled = sorted(ball.normalize(ginv + h) for h in stage.vertices)
    sphere = ball.sphere(stage.n_i)
    near = sorted(ball.words[s] for s in sphere if ball.within(s, stage.source, stage.i))
    if pulled != near:
        problems.append(f"stage {stage.i}: pulled-back vertex set differs from the sphere neighbourhood")
    if stage.complex is not None:
        for a, b in combinations(range(len(stage.vertices)), 2):
            before = ball.word_distance(stage.vertices[a], stage.vertices[b]) <= D
            pa, pb = ball.normalize(ginv + stage.vertices[a]), ball.normalize(ginv + stage.vertices[b])
            if before != (ball.word_distance(pa, pb) <= D) or before != stage.complex.adjacent(a, b):
                problems.append(f"stage {stage.i}: adjacency of {a},{b} not preserved")
    return problems


# -- projections ---------------------------------------------------------

def ray_from_stage(ball: CayleyBall, stage: HoroballStage, zeta: BoundaryRay) -> BoundaryRay:
    """Re-base a ray from e at g_i: the normal form of g_i^-1 * zeta(N), cut to the ball."""
    w = ball.normalize(ball.presentation.invert(stage.g_i) + zeta.word)
    return BoundaryRay(w[:ball.radius])


@dataclass
class StageProjection:
    stage: int
    simplex: list[Word]
    diameter: int
    diameter_exact: bool
    bound: Fraction
    inside: bool
    resolved: bool = True  # False when the re-based proxy ends before the stage sphere

    @property
    def measured(self) -> int:
        return self.diameter

    @property
    def passed(self) -> bool:
        return self.diameter <= self.bound

    def as_dict(self) -> dict:
        return {"stage": self.stage, "size": len(self.simplex), "diameter": self.diameter,
                "diameter_exact": self.diameter_exact, "bound": str(self.bound),
                "inside_stage": self.inside, "resolved": self.resolved, "passed": self.passed}


def stage_projection(ball: CayleyBall, stage: HoroballStage, local_ray: BoundaryRay, delta) -> StageProjection:
    """q_i of a ray based at g_i, given by its word in coordinates where g_i sits at e.

    A proxy that ends before the stage sphere points back toward the limit
    point; it is reported outside the stage with an empty simplex.
    """
    delta = Fraction(delta)
    bound = 6 * delta + 1
    if local_ray.N <= stage.n_i:
        return StageProjection(stage.i, [], 0, True, bound, False, False)
    adm = admissible_projections(ball, local_ray, stage.n_i, delta)
    inside = all(ball.within(x, stage.source, stage.i) for x in adm.vertices)
    d, exact, _ = max_pair_distance(ball, adm.vertices, adm.vertices, int(bound))
    simplex = [ball.normalize(stage.g_i + ball.words[x]) for x in adm.vertices]
    return StageProjection(stage.i, simplex, d, exact, bound, inside)


@dataclass
class StabilityCheck:
    i0: int
    i: int
    measured: int
    exact: bool
    bound: Fraction
    projectable: bool

    @property
    def passed(self) -> bool:
        return not self.projectable or self.measured <= self.bound

    def as_dict(self) -> dict:
        return {"i0": self.i0, "i": self.i, "measured": self.measured, "exact": self.exact,
                "bound": str(self.bound), "projectable": self.projectable, "passed": self.passed}


def _projection_points(ball: CayleyBall, stage: HoroballStage, zeta: BoundaryRay, delta):
    local = ray_from_stage(ball, stage, zeta)
    if local.N <= stage.n_i:
        return [], False
    adm = admissible_projections(ball, local, stage.n_i, delta)
    inside = all(ball.within(x, stage.source, stage.i) for x in adm.vertices)
    return adm.vertices, inside


def check_stage_stability(ball: CayleyBall, s0: HoroballStage, s1: HoroballStage, zeta: BoundaryRay,
                          delta, pair_limit: int = 4096) -> StabilityCheck:
    """Max distance between q_{i0}(zeta) and q_i(zeta) in G, against 10 delta + 2."""
    delta = Fraction(delta)
    bound = 10 * delta + 2
    a, ina = _projection_points(ball, s0, zeta, delta)
    b, inb = _projection_points(ball, s1, zeta, delta)
    # points of g S_n have length at most |g| + n
    trivial = 2 * s0.n_i + 2 * s1.n_i
    if not a or not b:
        return StabilityCheck(s0.i, s1.i, 0, True, bound, False)
    if len(a) * len(b) > pair_limit and trivial <= bound:
        return StabilityCheck(s0.i, s1.i, trivial, False, bound, ina and inb)
    best = 0
    for x in a:
        for y in b:
            best = max(best, ball.word_distance(s0.g_i + ball.words[x], s1.g_i + ball.words[y]))
    return StabilityCheck(s0.i, s1.i, best, True, bound, ina and inb)


def check_local_diameter(ball: CayleyBall, stage: HoroballStage, cluster: list[BoundaryRay], delta,
                         D: int) -> dict:
    """Diameter of the union of q_i over a cluster of nearby rays, against 6 delta + 2 + 2D."""
    delta = Fraction(delta)
    pts: set[int] = set()
    for z in cluster:
        verts, _ = _projection_points(ball, stage, z, delta)
        pts.update(verts)
    bound = 6 * delta + 2 + 2 * D
    if not pts:
        return {"stage": stage.i, "rays": len(cluster), "points": 0, "diameter": 0, "exact": True,
                "bound": str(bound), "passed": True}
    d, exact, _ = max_pair_distance(ball, pts, pts, int(bound))
    return {"stage": stage.i, "rays": len(cluster), "points": len(pts), "diameter": d, "exact": exact,
            "bound": str(bound), "passed": d <= bound}


# -- geodesics through the stages ---------------------------------------

@dataclass
class TraceReport:
    path_length: int
    closest: int  # d(v, path)
    hits: dict[int, list[int]]  # stage -> lengths |p| of intersection points
    bound: Fraction
    deep_from: int | None
    applicable: bool = True

    @property
    def max_hit(self) -> int:
        return max((d for ds in self.hits.values() for d in ds), default=0)

    @property
    def passed(self) -> bool:
        return not self.applicable or self.max_hit <= self.bound

    def as_dict(self) -> dict:
        return {"applicable": self.applicable, "path_length": self.path_length, "d_x_v": self.closest,
                "hits": {str(i): ds for i, ds in sorted(self.hits.items())},
                "max_hit_radius": self.max_hit, "bound": str(self.bound),
                "nonempty_from_stage": self.deep_from, "passed": self.passed}


def trace_geodesic_through_horoball(ball: CayleyBall, stages: list[HoroballStage], direction: Word,
                                    zeta: BoundaryRay, delta) -> TraceReport:
    """Scan the geodesic from the limit-point proxy to zeta's proxy against every stage.

    The path is the normal form of ``direction^-1 * zeta``, placed at
    ``direction``; its length is re-checked against the oracle distance.
    """
    delta = Fraction(delta)
    inv = ball.presentation.invert
    w = ball.normalize(inv(direction) + zeta.word)
    if ball.word_distance(direction, zeta.word) != len(w):
        raise ValueError("proxy path is not geodesic")
    v = stages[0].v if stages else ()
    vinv = inv(v)
    points = [ball.normalize(direction + w[:t]) for t in range(len(w) + 1)]
    rel = [ball.normalize(vinv + p) if v else p for p in points]
    lengths = [len(p) for p in rel]
    closest = min(lengths)
    hits: dict[int, list[int]] = {}
    for st in stages:
        ginv = inv(st.g_i)
        found = [lengths[k] for k, p in enumerate(points)
                 if lengths[k] <= st.i and ball.word_length(ginv + p) == st.n_i]
        hits[st.i] = sorted(set(found))
    deep = None
    for st in reversed(stages):
        if hits[st.i]:
            deep = st.i
        else:
            break
    # a path that never leaves the limit-point proxy says nothing about zeta
    applicable = len(w) >= 2 and closest < len(w)
    return TraceReport(len(w), closest, hits, 2 * closest + 2 * delta, deep, applicable)


def ray_sequence(ball: CayleyBall, ray: BoundaryRay) -> list[int]:
    """v_n = ray(n); the translates v_n^-1 need not converge."""
    return [ray.point(ball, t) for t in range(min(ray.N, ball.radius) + 1)]


def horoball_sequence(ball: CayleyBall, ray: BoundaryRay) -> list[int]:
    """v_n = ray(n)^-1, so that the translates g_n = ray(n) run out along the ray."""
    inv = ball.presentation.invert
    out = []
    for t in range(min(ray.N, ball.radius) + 1):
        g = ball.index_of(ball.normalize(inv(ray.word[:t])))
        if ball.length(g) != t:
            raise ValueError("inverse of a ray prefix left the sphere")
        out.append(g)
    return out
