"""Truncation maps between sphere complexes and boundary-ray projections.

A boundary point is represented by a ray proxy: a normal form of length N,
every prefix of which is again a normal form.  The admissible set of a ray
at level n collects the sphere points within 2*delta+1 of the time-n point
of some geodesic from e to the ray at a deeper level.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .complex.sphere import SphereComplex, build_sphere_complex
from .group.ball import CayleyBall
from .group.presentation import Word

EXACT_PAIR_LIMIT = 20_000


@dataclass(frozen=True)
class BoundaryRay:
    word: Word

    @property
    def N(self) -> int:
        return len(self.word)

    def point(self, ball: CayleyBall, t: int) -> int:
        if not 0 <= t <= self.N:
            raise ValueError(f"ray of depth {self.N} has no point at time {t}")
        return ball.index_of(self.word[:t])

    def format(self, ball: CayleyBall) -> str:
        return ball.presentation.format(self.word)


def ray_of(ball: CayleyBall, g: int) -> BoundaryRay:
    return BoundaryRay(ball.words[g])


def sample_rays(ball: CayleyBall, N: int, count: int, seed: int = 0) -> list[BoundaryRay]:
    """Rays of depth N drawn uniformly (with replacement when count exceeds |S_N|)."""
    rng = random.Random(seed)
    sphere = ball.sphere(N)
    if count <= len(sphere):
        picks = rng.sample(list(sphere), count)
    else:
        picks = [rng.choice(sphere) for _ in range(count)]
    return [ray_of(ball, g) for g in picks]


def gromov_product_words(ball: CayleyBall, u: Word, v: Word) -> Fraction:
    """(u|v)_e for words in normal form, exact through the word oracle if needed."""
    return Fraction(len(u) + len(v) - ball.word_distance(u, v), 2)


def product_at_e(ball: CayleyBall, g: int, h: int) -> Fraction:
    return Fraction(ball.length(g) + ball.length(h) - ball.distance(g, h), 2)


# -- truncation ----------------------------------------------------------

def project_vertex(ball: CayleyBall, v: int, m: int) -> int:
    """p^n_m: the length-m prefix of the normal form of v."""
    w = ball.words[v]
    if not 0 <= m <= len(w):
        raise ValueError(f"cannot truncate a word of length {len(w)} to {m}")
    return ball.index_of(w[:m])


@dataclass
class ProjectionAudit:
    n: int
    m: int
    D: int
    delta: Fraction
    checked_edges: int = 0
    violations: list[tuple[str, str, int]] = field(default_factory=list)
    method: str = "exhaustive"

    @property
    def in_hypothesis_zone(self) -> bool:
        return self.n - self.m > self.D + self.delta

    @property
    def counterexamples(self) -> list:
        return self.violations if self.in_hypothesis_zone else []

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "D": self.D, "delta": str(self.delta),
            "checked_edges": self.checked_edges, "violations": [list(v) for v in self.violations],
            "in_hypothesis_zone": self.in_hypothesis_zone, "has_counterexample": bool(self.counterexamples),
            "method": self.method,
        }


def audit_projection_simplicial(ball: CayleyBall, n: int, m: int, D: int, delta,
                                k_n: SphereComplex | None = None) -> ProjectionAudit:
    """Check that p^n_m sends every edge of K_n to an edge or vertex of K_m."""
    if not 0 <= m <= n <= ball.radius:
        raise ValueError("need 0 <= m <= n <= radius")
    audit = ProjectionAudit(n, m, D, Fraction(delta))
    if 2 * m <= D:
        # any two points of S_m are within 2m of each other through e
        audit.method = "sphere-diameter"
        audit.checked_edges = (k_n or build_sphere_complex(ball, n, D)).n_edges
        return audit
    k_n = k_n or build_sphere_complex(ball, n, D)
    proj = [project_vertex(ball, g, m) for g in k_n.vertices]
    close: dict[int, set[int]] = {}
    for a, b in k_n.iter_edges():
        audit.checked_edges += 1
        pa, pb = proj[a], proj[b]
        if pa == pb:
            continue
        near = close.get(pa)
        if near is None:
            near = {h for h, d in ball.bfs([pa], D).items() if ball.length(h) == m}
            close[pa] = near
        if pb not in near and not ball.within(pa, pb, D):
            audit.violations.append((ball.format(k_n.vertices[a]), ball.format(k_n.vertices[b]),
                                     ball.distance(pa, pb)))
    return audit


# -- admissible sets -----------------------------------------------------

def sphere_neighbourhood(ball: CayleyBall, sources: Iterable[int], n: int, r: int) -> set[int]:
    """Points of S_n within distance r of some source in S_n."""
    sources = list(sources)
    sphere = ball.sphere(n)
    if 2 * n <= r:
        return set(sphere)
    if ball.radius >= n + (r + 1) // 2:
        return {h for h in ball.bfs(sources, r) if h in sphere}
    return {h for h in sphere if any(ball.within(s, h, r) for s in sources)}


def max_pair_distance(ball: CayleyBall, A: Iterable[int], B: Iterable[int], threshold: int | None = None):
    """Largest d(x, y) over A x B as ``(value, exact, witness)``.

    When the trivial bound |x| + |y| already meets ``threshold`` and the set
    is large, the bound itself is returned with ``exact=False``.
    """
    A, B = sorted(set(A)), sorted(set(B))
    bound = max(ball.length(x) for x in A) + max(ball.length(y) for y in B)
    if threshold is not None and bound <= threshold and len(A) * len(B) > EXACT_PAIR_LIMIT:
        return bound, False, None
    best, wit = -1, None
    for x in A:
        for y in B:
            d = ball.distance(x, y)
            if d > best:
                best, wit = d, (x, y)
    return best, True, wit


@dataclass
class AdmissibleSet:
    ray: BoundaryRay
    n: int
    vertices: list[int]
    canonical: int
    diameter: int
    diameter_exact: bool
    bound: Fraction
    exhaustive: bool = True
    slack: int = 0

    @property
    def passed(self) -> bool:
        return self.canonical in self.vertices and self.diameter <= self.bound

    def as_dict(self, ball: CayleyBall) -> dict:
        return {
            "ray": ball.presentation.format(self.ray.word), "n": self.n, "slack": self.slack,
            "size": len(self.vertices), "canonical": ball.format(self.canonical),
            "diameter": self.diameter, "diameter_exact": self.diameter_exact, "bound": str(self.bound),
            "exhaustive": self.exhaustive, "passed": self.passed,
        }


def admissible_projections(ball: CayleyBall, ray: BoundaryRay, n: int, delta, slack: int | None = None,
                           exact_diameter: bool = False) -> AdmissibleSet:
    """All x in S_n within 2*delta+1 of a time-n point of a geodesic from e to ray(n+slack)."""
    delta = Fraction(delta)
    if slack is None:
        slack = min(ray.N, ball.radius) - n
    if slack < 0 or n + slack > min(ray.N, ball.radius):
        raise ValueError(f"level {n} with slack {slack} exceeds ray depth {ray.N} or radius {ball.radius}")
    target = ray.point(ball, n + slack)
    # time-n points of geodesics from e to target: the interval met with S_n
    sphere = ball.sphere(n)
    times = sorted(x for x in ball.interval(0, target) if x in sphere)
    reach = int(2 * delta + 1)
    verts = sorted(sphere_neighbourhood(ball, times, n, reach))
    bound = 6 * delta + 2
    thr = None if exact_diameter else int(bound)
    diam, exact, _ = max_pair_distance(ball, verts, verts, thr)
    return AdmissibleSet(ray, n, verts, ray.point(ball, n), diam, exact, bound, True, slack)


@dataclass
class PairCheck:
    name: str
    measured: int | Fraction
    bound: int | Fraction
    exact: bool
    witness: tuple[str, str] | None = None
    applicable: bool = True
    extra: dict = field(default_factory=dict)
    relation: str = "<="

    @property
    def passed(self) -> bool:
        if not self.applicable:
            return True
        return self.measured <= self.bound if self.relation == "<=" else self.measured >= self.bound

    def as_dict(self) -> dict:
        out = {"check": self.name, "measured": str(self.measured), "relation": self.relation,
               "bound": str(self.bound),
               "exact": self.exact, "applicable": self.applicable, "passed": self.passed}
        if self.witness:
            out["witness"] = list(self.witness)
        out.update({k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.extra.items()})
        return out


def check_close_projections(ball: CayleyBall, ray: BoundaryRay, n: int, delta, D: int,
                            slack: int | None = None) -> PairCheck:
    delta = Fraction(delta)
    if slack is None:
        slack = min(ray.N, ball.radius) - n - 1
    a = admissible_projections(ball, ray, n, delta, slack + 1)
    b = admissible_projections(ball, ray, n + 1, delta, slack)
    bound = 6 * delta + 3 + 2 * D
    d, exact, wit = max_pair_distance(ball, a.vertices, b.vertices, int(bound))
    w = (ball.format(wit[0]), ball.format(wit[1])) if wit else None
    return PairCheck("close_projections", d, bound, exact, w,
                     extra={"n": n, "diam_n": a.diameter, "diam_n1": b.diameter,
                            "diameter_bound": 6 * delta + 2,
                            "diameters_pass": a.passed and b.passed})


def common_simplex_threshold(ball: CayleyBall, ray1: BoundaryRay, ray2: BoundaryRay, n: int, delta, D: int,
                             slack: int | None = None) -> PairCheck:
    """If (ray1|ray2)_e >= n + 6 delta, both admissible sets at n lie in one simplex of K_n."""
    delta = Fraction(delta)
    prod = gromov_product_words(ball, ray1.word, ray2.word)
    applicable = prod >= n + 6 * delta
    if not applicable:
        return PairCheck("common_simplex", 0, D, True, None, False, {"n": n, "product": prod})
    a = admissible_projections(ball, ray1, n, delta, slack)
    b = admissible_projections(ball, ray2, n, delta, slack)
    d, exact, wit = max_pair_distance(ball, a.vertices + b.vertices, a.vertices + b.vertices, D)
    w = (ball.format(wit[0]), ball.format(wit[1])) if wit else None
    return PairCheck("common_simplex", d, D, exact, w, True, {"n": n, "product": prod})


def check_ray_product_bound(ball: CayleyBall, ray1: BoundaryRay, ray2: BoundaryRay, m1: int, m2: int,
                            delta) -> PairCheck:
    """(ray1(m1)|ray2(m2))_e >= min{m1 - 3d, m2 - 3d, (ray1(N)|ray2(N))_e - 6d}."""
    delta = Fraction(delta)
    deep = gromov_product_words(ball, ray1.word, ray2.word)
    lhs = gromov_product_words(ball, ray1.word[:m1], ray2.word[:m2])
    rhs = min(m1 - 3 * delta, m2 - 3 * delta, deep - 6 * delta)
    return PairCheck("ray_product", lhs, rhs, True, None, True,
                     {"m1": m1, "m2": m2, "margin": lhs - rhs, "deep_product": deep}, ">=")


def functoriality_violations(ball: CayleyBall, n: int) -> int:
    """Count (g, m, l) with p^m_l(p^n_m(g)) != p^n_l(g) over S_n."""
    bad = 0
    for g in ball.sphere(n):
        for m in range(n + 1):
            pm = project_vertex(ball, g, m)
            for l in range(m + 1):
                if project_vertex(ball, pm, l) != project_vertex(ball, g, l):
                    bad += 1
    return bad


def sample_pairs(items: list, count: int, rng: random.Random) -> list[tuple]:
    pairs = list(combinations(items, 2))
    if len(pairs) <= count:
        return pairs
    return rng.sample(pairs, count)
