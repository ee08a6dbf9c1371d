"""Detour, path and filling conditions on sphere complexes, and the section maps.

``check_ddag`` looks for short detours between nearby sphere points that
avoid a ball about the identity; ``check_ddag_prime`` and
``check_s_condition`` are the complex-level analogues for edge paths and
disk fillings.  ``build_imap`` pushes K_n into K_{n+1} and ``iterate_imap``
measures how composed pushes keep Gromov products growing.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex.disk import DiskDiagram, Verdict, certify_disk, edge_path_search, null_homotopy_search
from .complex.homology import h1_context
from .complex.sphere import SphereComplex, build_sphere_complex
from .group.ball import CayleyBall
from .group.symmetry import presentation_automorphisms, sphere_orbits
from .inverse_system import (BoundaryRay, admissible_projections, gromov_product_words, product_at_e,
                             project_vertex)


# -- ddag ----------------------------------------------------------------

@dataclass
class DdagReport:
    n: int
    M: int
    c: Fraction
    mode: str
    L_budget: int
    pairs_checked: int = 0
    L_min: int | None = None
    worst_pair: tuple[str, str] | None = None
    worst_path: list[str] = field(default_factory=list)
    failures: list[tuple[str, str, int]] = field(default_factory=list)
    ball_limited: bool = False
    path_verified: bool = True

    @property
    def passed(self) -> bool:
        return not self.failures and self.path_verified

    def as_dict(self) -> dict:
        return {
            "n": self.n, "M": self.M, "c": str(self.c), "mode": self.mode, "L_budget": self.L_budget,
            "pairs_checked": self.pairs_checked, "L_min": self.L_min,
            "worst_pair": list(self.worst_pair) if self.worst_pair else None,
            "worst_path": self.worst_path, "failures": [list(f) for f in self.failures[:20]],
            "failure_count": len(self.failures), "ball_limited": self.ball_limited,
            "path_verified": self.path_verified, "passed": self.passed,
        }


def _walk_back(par: np.ndarray, y: int) -> list[int]:
    path = [y]
    while par[path[-1]] >= 0:
        path.append(int(par[path[-1]]))
    return path[::-1]


def check_ddag(ball: CayleyBall, n: int, M: int, L_budget: int | None = None, c=0, mode: str = "pair",
               symmetric: bool = True) -> DdagReport:
    """Detour search between pairs of S_n at distance <= M avoiding a ball about e.

    The forbidden ball has radius ``d(x, y) - c`` (``mode="pair"``) or
    ``n - c`` (``mode="sphere"``).  Paths are searched in the Cayley graph
    restricted to the ball, so every reported path is genuine.  A failure is
    only a certificate when the ball has radius at least ``n + L_budget/2``;
    otherwise the report is flagged ``ball_limited``.  ``L_budget=None``
    searches the whole ball.  With ``symmetric`` only one source per orbit
    of the presentation's symmetry group is searched; pair counts are then
    weighted by orbit size.
    """
    if mode not in ("pair", "sphere"):
        raise ValueError("mode must be 'pair' or 'sphere'")
    if n < 1 or n > ball.radius:
        raise ValueError(f"sphere {n} not inside a ball of radius {ball.radius}")
    c = Fraction(c)
    if L_budget is None:
        L_budget = int(ball.size)
    rep = DdagReport(n, M, c, mode, L_budget)
    rep.ball_limited = ball.radius < n + math.ceil(L_budget / 2)
    sphere = ball.sphere(n)
    lv = ball.level
    exact = 2 * ball.radius + 1 - 2 * n
    worst = (-1, None, None)
    masks: dict[int, np.ndarray] = {}
    if symmetric:
        sources = sphere_orbits(ball, n, presentation_automorphisms(ball.presentation))
    else:
        sources = {x: 1 for x in sphere}
    weighted = 0
    for x, weight in sources.items():
        d0 = ball.bfs_array(x, 2 * n)
        groups: dict[int | None, list[int]] = {}
        ys = [y for y in sphere if y != x] if symmetric else range(x + 1, sphere.stop)
        for y in ys:
            u = int(d0[y])
            if u < 0:
                u = 2 * n
            if u <= exact:
                d = u
            elif mode == "sphere" and 2 * n <= M:
                d = None
            elif mode == "pair" and u - c < 0 and u <= M:
                d = None  # no forbidden ball whatever the exact distance
            else:
                d = ball.word_distance(ball.words[x], ball.words[y])
            if d is not None and d > M:
                continue
            if mode == "sphere":
                rho = n - c
            else:
                rho = (d - c) if d is not None else Fraction(-1)
            key = math.floor(rho) if rho >= 0 else None
            groups.setdefault(key, []).append(y)
        for key, ys in sorted(groups.items(), key=lambda kv: (kv[0] is not None, kv[0] or 0)):
            if key is None:
                allowed = None
            else:
                allowed = masks.get(key)
                if allowed is None:
                    allowed = lv > key
                    masks[key] = allowed
            dist, par = ball.bfs_array(x, L_budget, allowed, parents=True)
            for y in ys:
                weighted += weight
                L = int(dist[y])
                if L < 0:
                    rep.failures.append((ball.format(x), ball.format(y), -1 if key is None else key))
                elif L > worst[0]:
                    worst = (L, y, (x, key, _walk_back(par, y)))
    rep.pairs_checked = weighted // 2 if symmetric else weighted
    if worst[1] is not None and not rep.failures:
        L, y, (x, key, path) = worst
        rep.L_min = L
        rep.worst_pair = (ball.format(x), ball.format(y))
        rep.worst_path = [ball.format(g) for g in path]
        rep.path_verified = _verify_detour(ball, path, x, y, key)
    return rep


def _verify_detour(ball: CayleyBall, path: list[int], x: int, y: int, key: int | None) -> bool:
    if path[0] != x or path[-1] != y:
        return False
    adj = ball.adj
    for a, b in zip(path, path[1:]):
        if b not in adj[a]:
            return False
    return key is None or all(ball.length(g) > key for g in path)


# -- ddag' ---------------------------------------------------------------

@dataclass
class DdagPrimeReport:
    n: int
    M: int
    ray_pairs: int = 0
    vertex_pairs: int = 0
    L_emp: int = 0
    path_lengths: dict[int, int] = field(default_factory=dict)
    failures: int = 0
    L_budget: int = 0
    note: str = "endpoints drawn from admissible sets of sampled rays; factoring through boundary paths not certified"

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {"n": self.n, "M": self.M, "ray_pairs": self.ray_pairs, "vertex_pairs": self.vertex_pairs,
                "L_emp": self.L_emp, "path_length_histogram": {str(k): v for k, v in sorted(self.path_lengths.items())},
                "failures": self.failures, "L_budget": self.L_budget, "note": self.note, "passed": self.passed}


def subdivisions_for(edges: int) -> int:
    """Least L with 2^L >= edges (stationary steps pad shorter paths)."""
    return 0 if edges <= 1 else math.ceil(math.log2(edges))


def check_ddag_prime(ball: CayleyBall, n: int, M: int, L_budget: int, delta, D: int,
                     rays: list[BoundaryRay], k_n: SphereComplex | None = None,
                     pair_cap: int = 2000, seed: int = 0) -> DdagPrimeReport:
    delta = Fraction(delta)
    k_n = k_n or build_sphere_complex(ball, n, D)
    rep = DdagPrimeReport(n, M, L_budget=L_budget)
    rng = random.Random(seed)
    sets = [admissible_projections(ball, r, n, delta) for r in rays]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            A, B = sets[i].vertices, sets[j].vertices
            gap = min(ball.distance(a, b) for a in A[:50] for b in B[:50]) if not k_n.complete else 0
            if gap > M:
                continue
            rep.ray_pairs += 1
            if k_n.complete:
                # every pair of vertices spans an edge
                pairs = len(A) * len(B)
                same = len(set(A) & set(B))
                rep.vertex_pairs += pairs
                rep.path_lengths[0] = rep.path_lengths.get(0, 0) + same
                rep.path_lengths[1] = rep.path_lengths.get(1, 0) + pairs - same
                continue
            pairs = [(a, b) for a in A for b in B]
            if len(pairs) > pair_cap:
                pairs = rng.sample(pairs, pair_cap)
            for a, b in pairs:
                rep.vertex_pairs += 1
                p = edge_path_search(k_n, k_n.position(a), k_n.position(b), 2 ** L_budget)
                if p is None:
                    rep.failures += 1
                    continue
                e = len(p) - 1
                rep.path_lengths[e] = rep.path_lengths.get(e, 0) + 1
    if rep.path_lengths:
        rep.L_emp = subdivisions_for(max(rep.path_lengths))
    return rep


# -- S condition ---------------------------------------------------------

@dataclass
class SReport:
    n: int
    M: int
    depth_budget: int
    area_budget: int
    seed: int
    loop_source: str
    loops_checked: int = 0
    solved: int = 0
    unknown: int = 0
    nontrivial: int = 0
    L_emp: int = 0
    max_area: int = 0
    certified: int = 0
    expected_failure_lane: int = 0
    lane_exact: bool = True
    outcomes: list[dict] = field(default_factory=list)

    @property
    def solved_fraction(self) -> float:
        trivial = self.loops_checked - self.nontrivial
        return self.solved / trivial if trivial else 1.0

    @property
    def passed(self) -> bool:
        return self.certified == self.solved and self.lane_exact and self.unknown == 0

    def as_dict(self) -> dict:
        return {
            "n": self.n, "M": self.M, "depth_budget": self.depth_budget, "area_budget": self.area_budget,
            "seed": self.seed, "loop_source": self.loop_source, "loops_checked": self.loops_checked,
            "solved": self.solved, "unknown": self.unknown, "nontrivial_h1": self.nontrivial,
            "L_emp": self.L_emp, "max_area": self.max_area, "certified": self.certified,
            "expected_failure_lane": self.expected_failure_lane, "lane_exact": self.lane_exact,
            "solved_fraction": round(self.solved_fraction, 6), "passed": self.passed,
        }


def _random_neighbour(k: SphereComplex, v: int, avoid: int | None, rng: random.Random) -> int | None:
    if k.complete:
        if k.n_vertices < 2 + (avoid is not None and avoid != v):
            return None
        while True:
            w = rng.randrange(k.n_vertices)
            if w != v and w != avoid:
                return w
    nb = sorted(k.neighbours(v) - {avoid})
    return rng.choice(nb) if nb else None


def sample_loops(k: SphereComplex, length: int, count: int, seed: int = 0, tries: int = 50) -> list[tuple[int, ...]]:
    """Closed walks of the given combinatorial length.

    A backtrack-free random walk covers half the length; an edge path back to
    the start closes it and stationary steps pad the remainder.
    """
    rng = random.Random(seed)
    loops: list[tuple[int, ...]] = []
    if k.n_vertices == 0:
        return loops
    for _ in range(count * tries):
        if len(loops) >= count:
            break
        start = rng.randrange(k.n_vertices)
        walk = [start]
        prev = None
        for _ in range(length // 2):
            w = _random_neighbour(k, walk[-1], prev, rng)
            if w is None:
                break
            prev = walk[-1]
            walk.append(w)
        back = edge_path_search(k, walk[-1], start, length - (len(walk) - 1))
        if back is None:
            continue
        cyc = walk + back[1:-1]
        cyc += [cyc[-1]] * (length - len(cyc))
        if len(cyc) == length and len(set(cyc)) > 1:
            loops.append(tuple(cyc))
    return loops


def generator_loops(k: SphereComplex) -> list[tuple[int, ...]]:
    """Fundamental cycles of non-tree edges whose class is nonzero in H_1."""
    ctx = h1_context(k)
    if ctx.snf is None:
        return []
    parent: dict[int, int] = {}
    adj: dict[int, list[int]] = {}
    for a, b in ctx.tree:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    depth: dict[int, int] = {}
    for root in range(k.n_vertices):
        if root in depth:
            continue
        depth[root] = 0
        parent[root] = root
        queue = [root]
        for x in queue:
            for y in sorted(adj.get(x, ())):
                if y not in depth:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    queue.append(y)

    def tree_path(a: int, b: int) -> list[int]:
        left, right = [a], [b]
        while left[-1] != right[-1]:
            if depth[left[-1]] >= depth[right[-1]]:
                left.append(parent[left[-1]])
            else:
                right.append(parent[right[-1]])
        return left + right[-2::-1]

    out = []
    for (a, b) in sorted(ctx.cycle_index):
        cyc = tuple(tree_path(b, a))  # b ... a, closed by the edge a -> b
        if len(cyc) >= 3 and not ctx.is_boundary(list(cyc)):
            out.append(cyc)
    return out


def check_s_condition(k: SphereComplex, M: int, depth_budget: int = 8, area_budget: int = 512,
                      loop_source: str = "sampled", count: int = 100, seed: int = 0,
                      loops: list | None = None, keep_outcomes: bool = False) -> SReport:
    rep = SReport(k.n, M, depth_budget, area_budget, seed, loop_source)
    ctx = None if k.complete else h1_context(k)
    lane: set[tuple[int, ...]] = set()
    if loop_source == "sampled":
        raw = sample_loops(k, 3 * 2 ** M, count * 4, seed)
        trivial = [lp for lp in raw if ctx is None or ctx.is_boundary(list(lp))][:count]
        generators = generator_loops(k) if ctx is not None else []
        lane = set(generators)
        todo = trivial + generators
    elif loop_source == "generators":
        todo = generator_loops(k)
        lane = set(todo)
    elif loop_source == "user":
        todo = [tuple(lp) for lp in (loops or [])]
    else:
        raise ValueError("loop_source must be sampled, generators or user")
    rep.expected_failure_lane = len(lane)
    nontrivial_seen: set[tuple[int, ...]] = set()
    for lp in todo:
        rep.loops_checked += 1
        res = null_homotopy_search(k, lp, depth_budget, area_budget, ctx)
        if isinstance(res, DiskDiagram):
            rep.solved += 1
            rep.L_emp = max(rep.L_emp, res.depth)
            rep.max_area = max(rep.max_area, res.area)
            if not certify_disk(res, k, lp):
                rep.certified += 1
            out = {"verdict": "disk", "depth": res.depth, "area": res.area}
        elif res.kind == "NontrivialH1":
            rep.nontrivial += 1
            nontrivial_seen.add(lp)
            out = {"verdict": "NontrivialH1"}
        else:
            rep.unknown += 1
            out = {"verdict": "Unknown"}
        if keep_outcomes:
            rep.outcomes.append(out)
    if loop_source != "user":
        rep.lane_exact = nontrivial_seen == lane
    return rep


# -- section maps --------------------------------------------------------

@dataclass
class IMap:
    n: int
    delta: Fraction
    D: int
    vertex_images: list[int]
    witness_distance: list[int]
    image_distance: list[int]
    edge_paths: dict[tuple[int, int], list[int]] | None = None
    triangle_disks: dict[tuple[int, int, int], DiskDiagram] | None = None
    implicit: bool = False
    L: int = 0
    L_disk: int = 0
    holes: list = field(default_factory=list)
    max_path_edges: int = 0
    max_disk_area: int = 0

    @property
    def total(self) -> bool:
        return not self.holes

    @property
    def vertex_bound_ok(self) -> bool:
        return max(self.image_distance, default=0) <= 2 * self.delta + 1

    def as_dict(self) -> dict:
        return {
            "n": self.n, "delta": str(self.delta), "D": self.D, "vertices": len(self.vertex_images),
            "max_image_distance": max(self.image_distance, default=0),
            "max_witness_distance": max(self.witness_distance, default=0),
            "vertex_bound": str(2 * self.delta + 1), "vertex_bound_ok": self.vertex_bound_ok,
            "implicit_cells": self.implicit, "L": self.L, "L_disk": self.L_disk,
            "max_path_edges": self.max_path_edges, "max_disk_area": self.max_disk_area,
            "holes": len(self.holes), "total": self.total,
        }


def _vertex_image(ball: CayleyBall, x: int, n: int, reach: int) -> tuple[int, int]:
    """Least (distance, index) over y in S_{n+1} with d(x, prefix_n(y)) <= reach."""
    children = [y for y in ball.adj[x] if y >= 0 and ball.length(y) == n + 1
                and ball.words[y][:n] == ball.words[x]]
    if children:
        return min(children), 0
    best = None
    for y in ball.sphere(n + 1):
        p = project_vertex(ball, y, n)
        if ball.within(x, p, reach):
            d = ball.distance(x, p)
            if best is None or (d, y) < best:
                best = (d, y)
    if best is None:
        raise LookupError(f"no extension of {ball.format(x)} within {reach}")
    return best[1], best[0]


def build_imap(ball: CayleyBall, n: int, delta, D: int, path_L: int = 4, depth_budget: int = 8,
               area_budget: int = 512, k_n: SphereComplex | None = None,
               k_n1: SphereComplex | None = None) -> IMap:
    """Vertex rule plus edge paths and triangle fillings from K_n into K_{n+1}.

    Each vertex goes to the least point of S_{n+1} whose normal-form prefix is
    nearest to it (a child of x when one exists).  When K_{n+1} is a full
    simplex every image edge and triangle exists directly, so cells are
    certified without being listed.
    """
    delta = Fraction(delta)
    if n + 1 > ball.radius:
        raise ValueError("need sphere n+1 inside the ball")
    k_n = k_n or build_sphere_complex(ball, n, D)
    k_n1 = k_n1 or build_sphere_complex(ball, n + 1, D)
    reach = int(2 * delta)
    images, wdist, idist = [], [], []
    for x in k_n.vertices:
        y, wd = _vertex_image(ball, x, n, reach)
        images.append(y)
        wdist.append(wd)
        idist.append(1 if wd == 0 else ball.distance(x, y))
    imap = IMap(n, delta, D, images, wdist, idist)
    if k_n1.complete:
        imap.implicit = True
        imap.max_path_edges = 1 if k_n.n_edges and any(a != b for a, b in _sample_image_edges(k_n, images)) else 0
        imap.max_disk_area = 1 if k_n.n_triangles else 0
        return imap
    pos = [k_n1.position(y) for y in images]
    paths: dict[tuple[int, int], list[int]] = {}
    for a, b in k_n.iter_edges():
        p = edge_path_search(k_n1, pos[a], pos[b], 2 ** path_L)
        if p is None:
            imap.holes.append(("edge", a, b))
            continue
        paths[(a, b)] = p
        imap.max_path_edges = max(imap.max_path_edges, len(p) - 1)
    imap.L = subdivisions_for(imap.max_path_edges)
    disks: dict[tuple[int, int, int], DiskDiagram] = {}
    ctx = h1_context(k_n1)
    for a, b, c in k_n.iter_triangles():
        if (a, b) not in paths or (b, c) not in paths or (a, c) not in paths:
            imap.holes.append(("triangle", a, b, c))
            continue
        loop = paths[(a, b)][:-1] + paths[(b, c)][:-1] + paths[(a, c)][::-1][:-1]
        loop = _pad(loop)
        res = null_homotopy_search(k_n1, loop, depth_budget, area_budget, ctx)
        if isinstance(res, Verdict):
            imap.holes.append(("triangle", a, b, c))
            continue
        disks[(a, b, c)] = res
        imap.L_disk = max(imap.L_disk, res.depth)
        imap.max_disk_area = max(imap.max_disk_area, res.area)
    imap.edge_paths, imap.triangle_disks = paths, disks
    return imap


def _pad(loop: list[int]) -> list[int]:
    # degenerate image triangles: stationary steps keep the loop length >= 3
    while len(loop) < 3:
        loop.append(loop[-1])
    return loop


def _sample_image_edges(k: SphereComplex, images: list[int], limit: int = 1000):
    for i, (a, b) in enumerate(k.iter_edges()):
        if i >= limit:
            break
        yield images[a], images[b]


def certify_imap(ball: CayleyBall, imap: IMap, k_n: SphereComplex, k_n1: SphereComplex) -> list[str]:
    """Independent re-check of every stored path and disk against K_{n+1}."""
    problems = []
    for x, y in zip(k_n.vertices, imap.vertex_images):
        if ball.distance(x, y) > 2 * imap.delta + 1:
            problems.append(f"vertex {ball.format(x)} moved too far")
    if imap.implicit:
        if not k_n1.complete:
            problems.append("implicit cells on a complex that is not a simplex")
        return problems
    pos = {y: k_n1.position(y) for y in imap.vertex_images}
    for (a, b), p in (imap.edge_paths or {}).items():
        if p[0] != pos[imap.vertex_images[a]] or p[-1] != pos[imap.vertex_images[b]]:
            problems.append(f"edge path {a}-{b} has wrong endpoints")
        if any(u != v and not k_n1.adjacent(u, v) for u, v in zip(p, p[1:])):
            problems.append(f"edge path {a}-{b} leaves K_{k_n1.n}")
        if len(p) - 1 > 2 ** imap.L:
            problems.append(f"edge path {a}-{b} longer than 2^L")
    for (a, b, c), d in (imap.triangle_disks or {}).items():
        ps = imap.edge_paths
        loop = _pad(ps[(a, b)][:-1] + ps[(b, c)][:-1] + ps[(a, c)][::-1][:-1])
        problems += certify_disk(d, k_n1, loop)
    return problems


# -- product growth ------------------------------------------------------

@dataclass
class GrowthStats:
    m: int
    n: int
    samples: list[tuple[str, Fraction]] = field(default_factory=list)
    C_fit: Fraction = Fraction(0)
    simplex_C_fit: Fraction = Fraction(0)
    ray_C_fit: Fraction = Fraction(0)
    simplex_pairs: int = 0
    rays: int = 0

    def as_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "samples": len(self.samples), "C_fit": str(self.C_fit),
                "simplex_C_fit": str(self.simplex_C_fit), "ray_C_fit": str(self.ray_C_fit),
                "simplex_pairs": self.simplex_pairs, "rays": self.rays}


def compose_images(maps: list[IMap], m: int, n: int, x: int, ball: CayleyBall) -> int:
    by_n = {im.n: im for im in maps}
    g = x
    for j in range(m, n):
        im = by_n.get(j)
        if im is None:
            raise LookupError(f"missing section map from sphere {j}")
        g = im.vertex_images[g - int(ball.offsets[j])]
    return g


def iterate_imap(ball: CayleyBall, m: int, n: int, maps: list[IMap], rays: list[BoundaryRay] = (),
                 k_m: SphereComplex | None = None, sample: int | None = None, pair_sample: int = 2000,
                 seed: int = 0) -> GrowthStats:
    """Gromov-product deficiencies m - (i^m_n(x)|x)_e, for simplex mates and along rays."""
    rng = random.Random(seed)
    st = GrowthStats(m, n)
    sphere = list(ball.sphere(m))
    xs = sphere if sample is None or sample >= len(sphere) else sorted(rng.sample(sphere, sample))
    img = {x: compose_images(maps, m, n, x, ball) for x in sphere}
    for x in xs:
        p = product_at_e(ball, img[x], x)
        st.samples.append((ball.format(x), p))
        st.C_fit = max(st.C_fit, m - p)
    if k_m is not None:
        if k_m.complete:
            pairs = [(rng.randrange(len(sphere)), rng.randrange(len(sphere))) for _ in range(pair_sample)]
        else:
            edges = k_m.edges
            pairs = edges if len(edges) <= pair_sample else rng.sample(edges, pair_sample)
        for a, b in pairs:
            p = product_at_e(ball, img[sphere[a]], img[sphere[b]])
            st.simplex_C_fit = max(st.simplex_C_fit, m - p)
            st.simplex_pairs += 1
    for r in rays:
        x = r.point(ball, m)
        p = gromov_product_words(ball, r.word, ball.words[img[x]])
        st.ray_C_fit = max(st.ray_C_fit, m - p)
        st.rays += 1
    return st


@dataclass
class StepProductReport:
    B: int
    C_fit: Fraction
    length: int

    def as_dict(self) -> dict:
        return {"B": self.B, "C_fit": str(self.C_fit), "length": self.length}


def check_bounded_step_product(ball: CayleyBall, sequence: list[int], delta=0) -> StepProductReport:
    """Max of |x_m| - (x_m|x_n)_e over m < n for a radial sequence."""
    for a, b in zip(sequence, sequence[1:]):
        if ball.length(b) != ball.length(a) + 1:
            raise ValueError("sequence is not radial: lengths must grow by exactly one")
    B = max((ball.distance(a, b) for a, b in zip(sequence, sequence[1:])), default=0)
    C = Fraction(0)
    for i, a in enumerate(sequence):
        for b in sequence[i + 1:]:
            C = max(C, ball.length(a) - product_at_e(ball, a, b))
    return StepProductReport(B, C, len(sequence))


def orbit(maps: list[IMap], ball: CayleyBall, x: int, steps: int) -> list[int]:
    seq = [x]
    by_n = {im.n: im for im in maps}
    for _ in range(steps):
        n = ball.length(seq[-1])
        im = by_n.get(n)
        if im is None:
            break
        seq.append(im.vertex_images[seq[-1] - int(ball.offsets[n])])
    return seq
