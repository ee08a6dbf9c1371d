"""Run configuration, per-command runners, boundary classification and JSON reports.

Every runner returns ``(result, status)`` where status is one of ``pass``,
``violations`` or ``unknown``.  Reports are plain JSON with sorted keys and
no timestamps, so identical configurations give identical bytes.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import random
import tempfile
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .complex.homology import h1_context, homology_h1
from .complex.sphere import ComplexTooLarge, SphereComplex, build_sphere_complex, connected_components
from .conditions import (build_imap, certify_imap, check_bounded_step_product, check_ddag, check_ddag_prime,
                         check_s_condition, generator_loops, iterate_imap, orbit)
from .group.ball import BallTooLarge, CayleyBall, build_ball
from .group.cache import CacheError, content_hash, load_cache, save_cache
from .group.delta import DeltaEstimate, estimate_delta, required_radius
from .group.presentation import GroupPresentation, load_presentation
from .group.presets import preset
from .horoball import (check_local_diameter, check_stage_stability, extract_stable_stages, horoball_sequence,
                       ray_from_stage, stabilization_problems, stage_projection, trace_geodesic_through_horoball,
                       translation_isometry_problems)
from .inverse_system import (BoundaryRay, admissible_projections, audit_projection_simplicial,
                             check_close_projections, check_ray_product_bound, functoriality_violations,
                             gromov_product_words, project_vertex, sample_rays)

log = logging.getLogger(__name__)

SCHEMA = "ripsbound.report/1"
CACHE_ENV = "RIPSBOUND_CACHE_DIR"
PAPER_D = "paper"
DELTA_BALL_CAP = 400_000

PASS, VIOLATIONS, UNKNOWN = "pass", "violations", "unknown"
EXIT_CODES = {PASS: 0, VIOLATIONS: 1, UNKNOWN: 2}

# audited sphere ranges that fit on a laptop
DEFAULT_RANGES = {"z": (1, 8), "f2": (1, 6), "f3": (1, 4), "surface2": (1, 4), "surface3": (1, 2)}


def worst(*statuses: str) -> str:
    if VIOLATIONS in statuses:
        return VIOLATIONS
    if UNKNOWN in statuses:
        return UNKNOWN
    return PASS


def parse_range(text: str) -> tuple[int, int]:
    """'4' or '4..6' to an inclusive pair."""
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return lo, hi


@dataclass
class RunConfig:
    preset: str | None = None
    presentation_path: str | None = None
    delta: Fraction | None = None  # override; None means estimate
    delta_mode: str = "exhaustive"
    delta_side: int = 4
    D: int | str | None = None  # None: 12 delta_ideal + 2, "paper": 10^6 delta + 10^6
    force_D: bool = False
    n_range: tuple[int, int] | None = None
    m: int | None = None
    radius: int | None = None
    N: int | None = None
    M: int | str | None = None
    c: Fraction | None = None
    ddag_mode: str = "pair"
    L_budget: int | None = None
    depth_budget: int = 8
    area_budget: int = 512
    samples: int | None = None
    max_stage: int = 4
    seed: int = 0
    cache_dir: str | None = None
    use_cache: bool = True

    def echo(self) -> dict:
        out = asdict(self)
        for k in ("cache_dir", "use_cache"):
            out.pop(k)
        return _plain(out)


def _plain(obj):
    """Recursively make an object JSON-ready with deterministic ordering."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_plain(v) for v in obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Session:
    """Resolved presentation, delta, D and a cache of balls for one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        if cfg.presentation_path:
            self.presentation: GroupPresentation = load_presentation(cfg.presentation_path)
        elif cfg.preset:
            self.presentation = preset(cfg.preset)
        else:
            raise ValueError("give --preset or --presentation")
        self._balls: dict[int, CayleyBall] = {}
        self.hashes: dict[int, str] = {}
        self._delta: DeltaEstimate | None = None

    # -- constants -------------------------------------------------------

    @property
    def name(self) -> str:
        return self.presentation.name or "custom"

    @property
    def delta_estimate(self) -> DeltaEstimate | None:
        if self.cfg.delta is None and self._delta is None:
            self._delta = self._estimate_delta()
        return self._delta

    def _estimate_delta(self) -> DeltaEstimate:
        side = self.cfg.delta_side
        while side > 1:
            r = required_radius(side, 2)
            try:
                ball = self.ball(r, cap=DELTA_BALL_CAP)
            except BallTooLarge as exc:  # audit shorter sides instead
                log.info("delta at side %d unaffordable: %s", side, exc)
                side -= 1
                continue
            return estimate_delta(ball, side, self.cfg.delta_mode, seed=self.cfg.seed)
        raise ValueError("no affordable ball for the delta estimate")

    @property
    def delta(self) -> Fraction:
        """delta_ideal, the constant every bound is stated with."""
        if self.cfg.delta is not None:
            return Fraction(self.cfg.delta)
        return self.delta_estimate.delta_ideal

    @property
    def D(self) -> int:
        d = self.cfg.D
        if d is None:
            return int(12 * self.delta + 2)
        if d == PAPER_D:
            return int(10 ** 6 * self.delta + 10 ** 6)
        return int(d)

    @property
    def conforming(self) -> bool:
        return self.D >= 12 * self.delta

    def check_D(self) -> None:
        if not self.conforming and not self.cfg.force_D:
            raise ValueError(f"D = {self.D} is below 12*delta = {12 * self.delta}; pass --force-D to run anyway")

    @property
    def n_range(self) -> tuple[int, int]:
        if self.cfg.n_range:
            return self.cfg.n_range
        return DEFAULT_RANGES.get(self.cfg.preset or "", (1, 3))

    def complex_radius(self, n: int) -> int:
        """Smallest ball radius that decides every edge of K_n."""
        if 2 * n <= self.D:
            return n
        return n + math.ceil(self.D / 2)

    # -- balls -----------------------------------------------------------

    def _cache_path(self, radius: int) -> Path | None:
        if not self.cfg.use_cache:
            return None
        root = self.cfg.cache_dir or os.environ.get(CACHE_ENV)
        if not root:
            root = os.path.join(os.path.expanduser("~"), ".cache", "ripsbound")
        tag = hashlib.sha256(repr((self.presentation.symbols, self.presentation.relators,
                                   self.presentation.oracle_hint)).encode()).hexdigest()[:12]
        return Path(root) / f"{self.name}-{tag}-r{radius}.rball"

    def ball(self, radius: int, cap: int | None = None) -> CayleyBall:
        if radius in self._balls:
            return self._balls[radius]
        path = self._cache_path(radius)
        b = None
        if path is not None and path.exists():
            try:
                b = load_cache(path)
            except CacheError as exc:
                log.warning("ignoring cache %s: %s", path, exc)
        if b is None:
            kw = {"element_cap": cap} if cap else {}
            b = build_ball(self.presentation, radius, **kw)
            if path is not None:
                save_cache(b, path)
        self.hashes[radius] = content_hash(b)
        self._balls[radius] = b
        return b

    def main_ball(self, top: int) -> CayleyBall:
        r = self.cfg.radius if self.cfg.radius is not None else top
        return self.ball(r)

    # -- report envelope -------------------------------------------------

    def envelope(self, command: str, result: dict, status: str) -> dict:
        rep = {
            "schema": SCHEMA, "version": __version__, "command": command,
            "presentation": {"name": self.name, "symbols": list(self.presentation.symbols),
                             "relators": [self.presentation.format(r) for r in self.presentation.relators]},
            "config": self.cfg.echo(), "status": status, "result": result,
            "ball_hashes": {str(r): h for r, h in sorted(self.hashes.items())},
        }
        if command not in ("ball", "export") or self._delta is not None or self.cfg.delta is not None:
            rep["constants"] = {"delta_ideal": self.delta, "D": self.D, "conforming": self.conforming,
                                "delta_estimate": self._delta.as_dict() if self._delta else {"source": "override"}}
            if not self.conforming:
                rep["watermark"] = "NON-CONFORMING: D < 12*delta_ideal"
        return rep


def _digest(checks: list, limit: int = 5) -> dict:
    bad = [c for c in checks if not c.passed]
    measured = [c.measured for c in checks if getattr(c, "applicable", True)]
    return {"count": len(checks), "failed": len(bad), "max_measured": max(measured) if measured else None,
            "witnesses": [c.as_dict() for c in bad[:limit]]}


def _sample_count(cfg: RunConfig, default: int) -> int:
    return cfg.samples if cfg.samples is not None else default


# -- runners -------------------------------------------------------------

def run_ball(s: Session) -> tuple[dict, str]:
    r = s.cfg.radius if s.cfg.radius is not None else s.n_range[1]
    b = s.ball(r)
    return {"radius": r, "size": b.size, "sphere_sizes": b.sphere_sizes(), "hash": s.hashes[r]}, PASS


def sphere_stats(s: Session, ball: CayleyBall, n: int, homology: bool = True) -> dict:
    k = build_sphere_complex(ball, n, s.D)
    comps = connected_components(k)
    inner = sum(len(c) * (len(c) - 1) // 2 for c in comps)
    out = {"n": n, "vertices": k.n_vertices, "edges": k.n_edges, "triangles": k.n_triangles,
           "complete": k.complete, "components": len(comps),
           "component_sizes": sorted(len(c) for c in comps),
           "components_are_simplices": inner == k.n_edges}
    if homology:
        try:
            out["h1"] = homology_h1(k).as_dict()
        except ComplexTooLarge as exc:
            out["h1"] = None
            out["h1_skipped"] = str(exc)
    return out


def run_sphere(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    ball = s.main_ball(s.complex_radius(hi))
    rows = [sphere_stats(s, ball, n) for n in range(lo, hi + 1)]
    status = UNKNOWN if any(r.get("h1") is None for r in rows) else PASS
    return {"spheres": rows}, status


def run_project(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    ball = s.main_ball(hi)
    m = s.cfg.m if s.cfg.m is not None else max(0, hi - 1)
    count = _sample_count(s.cfg, 20)
    rows = []
    for g in list(ball.sphere(hi))[:count]:
        rows.append([ball.format(g), ball.format(project_vertex(ball, g, m))])
    bad = sum(functoriality_violations(ball, n) for n in range(lo, hi + 1))
    return {"n": hi, "m": m, "projections": rows, "functoriality_violations": bad}, VIOLATIONS if bad else PASS


def run_audit_projection(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    ball = s.main_ball(s.complex_radius(hi))
    pairs = [(hi, s.cfg.m)] if s.cfg.m is not None else [(n, m) for n in range(lo, hi + 1) for m in range(n)]
    audits, cache = [], {}
    for n, m in pairs:
        k_n = cache.get(n) or cache.setdefault(n, build_sphere_complex(ball, n, s.D))
        audits.append(audit_projection_simplicial(ball, n, m, s.D, s.delta, k_n))
    zone_bad = [a for a in audits if a.counterexamples]
    result = {"audits": [a.as_dict() for a in audits],
              "in_zone_pairs": sum(a.in_hypothesis_zone for a in audits),
              "counterexamples": len(zone_bad),
              "violations_outside_zone": sum(len(a.violations) for a in audits if not a.in_hypothesis_zone)}
    return result, VIOLATIONS if zone_bad else PASS


def _rays(s: Session, ball: CayleyBall, count: int, salt: int = 0) -> list[BoundaryRay]:
    N = min(s.cfg.N or ball.radius, ball.radius)
    return sample_rays(ball, N, count, seed=s.cfg.seed + salt)


def run_rays(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    ball = s.main_ball(s.cfg.N or hi + 1)
    rays = _rays(s, ball, _sample_count(s.cfg, 200))
    N = rays[0].N
    top = min(hi, N - 1)
    sets, close = [], []
    for r in rays:
        for n in range(max(lo, 0), top + 1):
            sets.append(admissible_projections(ball, r, n, s.delta))
            if n + 1 < N:
                close.append(check_close_projections(ball, r, n, s.delta, s.D))
    rng = random.Random(s.cfg.seed)
    products = []
    tuples = max(500, len(rays))
    for _ in range(tuples):
        r1, r2 = rng.choice(rays), rng.choice(rays)
        products.append(check_ray_product_bound(ball, r1, r2, rng.randint(0, N), rng.randint(0, N), s.delta))
    diam_bad = [a for a in sets if not a.passed]
    result = {
        "rays": len(rays), "N": N, "levels": [lo, top],
        "admissible_sets": {"count": len(sets), "failed": len(diam_bad),
                            "max_size": max((len(a.vertices) for a in sets), default=0),
                            "max_diameter": max((a.diameter for a in sets), default=0),
                            "bound": 6 * s.delta + 2,
                            "witnesses": [a.as_dict(ball) for a in diam_bad[:5]]},
        "close_projections": _digest(close) | {"bound": 6 * s.delta + 3 + 2 * s.D},
        "ray_products": _digest(products) | {"min_margin": min((p.extra["margin"] for p in products), default=None)},
    }
    ok = not diam_bad and all(c.passed for c in close) and all(p.passed for p in products)
    return result, PASS if ok else VIOLATIONS


def resolve_M(s: Session, default) -> int:
    M = s.cfg.M
    if M is None or M == "auto":
        return int(default)
    return int(M)


def run_ddag(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    lo = max(lo, 1)
    M = resolve_M(s, 8 * s.delta + 3)
    c = s.cfg.c if s.cfg.c is not None else s.delta
    ball = s.main_ball(max(hi, s.cfg.radius or 0))
    rows = []
    for n in range(lo, hi + 1):
        rep = check_ddag(ball, n, M, s.cfg.L_budget, c, s.cfg.ddag_mode)
        rows.append(rep.as_dict())
    table = {str(r["n"]): r["L_min"] for r in rows}
    growth_ok = True
    for a, b in zip(rows, rows[1:]):
        if a["L_min"] is not None and b["L_min"] is not None and b["L_min"] > a["L_min"] + 4 * s.delta:
            growth_ok = False
    ok = all(r["passed"] for r in rows) and growth_ok
    return {"M": M, "c": c, "mode": s.cfg.ddag_mode, "reports": rows, "L_min": table,
            "growth_bound": 4 * s.delta, "growth_ok": growth_ok}, PASS if ok else VIOLATIONS


def run_ddag_prime(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    M = resolve_M(s, s.D + 4 * s.delta + 2)
    L = s.cfg.L_budget if s.cfg.L_budget is not None else 4
    ball = s.main_ball(max(s.complex_radius(hi), s.cfg.N or hi + 1))
    rays = _rays(s, ball, _sample_count(s.cfg, 40))
    rows = []
    for n in range(max(lo, 1), min(hi, rays[0].N) + 1):
        rows.append(check_ddag_prime(ball, n, M, L, s.delta, s.D, rays, seed=s.cfg.seed).as_dict())
    ok = all(r["passed"] for r in rows)
    return {"M": M, "L_budget": L, "rays": len(rays), "reports": rows,
            "L_emp": {str(r["n"]): r["L_emp"] for r in rows}}, PASS if ok else VIOLATIONS


def run_scond(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    M = resolve_M(s, 2)
    ball = s.main_ball(s.complex_radius(hi))
    rows = []
    status = PASS
    for n in range(max(lo, 1), hi + 1):
        k = build_sphere_complex(ball, n, s.D)
        rep = check_s_condition(k, M, s.cfg.depth_budget, s.cfg.area_budget, "sampled",
                                _sample_count(s.cfg, 100), s.cfg.seed)
        rows.append(rep.as_dict())
        if rep.certified != rep.solved or not rep.lane_exact:
            status = worst(status, VIOLATIONS)
        elif rep.unknown:
            status = worst(status, UNKNOWN)
    return {"M": M, "loop_length": 3 * 2 ** M, "reports": rows,
            "L_emp": {str(r["n"]): r["L_emp"] for r in rows}}, status


def _imaps(s: Session, ball: CayleyBall, lo: int, hi: int):
    maps, rows, status = [], [], PASS
    ks = {}

    def k(n):
        if n not in ks:
            ks[n] = build_sphere_complex(ball, n, s.D)
        return ks[n]

    for n in range(lo, hi + 1):
        im = build_imap(ball, n, s.delta, s.D, depth_budget=s.cfg.depth_budget, area_budget=s.cfg.area_budget,
                        k_n=k(n), k_n1=k(n + 1))
        problems = certify_imap(ball, im, k(n), k(n + 1))
        row = im.as_dict() | {"certification_problems": problems[:10]}
        rows.append(row)
        maps.append(im)
        if problems or not im.vertex_bound_ok:
            status = worst(status, VIOLATIONS)
        elif not im.total:
            status = worst(status, UNKNOWN)
    return maps, rows, status, ks


def run_imap(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    ball = s.main_ball(s.complex_radius(hi + 1))
    _, rows, status, _ = _imaps(s, ball, max(lo, 0), hi)
    return {"maps": rows}, status


def run_growth(s: Session) -> tuple[dict, str]:
    lo, hi = s.n_range
    m = s.cfg.m if s.cfg.m is not None else lo
    if hi <= m:
        raise ValueError("growth needs the top of --n above --m")
    ball = s.main_ball(s.complex_radius(hi))
    maps, imap_rows, status, ks = _imaps(s, ball, m, hi - 1)
    rays = sample_rays(ball, ball.radius, _sample_count(s.cfg, 50), seed=s.cfg.seed)
    count = _sample_count(s.cfg, 2000)
    rows = []
    for n in range(m + 1, hi + 1):
        st = iterate_imap(ball, m, n, maps, rays, ks[m], sample=count, pair_sample=count, seed=s.cfg.seed)
        rows.append(st.as_dict())
    growth_ok = True
    for a, b in zip(rows, rows[1:]):
        for key in ("C_fit", "simplex_C_fit", "ray_C_fit"):
            if Fraction(b[key]) > Fraction(a[key]) + 2 * s.delta:
                growth_ok = False
    zero_ok = s.delta != 0 or all(Fraction(r[k]) == 0 for r in rows for k in ("C_fit", "simplex_C_fit", "ray_C_fit"))
    rng = random.Random(s.cfg.seed)
    steps = []
    for x in rng.sample(list(ball.sphere(m)), min(10, len(ball.sphere(m)))):
        seq = orbit(maps, ball, x, hi - m)
        steps.append(check_bounded_step_product(ball, seq, s.delta).as_dict() | {"start": ball.format(x)})
    step_ok = s.delta != 0 or all(Fraction(r["C_fit"]) == 0 for r in steps)
    ok = growth_ok and zero_ok and step_ok
    status = worst(status, PASS if ok else VIOLATIONS)
    return {"m": m, "maps": imap_rows, "growth": rows, "growth_bound": 2 * s.delta, "growth_ok": growth_ok,
            "zero_at_delta_zero": zero_ok, "step_products": steps}, status


def run_horoball(s: Session) -> tuple[dict, str]:
    ball = s.main_ball(s.cfg.radius or s.n_range[1] + 2)
    delta = s.delta
    xi = sample_rays(ball, ball.radius, 1, seed=s.cfg.seed)[0]
    seq = horoball_sequence(ball, xi)
    stages, direction = extract_stable_stages(ball, seq, s.cfg.max_stage, s.D)
    problems = stabilization_problems(ball, stages)
    iso = [p for st in stages for p in translation_isometry_problems(ball, st, s.D)]
    zetas = sample_rays(ball, ball.radius, _sample_count(s.cfg, 50), seed=s.cfg.seed + 1)
    projections, stability, traces, clusters = [], [], [], []
    for z in zetas:
        for st in stages:
            projections.append(stage_projection(ball, st, ray_from_stage(ball, st, z), delta))
        for a, b in zip(stages, stages[1:]):
            stability.append(check_stage_stability(ball, a, b, z, delta))
        traces.append(trace_geodesic_through_horoball(ball, stages, direction, z, delta))
    for st in stages:
        thr = st.n_i + 6 * delta
        for z in zetas[:5]:
            cluster = [w for w in zetas if gromov_product_words(ball, w.word, z.word) >= thr]
            if len(cluster) > 1 or thr <= ball.radius:
                clusters.append(check_local_diameter(ball, st, cluster, delta, s.D))
    applicable = [t for t in traces if t.applicable]
    result = {
        "xi": xi.format(ball), "direction": ball.presentation.format(direction),
        "stages": [st.as_dict(ball) for st in stages],
        "stabilization_problems": problems, "isometry_problems": iso,
        "projections": _digest(projections) | {"bound": 6 * delta + 1,
                                               "outside_stage": sum(not p.inside for p in projections)},
        "stability": _digest(stability) | {"bound": 10 * delta + 2,
                                           "projectable": sum(c.projectable for c in stability)},
        "traces": {"count": len(traces), "applicable": len(applicable),
                   "failed": sum(not t.passed for t in traces),
                   "nonempty": sum(bool(t.deep_from) for t in applicable),
                   "max_hit_radius": max((t.max_hit for t in applicable), default=0),
                   "witnesses": [t.as_dict() for t in traces if not t.passed][:5]},
        "local_diameter": {"count": len(clusters), "failed": sum(not c["passed"] for c in clusters),
                           "witnesses": [c for c in clusters if not c["passed"]][:5]},
        "samples": len(zetas),
    }
    ok = (not problems and not iso and all(p.passed for p in projections) and all(c.passed for c in stability)
          and all(t.passed for t in traces) and all(c["passed"] for c in clusters))
    return result, PASS if ok else VIOLATIONS


# -- classification ------------------------------------------------------

VERDICTS = ("two-point", "Cantor-like", "circle-like", "connected-unclassified", "disconnected-unclassified")


def _rank_q(rows: list[dict[int, int]]) -> int:
    """Rank over the rationals of sparse integer rows."""
    pivots: dict[int, dict[int, Fraction]] = {}
    rank = 0
    for r in rows:
        v = {k: Fraction(x) for k, x in r.items() if x}
        while v:
            p = min(v)
            if p not in pivots:
                pivots[p] = v
                rank += 1
                break
            f = v[p] / pivots[p][p]
            for k, x in pivots[p].items():
                y = v.get(k, 0) - f * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return rank


def h1_rank_under_truncation(ball: CayleyBall, k_n: SphereComplex, k_m: SphereComplex) -> dict:
    """Rank of the image of H_1(K_n) generator cycles in H_1(K_m) under p^n_m."""
    loops = generator_loops(k_n)
    ctx = h1_context(k_m)
    rel = [ctx.coordinates([a, b, c]) for a, b, c in k_m.iter_triangles()]
    base = _rank_q(rel)
    images = []
    for lp in loops:
        img = [k_m.position(project_vertex(ball, k_n.vertices[v], k_m.n)) for v in lp]
        for a, b in zip(img, img[1:] + img[:1]):
            if a != b and not k_m.adjacent(a, b):
                return {"generators": len(loops), "image_rank": None, "anomaly": "image is not a loop"}
        images.append(ctx.coordinates(img))
    return {"generators": len(loops), "image_rank": _rank_q(rel + images) - base}


def gather_evidence(s: Session) -> dict:
    lo, hi = s.n_range
    lo = max(lo, 1)
    ball = s.main_ball(s.complex_radius(hi))
    rows = [sphere_stats(s, ball, n) for n in range(lo, hi + 1)]
    rank_checks = []
    prev = None
    for row in rows:
        h1 = row.get("h1")
        if prev is not None and h1 and prev.get("h1") and h1["betti_1"] >= 1 and prev["h1"]["betti_1"] >= 1:
            k_n = build_sphere_complex(ball, row["n"], s.D)
            k_m = build_sphere_complex(ball, prev["n"], s.D)
            rank_checks.append({"n": row["n"], "m": prev["n"], "betti_1": h1["betti_1"]}
                               | h1_rank_under_truncation(ball, k_n, k_m))
        prev = row
    functoriality = sum(functoriality_violations(ball, n) for n in range(lo, hi + 1))
    return {"n_range": [lo, hi], "D": s.D, "delta_ideal": s.delta, "per_n": rows,
            "h1_rank_checks": rank_checks, "functoriality_violations": functoriality}


def _tail_start(rows: list[dict], pred) -> int | None:
    """Least n such that pred holds for every audited row from n on."""
    start = None
    for row in reversed(rows):
        if not pred(row):
            break
        start = row["n"]
    return start


def classify_evidence(ev: dict) -> dict:
    """Pure decision rules over the evidence fields."""
    rows = ev["per_n"]
    lo, hi = ev["n_range"]
    qual = f"at audited range n in [{lo}..{hi}], D={ev['D']}"
    counts = [r["components"] for r in rows]
    anomalies = []
    if any(b < a for a, b in zip(counts, counts[1:])):
        anomalies.append(f"component counts not monotone: {counts}")
    evidence = [f"component counts {counts}"]

    two = _tail_start(rows, lambda r: r["components"] == 2 and r["components_are_simplices"])
    if not anomalies and two is not None and (two < hi or lo == hi):
        return {"verdict": "two-point", "n0": two, "qualifier": qual,
                "evidence": evidence + ["every component is a single simplex"], "anomalies": anomalies}
    increasing = all(b > a for a, b in zip(counts, counts[1:])) and len(counts) >= 2
    if increasing and all(r["components_are_simplices"] for r in rows):
        return {"verdict": "Cantor-like", "n0": lo, "qualifier": qual,
                "evidence": evidence + ["strictly increasing, every component a simplex"], "anomalies": anomalies}

    def circle(r):
        h = r.get("h1")
        return r["components"] == 1 and h is not None and h["betti_1"] == 1 and not h["torsion"]

    n0 = _tail_start(rows, circle)
    ranks = {c["n"]: c for c in ev.get("h1_rank_checks", [])}
    if n0 is not None and (n0 < hi or lo == hi):
        preserved = all(ranks.get(r["n"], {}).get("image_rank") == 1 for r in rows if n0 < r["n"])
        if preserved:
            return {"verdict": "circle-like", "n0": n0, "qualifier": qual,
                    "evidence": evidence + [f"connected with betti_1 = 1 and no torsion for n >= {n0}",
                                            "truncation keeps the H_1 generator"], "anomalies": anomalies}
        anomalies.append("truncation does not preserve H_1 rank")
    h1s = [r.get("h1") for r in rows]
    evidence.append("betti_1 " + str([h["betti_1"] if h else None for h in h1s]))
    verdict = "connected-unclassified" if counts and counts[-1] == 1 else "disconnected-unclassified"
    return {"verdict": verdict, "n0": None, "qualifier": qual, "evidence": evidence, "anomalies": anomalies}


def run_classify(s: Session) -> tuple[dict, str]:
    ev = gather_evidence(s)
    verdict = classify_evidence(ev)
    status = UNKNOWN if any(r.get("h1") is None for r in ev["per_n"]) else PASS
    if ev["functoriality_violations"]:
        status = VIOLATIONS
    return {"evidence": ev, "classification": verdict}, status


def run_export(s: Session, what: str, fmt: str, out: str | None) -> tuple[dict, str]:
    lo, hi = s.n_range
    if what == "ball":
        ball = s.main_ball(hi)
        if not out:
            raise ValueError("ball export needs --artifact")
        digest = save_cache(ball, out)
        return {"what": "ball", "radius": ball.radius, "hash": digest, "path": os.path.basename(out)}, PASS
    ball = s.main_ball(s.complex_radius(hi))
    k = build_sphere_complex(ball, hi, s.D)
    if k.complete and k.n_vertices > 2000:
        raise ValueError("refusing to list the edges of a large full simplex")
    text = k.to_dot() if fmt == "dot" else json.dumps(_plain(k.to_json()), sort_keys=True) + "\n"
    if out:
        write_atomic(out, text)
    return {"what": "complex", "n": hi, "format": fmt, "vertices": k.n_vertices, "edges": k.n_edges,
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
            "path": os.path.basename(out) if out else None}, PASS


RUNNERS = {
    "ball": run_ball, "sphere": run_sphere, "project": run_project, "audit-projection": run_audit_projection,
    "rays": run_rays, "ddag": run_ddag, "ddag-prime": run_ddag_prime, "scond": run_scond, "imap": run_imap,
    "growth": run_growth, "horoball": run_horoball, "classify": run_classify,
}


def run(command: str, cfg: RunConfig, **extra) -> dict:
    """Run one command and wrap the result in the report envelope."""
    s = Session(cfg)
    if command not in ("ball", "export"):
        s.check_D()
    if command == "export":
        result, status = run_export(s, **extra)
    else:
        result, status = RUNNERS[command](s)
    return s.envelope(command, result, status)
