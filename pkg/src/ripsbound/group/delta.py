"""Slim-triangle constant of the Cayley graph, audited on a finite ball.

Every triangle with sides of length at most ``r`` can be translated so that
the side being measured starts at the identity.  For a point ``p`` on a
geodesic from ``e`` to ``y`` and a third vertex ``z``, the worst choice of
the other two sides is found by a bottleneck dynamic programme over the
geodesic DAG: ``f(q) = min(d(p, q), max over DAG parents f)``.  The DAG of
geodesics from ``y`` is the left translate of the DAG from ``e``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ball import CayleyBall, DistanceUnavailable


@dataclass(frozen=True)
class DeltaEstimate:
    delta_raw: Fraction
    coverage: str  # "exhaustive" or "sampled"
    side_bound: int
    samples: int | None = None
    seed: int | None = None
    triangles: int = 0
    witness: tuple[int, int, int] | None = field(default=None, compare=False)

    @property
    def delta_ideal(self) -> Fraction:
        return 4 * self.delta_raw

    def as_dict(self) -> dict:
        cov = {"mode": self.coverage, "side_bound": self.side_bound}
        if self.coverage == "sampled":
            cov.update(count=self.samples, seed=self.seed)
        return {
            "delta_raw": str(self.delta_raw),
            "delta_ideal": str(self.delta_ideal),
            "coverage": cov,
            "audited_side_pairs": self.triangles,
        }


def required_radius(side_bound: int, cap: int) -> int:
    """Ball radius needed to audit sides <= side_bound with distances up to cap exactly."""
    far = (3 * side_bound) // 2
    return max(far, (side_bound + far + cap) // 2)


class _Dag:
    """Parent edges of the geodesic DAG from e inside ball(r), grouped by level."""

    def __init__(self, ball: CayleyBall, r: int):
        self.r = r
        self.stop = int(ball.offsets[r + 1])
        mul = ball.mul[: self.stop]
        lv = ball.level
        self.levels = []
        for n in range(1, r + 1):
            a, b = int(ball.offsets[n]), int(ball.offsets[n + 1])
            nbr = mul[a:b]
            child, col = np.nonzero((nbr >= 0) & (lv[np.maximum(nbr, 0)] == n - 1))
            self.levels.append((a, b, child + a, nbr[child, col].astype(np.int64)))
        self.parent = np.full(self.stop, -1, dtype=np.int64)
        self.letter = np.zeros(self.stop, dtype=np.int64)
        index = {w: i for i, w in enumerate(ball.words[: self.stop])}
        for i in range(1, self.stop):
            w = ball.words[i]
            self.parent[i] = index[w[:-1]]
            self.letter[i] = w[-1]

    def translate(self, ball: CayleyBall, y: int) -> np.ndarray:
        """T[c] = index of y*c for c in ball(r), -1 when the walk leaves the ball."""
        t = np.full(self.stop, -1, dtype=np.int64)
        t[0] = y
        mul = ball.mul
        for a, b, _, _ in self.levels:
            par = t[self.parent[a:b]]
            ok = par >= 0
            res = np.full(b - a, -1, dtype=np.int64)
            res[ok] = mul[par[ok], self.letter[a:b][ok]]
            t[a:b] = res
        return t

    def bottleneck(self, values: np.ndarray) -> np.ndarray:
        """Max over geodesics from e to each node of the min value along the path."""
        f = values.copy()
        for a, b, child, par in self.levels:
            best = np.zeros(b - a, dtype=values.dtype)
            np.maximum.at(best, child - a, f[par])
            f[a:b] = np.minimum(values[a:b], best)
        return f


def estimate_delta(ball: CayleyBall, side_bound: int | None = None, mode: str = "exhaustive",
                   count: int = 200, seed: int = 0) -> DeltaEstimate:
    """Largest slimness defect over geodesic triangles with sides <= side_bound.

    ``mode="exhaustive"`` audits every such triangle (up to translation) and
    every choice of geodesic sides; ``mode="sampled"`` restricts the measured
    side's endpoint to ``count`` random elements, giving a lower bound.
    """
    if ball.radius < 2:
        raise ValueError("delta estimation needs a ball of radius >= 2")
    if side_bound is None:
        side_bound = ball.radius
        while side_bound > 1 and required_radius(side_bound, 2) > ball.radius:
            side_bound -= 1
    r = side_bound
    if (3 * r) // 2 > ball.radius:
        raise DistanceUnavailable(f"sides <= {r} need a ball of radius >= {(3 * r) // 2}")
    dag = _Dag(ball, r)
    targets = list(range(1, dag.stop))
    if mode == "sampled":
        rng = random.Random(seed)
        targets = sorted(rng.sample(targets, min(count, len(targets))))
    elif mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    lv = ball.level
    n_all = ball.size
    best = 0
    witness = None
    pairs = 0
    f_cache: dict[tuple[int, int], np.ndarray] = {}

    def dist_field(p: int, cap: int) -> np.ndarray:
        if required_radius(r, cap) > ball.radius:
            raise DistanceUnavailable(f"distance cap {cap} not certifiable in radius {ball.radius}")
        d = np.full(n_all + 1, cap, dtype=np.int16)  # slot n_all absorbs index -1
        for q, k in ball.bfs([p], cap - 1).items():
            d[q] = k
        return d

    for y in targets:
        trans = dag.translate(ball, y)
        valid = (trans >= 0) & (lv[np.maximum(trans, 0)] <= r) & (trans < dag.stop)
        zs = trans[valid]
        interval = ball.interval(0, y)
        for p in sorted(interval):
            pairs += int(valid.sum())
            cap = best + 1
            while True:
                dist = dist_field(p, cap)
                key = (p, cap)
                f = f_cache.get(key)
                if f is None:
                    f = dag.bottleneck(dist[: dag.stop])
                    f_cache[key] = f
                g = dag.bottleneck(dist[trans])
                defect = np.minimum(f[zs], g[valid])
                m = int(defect.max()) if defect.size else 0
                if m < cap:
                    break
                best = cap
                witness = (p, y, int(zs[int(np.argmax(defect))]))
                cap += 1
    return DeltaEstimate(Fraction(best), mode, r, count if mode == "sampled" else None,
                         seed if mode == "sampled" else None, pairs, witness)
