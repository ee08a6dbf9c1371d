"""Breadth-first Cayley balls with shortlex normal forms.

Elements are numbered in shortlex order of their normal forms, so sphere
``S_n`` is the contiguous block ``offsets[n]:offsets[n+1]`` and the identity
is element 0.  ``mul[g, s]`` is the index of ``g * s`` or -1 when that
product leaves the ball.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .oracles import FreeOracle, WordOracle, make_oracle
from .presentation import GroupPresentation, Word

log = logging.getLogger(__name__)

DEFAULT_ELEMENT_CAP = 2_000_000


class BallTooLarge(RuntimeError):
    pass


class OracleInconsistency(RuntimeError):
    """The normalizer produced a non-canonical answer during enumeration."""


class DistanceUnavailable(ValueError):
    """A distance cannot be certified from inside the ball."""


class OutsideBall(KeyError):
    pass


@dataclass
class CayleyBall:
    presentation: GroupPresentation
    radius: int
    words: list[Word]
    offsets: np.ndarray
    mul: np.ndarray
    oracle_kind: str = ""
    _index: dict[Word, int] | None = field(default=None, repr=False)
    _adj: list[list[int]] | None = field(default=None, repr=False)
    _level: np.ndarray | None = field(default=None, repr=False)
    oracle: WordOracle | None = field(default=None, repr=False, compare=False)

    base: int = 0

    # -- indexing ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.words)

    @property
    def size(self) -> int:
        return len(self.words)

    def sphere(self, n: int) -> range:
        if not 0 <= n <= self.radius:
            raise ValueError(f"sphere {n} outside ball of radius {self.radius}")
        return range(int(self.offsets[n]), int(self.offsets[n + 1]))

    def sphere_sizes(self) -> list[int]:
        return [int(b - a) for a, b in zip(self.offsets[:-1], self.offsets[1:])]

    @property
    def level(self) -> np.ndarray:
        """Word length of each element (its sphere index)."""
        if self._level is None:
            lv = np.empty(len(self.words), dtype=np.int16)
            for n in range(self.radius + 1):
                lv[self.offsets[n]:self.offsets[n + 1]] = n
            self._level = lv
        return self._level

    def length(self, g: int) -> int:
        return len(self.words[g])

    @property
    def adj(self) -> list[list[int]]:
        """Right-multiplication table as nested lists (fast scalar access)."""
        if self._adj is None:
            self._adj = self.mul.tolist()
        return self._adj

    def index_of(self, word: Sequence[int]) -> int:
        """Index of a stored normal form (exact match, no normalization)."""
        if self._index is None:
            self._index = {w: i for i, w in enumerate(self.words)}
        try:
            return self._index[tuple(word)]
        except KeyError:
            raise OutsideBall(f"{self.presentation.format(word)} is not a stored normal form") from None

    def element(self, word: Sequence[int], start: int = 0) -> int:
        """Walk ``word`` from ``start`` through the multiplication table."""
        adj = self.adj
        g = start
        for x in word:
            g = adj[g][x]
            if g < 0:
                raise OutsideBall(f"walk of {self.presentation.format(word)} leaves the ball")
        return g

    def geodesic_word(self, g: int) -> Word:
        """The stored shortlex-least geodesic word of ``g``."""
        return self.words[g]

    def prefix(self, g: int, m: int) -> int:
        """Element spelled by the length-``m`` prefix of the normal form of ``g``."""
        w = self.words[g]
        if not 0 <= m <= len(w):
            raise ValueError(f"prefix length {m} outside 0..{len(w)}")
        return self.element(w[:m])

    def neighbours(self, g: int) -> Iterator[int]:
        for h in self.adj[g]:
            if h >= 0:
                yield h

    def format(self, g: int) -> str:
        return self.presentation.format(self.words[g])

    # -- metric -----------------------------------------------------------
    def bfs(self, sources: Iterable[int], max_depth: int, blocked: set[int] | None = None) -> dict[int, int]:
        """In-ball graph distances from a source set, truncated at ``max_depth``."""
        adj = self.adj
        dist: dict[int, int] = {}
        frontier = []
        for s in sources:
            if blocked and s in blocked:
                continue
            if s not in dist:
                dist[s] = 0
                frontier.append(s)
        d = 0
        while frontier and d < max_depth:
            d += 1
            nxt = []
            for g in frontier:
                for h in adj[g]:
                    if h >= 0 and h not in dist and not (blocked and h in blocked):
                        dist[h] = d
                        nxt.append(h)
            frontier = nxt
        return dist

    def bfs_array(self, source: int, max_depth: int, allowed: np.ndarray | None = None,
                  parents: bool = False):
        """Vectorised BFS; returns distances (-1 when unreached) and optionally parents."""
        dist = np.full(self.size, -1, dtype=np.int32)
        par = np.full(self.size, -1, dtype=np.int64) if parents else None
        if allowed is not None and not allowed[source]:
            return (dist, par) if parents else dist
        dist[source] = 0
        frontier = np.array([source], dtype=np.int64)
        d = 0
        while frontier.size and d < max_depth:
            d += 1
            nb = self.mul[frontier]
            src = np.repeat(frontier, nb.shape[1])
            nb = nb.reshape(-1).astype(np.int64)
            ok = nb >= 0
            nb, src = nb[ok], src[ok]
            ok = dist[nb] < 0
            if allowed is not None:
                ok &= allowed[nb]
            nb, src = nb[ok], src[ok]
            nb, first = np.unique(nb, return_index=True)
            dist[nb] = d
            if parents:
                par[nb] = src[first]
            frontier = nb
        return (dist, par) if parents else dist

    def exact_depth(self, g: int, h: int) -> int:
        """Largest L such that any geodesic of length <= L from g to h lies in the ball.

        A point on a geodesic of length d between g and h has word length at most
        floor((|g| + |h| + d) / 2).
        """
        return 2 * self.radius + 1 - self.length(g) - self.length(h)

    def distance(self, g: int, h: int) -> int:
        if g == h:
            return 0
        lg, lh = self.length(g), self.length(h)
        if lg == 0:
            return lh
        if lh == 0:
            return lg
        limit = self.exact_depth(g, h)
        d = self._pair_bfs(g, h, limit) if limit >= abs(lg - lh) else None
        if d is None:
            if self.oracle is not None:
                return self.word_distance(self.words[g], self.words[h])
            raise DistanceUnavailable(
                f"d({self.format(g)}, {self.format(h)}) not certifiable in radius {self.radius}")
        return d

    # -- words beyond the ball ---------------------------------------------
    def normalize(self, word: Sequence[int]) -> Word:
        if self.oracle is None:
            raise DistanceUnavailable("no word oracle attached to this ball")
        return self.oracle.normalize(word)

    def word_length(self, word: Sequence[int]) -> int:
        return len(self.normalize(word))

    def word_distance(self, u: Sequence[int], v: Sequence[int]) -> int:
        """d(u, v) = |u^-1 v| through the word oracle; exact for any pair of words."""
        return len(self.normalize(self.presentation.invert(u) + tuple(v)))

    def within(self, g: int, h: int, k: int) -> bool:
        """Decide d(g, h) <= k, using the identity as a free witness when possible."""
        lg, lh = self.length(g), self.length(h)
        if lg + lh <= k:
            return True
        if abs(lg - lh) > k:
            return False
        d = self._pair_bfs(g, h, k)
        if d is not None:
            return True
        if self.exact_depth(g, h) < k:
            if self.oracle is not None:
                return self.word_distance(self.words[g], self.words[h]) <= k
            raise DistanceUnavailable(
                f"cannot decide d({self.format(g)}, {self.format(h)}) <= {k} in radius {self.radius}")
        return False

    def _pair_bfs(self, g: int, h: int, limit: int) -> int | None:
        # bidirectional search; fronts are small at desk scale
        if g == h:
            return 0
        adj = self.adj
        da, db = {g: 0}, {h: 0}
        fa, fb = [g], [h]
        ra = rb = 0
        while fa and fb and ra + rb < limit:
            if len(fa) <= len(fb):
                ra += 1
                nxt = []
                for x in fa:
                    for y in adj[x]:
                        if y >= 0 and y not in da:
                            if y in db:
                                return ra + db[y]
                            da[y] = ra
                            nxt.append(y)
                fa = nxt
            else:
                rb += 1
                nxt = []
                for x in fb:
                    for y in adj[x]:
                        if y >= 0 and y not in db:
                            if y in da:
                                return rb + da[y]
                            db[y] = rb
                            nxt.append(y)
                fb = nxt
        return None

    def gromov_product(self, x: int, y: int, z: int) -> Fraction:
        """(y|z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2, exactly."""
        return Fraction(self.distance(x, y) + self.distance(x, z) - self.distance(y, z), 2)

    def geodesics(self, g: int, h: int, limit: int = 100000) -> list[list[int]]:
        """All geodesic vertex paths from g to h (backward BFS over distance-decreasing edges)."""
        d = self.distance(g, h)
        dist_g = self.bfs([g], d)
        dist_h = self.bfs([h], d)
        paths: list[list[int]] = []
        adj = self.adj

        def extend(path: list[int]) -> None:
            if len(paths) >= limit:
                raise BallTooLarge(f"more than {limit} geodesics between {g} and {h}")
            x = path[-1]
            if x == h:
                paths.append(list(path))
                return
            k = dist_g[x] + 1
            for y in sorted(set(adj[x])):
                if y >= 0 and dist_g.get(y) == k and dist_h.get(y) == d - k:
                    path.append(y)
                    extend(path)
                    path.pop()

        extend([g])
        return paths

    def interval(self, g: int, h: int) -> set[int]:
        """Union of all geodesics from g to h."""
        if g == 0:
            # geodesics from e descend one level per step
            out = {h}
            layer = [h]
            while layer:
                layer = list({p for x in layer for p in self.predecessors(x)})
                out.update(layer)
            return out
        d = self.distance(g, h)
        dg = self.bfs([g], d)
        dh = self.bfs([h], d)
        return {x for x, a in dg.items() if dh.get(x, -1) == d - a}

    def predecessors(self, g: int) -> list[int]:
        """Neighbours of g one step closer to the identity."""
        lg = self.length(g)
        return [h for h in self.adj[g] if h >= 0 and self.length(h) == lg - 1]


def build_ball(presentation: GroupPresentation, radius: int, oracle: WordOracle | None = None,
               element_cap: int = DEFAULT_ELEMENT_CAP, close_boundary: bool = True) -> CayleyBall:
    """Enumerate the ball of the given radius breadth first.

    Each candidate ``w_g s`` is normalized; it is a new element exactly when
    its normal form has full length and was not seen before.  Because spheres
    are processed in shortlex order, a genuinely new element must first appear
    as ``w_g s`` itself; any other outcome means the oracle is not canonical
    and enumeration stops.  With ``close_boundary`` the edges inside the
    outermost sphere are resolved too.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    oracle = oracle or make_oracle(presentation)
    k = presentation.rank
    inv = presentation.inverse
    free = isinstance(oracle, FreeOracle)
    words: list[Word] = [()]
    index: dict[Word, int] = {(): 0}
    parent: list[int] = [-1]
    adj: list[list[int]] = [[-1] * k]
    offsets = [0, 1]
    for n in range(radius + 1):
        if n == radius and not close_boundary:
            break
        start, end = offsets[n], offsets[n + 1]
        for g in range(start, end):
            wg = words[g]
            row = adj[g]
            for s in range(k):
                if row[s] != -1:
                    continue
                if wg and wg[-1] == inv[s]:
                    t = parent[g]
                else:
                    u = wg + (s,)
                    key = u if free else oracle.normalize(u)
                    ln = len(key)
                    if ln <= n:
                        t = index.get(key, -1)
                        if t < 0:
                            raise OracleInconsistency(
                                f"normal form {presentation.format(key)} of {presentation.format(u)} is unknown")
                    elif ln == n + 1:
                        if n == radius:
                            continue
                        t = index.get(key, -1)
                        if t < 0:
                            if key != u:
                                raise OracleInconsistency(
                                    f"{presentation.format(u)} normalized to unseen {presentation.format(key)}")
                            t = len(words)
                            if t >= element_cap:
                                raise BallTooLarge(f"ball of radius {radius} exceeds {element_cap} elements")
                            words.append(key)
                            index[key] = t
                            parent.append(g)
                            adj.append([-1] * k)
                    else:
                        raise OracleInconsistency(f"normalizing {presentation.format(u)} made it longer")
                row[s] = t
                adj[t][inv[s]] = g
        if n < radius:
            offsets.append(len(words))
            log.debug("sphere %d: %d elements", n + 1, offsets[-1] - offsets[-2])
    ball = CayleyBall(presentation, radius, words, np.asarray(offsets, dtype=np.int64),
                      np.asarray(adj, dtype=np.int32).reshape(len(words), k), oracle.kind)
    ball._index = index
    ball._adj = adj
    ball.oracle = oracle
    return ball
