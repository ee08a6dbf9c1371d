"""Integral H_0 and H_1 of a 2-skeleton by sparse Smith normal form.

Cycles are coordinatized by the edges outside a spanning forest: a 1-cycle
is determined by its non-tree coefficients, so H_1 is the cokernel of the
triangle boundaries restricted to those rows.  Elimination keeps the row
operations so that membership of an arbitrary cycle in the boundary lattice
can be decided afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .sphere import ComplexTooLarge, SphereComplex, connected_components

DEFAULT_MATRIX_BUDGET = 2_000_000  # nonzero entries of the relation matrix


@dataclass(frozen=True)
class H1Summary:
    betti_0: int
    betti_1: int
    torsion: tuple[int, ...] = ()
    method: str = "snf"

    def as_dict(self) -> dict:
        return {"betti_0": self.betti_0, "betti_1": self.betti_1, "torsion": list(self.torsion),
                "method": self.method}


def _invariant_factors(diag: list[int]) -> list[int]:
    """Turn a diagonal of nonzero integers into a divisibility chain."""
    d = sorted(abs(x) for x in diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


class SparseSNF:
    """Smith reduction of a sparse integer matrix given as ``{row: {col: value}}``.

    Pivots are chosen by smallest magnitude, then smallest Markowitz cost
    (row fill times column fill).  ``row_ops`` records the left transform.
    """

    def __init__(self, rows: dict[int, dict[int, int]], n_rows: int):
        self.n_rows = n_rows
        self.rows = {r: dict(v) for r, v in rows.items() if v}
        self.cols: dict[int, set[int]] = {}
        for r, v in self.rows.items():
            for c in v:
                self.cols.setdefault(c, set()).add(r)
        self.row_ops: list[tuple[int, int, int]] = []  # row[t] -= q * row[s]
        self.pivots: dict[int, int] = {}  # row -> pivot value (after full reduction)
        self._reduce()

    def _pick(self) -> tuple[int, int]:
        best = None
        for r, v in self.rows.items():
            for c, x in v.items():
                key = (abs(x), (len(v) - 1) * (len(self.cols[c]) - 1), r, c)
                if best is None or key < best:
                    best = key
                    if key[0] == 1 and key[1] == 0:
                        return r, c
        assert best is not None
        return best[2], best[3]

    def _row_sub(self, t: int, s: int, q: int) -> None:
        rt, rs = self.rows[t], self.rows[s]
        for c, x in rs.items():
            y = rt.get(c, 0) - q * x
            if y:
                if c not in rt:
                    self.cols[c].add(t)
                rt[c] = y
            elif c in rt:
                del rt[c]
                self.cols[c].discard(t)
        if not rt:
            del self.rows[t]
        self.row_ops.append((t, s, q))

    def _col_sub(self, t: int, s: int, q: int) -> None:
        # column[t] -= q * column[s]
        for r in list(self.cols[s]):
            row = self.rows[r]
            y = row.get(t, 0) - q * row[s]
            if y:
                if t not in row:
                    self.cols.setdefault(t, set()).add(r)
                row[t] = y
            elif t in row:
                del row[t]
                self.cols[t].discard(r)

    def _reduce(self) -> None:
        while self.rows:
            r, c = self._pick()
            while True:
                a = self.rows[r][c]
                moved = False
                for t in sorted(self.cols[c] - {r}):
                    b = self.rows[t][c]
                    self._row_sub(t, r, b // a)
                    if c in self.rows.get(t, ()):
                        r = t
                        moved = True
                        break
                if moved:
                    continue
                a = self.rows[r][c]
                for t in sorted(set(self.rows[r]) - {c}):
                    b = self.rows[r][t]
                    self._col_sub(t, c, b // a)
                    if t in self.rows[r]:
                        c = t
                        moved = True
                        break
                if not moved:
                    break
            self.pivots[r] = self.rows[r][c]
            del self.rows[r]
            del self.cols[c]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def invariant_factors(self) -> list[int]:
        return _invariant_factors(list(self.pivots.values()))

    def in_image(self, vec: dict[int, int]) -> bool:
        """Whether ``vec`` (indexed by row) lies in the integer column span."""
        v = dict(vec)
        for t, s, q in self.row_ops:
            x = v.get(s, 0)
            if x:
                v[t] = v.get(t, 0) - q * x
        for r, x in v.items():
            if x == 0:
                continue
            p = self.pivots.get(r)
            if p is None or x % p:
                return False
        return True


@dataclass
class H1Context:
    """Spanning forest, cycle coordinates and reduced relation matrix of a complex."""

    complex: SphereComplex
    tree: set[tuple[int, int]] = field(default_factory=set)
    cycle_index: dict[tuple[int, int], int] = field(default_factory=dict)
    snf: SparseSNF | None = None
    components: int = 0

    def coordinates(self, loop: list[int]) -> dict[int, int]:
        """Non-tree edge coefficients of a closed vertex sequence."""
        vec: dict[int, int] = {}
        n = len(loop)
        for i in range(n):
            a, b = loop[i], loop[(i + 1) % n]
            if a == b:
                continue
            e, sgn = ((a, b), 1) if a < b else ((b, a), -1)
            k = self.cycle_index.get(e)
            if k is not None:
                vec[k] = vec.get(k, 0) + sgn
        return {k: v for k, v in vec.items() if v}

    def is_boundary(self, loop: list[int]) -> bool:
        if self.snf is None:
            return True
        return self.snf.in_image(self.coordinates(loop))

    def summary(self) -> H1Summary:
        if self.snf is None:
            return H1Summary(self.components, 0, (), "complete-simplex")
        factors = self.snf.invariant_factors()
        betti_1 = len(self.cycle_index) - self.snf.rank
        return H1Summary(self.components, betti_1, tuple(x for x in factors if x > 1))


def h1_context(k: SphereComplex, budget: int = DEFAULT_MATRIX_BUDGET) -> H1Context:
    if k.complete:
        # a simplex is contractible
        return H1Context(k, components=1 if k.n_vertices else 0)
    comps = connected_components(k)
    # BFS spanning forest in vertex order
    tree: set[tuple[int, int]] = set()
    seen = [False] * k.n_vertices
    for comp in comps:
        root = comp[0]
        seen[root] = True
        queue = [root]
        for x in queue:
            for y in sorted(k.neighbours(x)):
                if not seen[y]:
                    seen[y] = True
                    tree.add((min(x, y), max(x, y)))
                    queue.append(y)
    cycle_index: dict[tuple[int, int], int] = {}
    for e in k.iter_edges():
        if e not in tree:
            cycle_index[e] = len(cycle_index)
    if 3 * k.n_triangles > budget:
        raise ComplexTooLarge(f"relation matrix {len(cycle_index)} x {k.n_triangles} exceeds budget {budget}")
    rows: dict[int, dict[int, int]] = {}
    for j, (a, b, c) in enumerate(k.iter_triangles()):
        # boundary = [b,c] - [a,c] + [a,b]
        for e, s in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
            i = cycle_index.get(e)
            if i is not None:
                row = rows.setdefault(i, {})
                row[j] = row.get(j, 0) + s
    return H1Context(k, tree, cycle_index, SparseSNF(rows, len(cycle_index)), len(comps))


def homology_h1(k: SphereComplex, budget: int = DEFAULT_MATRIX_BUDGET) -> H1Summary:
    return h1_context(k, budget).summary()


def smith_invariants(matrix: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense integer matrix (convenience wrapper)."""
    rows = {i: {j: x for j, x in enumerate(r) if x} for i, r in enumerate(matrix)}
    return SparseSNF(rows, len(matrix)).invariant_factors()
