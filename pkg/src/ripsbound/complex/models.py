"""Iterated barycentric subdivisions of the interval and the 2-simplex.

Vertices are named by exact barycentric coordinates, so numbering is
deterministic: vertices are sorted by their coordinate tuples.
"""
from __future__ import annotations

from fractions import Fraction

from .sphere import SphereComplex


def _mid(*pts):
    n = len(pts)
    return tuple(sum(c) / n for c in zip(*pts))


def _label(p) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


def subdivide_model(base: str, k: int) -> SphereComplex:
    """sd^k of the interval (``"interval"``) or of the 2-simplex (``"triangle"``)."""
    if k < 0:
        raise ValueError("subdivision depth must be non-negative")
    one, zero = Fraction(1), Fraction(0)
    if base == "interval":
        pts = [(one - Fraction(j, 2 ** k), Fraction(j, 2 ** k)) for j in range(2 ** k + 1)]
        edges_p = [(pts[j], pts[j + 1]) for j in range(2 ** k)]
        tris_p: list = []
    elif base == "triangle":
        p, q, r = (one, zero, zero), (zero, one, zero), (zero, zero, one)
        tris_p = [(p, q, r)]
        for _ in range(k):
            nxt = []
            for a, b, c in tris_p:
                m = _mid(a, b, c)
                ab, bc, ca = _mid(a, b), _mid(b, c), _mid(c, a)
                nxt += [(a, ab, m), (ab, b, m), (b, bc, m), (bc, c, m), (c, ca, m), (ca, a, m)]
            tris_p = nxt
        edges_p = [e for t in tris_p for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))]
    else:
        raise ValueError("base must be 'interval' or 'triangle'")
    names = sorted({v for e in edges_p for v in e}, reverse=True)
    index = {v: i for i, v in enumerate(names)}
    edges = [(index[a], index[b]) for a, b in edges_p]
    tris = [tuple(index[v] for v in t) for t in tris_p]
    return SphereComplex.abstract([_label(v) for v in names], edges, tris)


def boundary_cycle(model: SphereComplex) -> list[int]:
    """Boundary loop of sd^k of the 2-simplex, starting at the first corner."""
    edge_count: dict[tuple[int, int], int] = {}
    for t in model.iter_triangles():
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            edge_count[e] = edge_count.get(e, 0) + 1
    nbr: dict[int, list[int]] = {}
    for (a, b), c in edge_count.items():
        if c == 1:
            nbr.setdefault(a, []).append(b)
            nbr.setdefault(b, []).append(a)
    start = min(nbr)
    cyc = [start, min(nbr[start])]
    while True:
        a, b = cyc[-2], cyc[-1]
        nxt = [x for x in nbr[b] if x != a][0]
        if nxt == start:
            return cyc
        cyc.append(nxt)
