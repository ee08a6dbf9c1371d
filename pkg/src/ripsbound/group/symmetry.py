"""Symmetries of a presentation acting on a Cayley ball.

A permutation of the generators that commutes with formal inversion and
maps the symmetrized relator set onto itself extends to an automorphism of
the group fixing e, hence to a graph automorphism preserving every sphere.
"""
from __future__ import annotations

from itertools import permutations

from .ball import CayleyBall
from .presentation import GroupPresentation


def presentation_automorphisms(p: GroupPresentation) -> list[tuple[int, ...]]:
    """All relator-preserving generator permutations (identity first)."""
    k = p.rank
    pairs = sorted({tuple(sorted((i, p.inverse[i]))) for i in range(k)})
    rels = set(p.symmetrized_relators())
    out: list[tuple[int, ...]] = []
    for perm in permutations(range(len(pairs))):
        for flips in range(2 ** len(pairs)):
            sigma = [0] * k
            for j, (a, b) in enumerate(pairs):
                c, d = pairs[perm[j]]
                if flips >> j & 1:
                    c, d = d, c
                sigma[a], sigma[b] = c, d
            if all(tuple(sigma[x] for x in r) in rels for r in rels):
                out.append(tuple(sigma))
    out.sort(key=lambda s: (s != tuple(range(k)), s))
    return out


def sphere_orbits(ball: CayleyBall, n: int, autos: list[tuple[int, ...]]) -> dict[int, int]:
    """Orbit representative -> orbit size for S_n (representative = least index)."""
    rep: dict[int, int] = {}
    sizes: dict[int, int] = {}
    for g in ball.sphere(n):
        if g in rep:
            continue
        orbit = {ball.element(tuple(s[x] for x in ball.words[g])) for s in autos}
        for h in orbit:
            rep[h] = g
        sizes[g] = len(orbit)
    return sizes
