import random

import pytest

from conftest import cached_ball, rewriting_group
from oracles import geodesic_paths, rewriting_spheres, slim_delta_exhaustive
from ripsbound.group import (BallTooLarge, DehnOracle, FreeOracle, PresentationError, build_ball, estimate_delta,
                             make_oracle, parse_presentation, preset)
from ripsbound.group.cache import CacheError, content_hash, load_cache, save_cache
from ripsbound.group.presentation import cyclic_reduce, free_reduce

# genus-2 sphere sizes through R=5, fixed by the union-find rewriting oracle
SURFACE_SPHERES = [1, 8, 56, 392, 2736, 19096]


# -- presentations -------------------------------------------------------

def test_parse_z_closes_generators():
    p = parse_presentation("gens: a; rels: (none)")
    assert p.symbols == ("a", "a^-1") and p.inverse == (1, 0) and p.relators == ()


def test_parse_f2_has_four_generators():
    assert parse_presentation("gens: a b\nrels: (none)\n").rank == 4


def test_surface_commutator_and_small_cancellation():
    p = parse_presentation("gens: a b c d\nrel: [a,b][c,d]\n")
    assert p.format(p.relators[0]) == p.format(p.word("a b a^-1 b^-1 c d c^-1 d^-1"))
    assert p.small_cancellation_violation() is None
    assert max(k for _, k in p.piece_lengths()) == 1


def test_piece_lengths_match_brute_force():
    p = preset("surface2")
    rels = p.symmetrized_relators()
    best = 0
    for r in rels:
        for s in rels:
            if r == s:
                continue
            k = 0
            while k < len(r) and r[k] == s[k]:
                k += 1
            best = max(best, k)
    assert best == max(k for _, k in p.piece_lengths())


def test_parse_errors_carry_position():
    with pytest.raises(PresentationError):
        parse_presentation("gens: a b\nrel: a x\n")
    with pytest.raises(PresentationError):
        parse_presentation("gens: a a\n")
    with pytest.raises(PresentationError):
        parse_presentation("gens: a\nrel: [a, a\n")


def test_reductions():
    inv = (1, 0, 3, 2)
    assert free_reduce((0, 1, 2), inv) == (2,)
    assert cyclic_reduce((0, 2, 1), inv) == (2,)


# -- word oracles --------------------------------------------------------

def test_free_oracle_cancels():
    p = preset("f2")
    assert FreeOracle(p).normalize(p.word("a a^-1 b")) == p.word("b")


def test_relator_is_identity():
    p = preset("surface2")
    o = make_oracle(p)
    assert isinstance(o, DehnOracle)
    assert o.normalize(p.relators[0]) == () and o.is_identity(p.relators[0])


def test_dehn_shortens_long_relator_piece():
    p = preset("surface2")
    o = DehnOracle(p)
    rng = random.Random(5)
    rels = p.symmetrized_relators()
    for _ in range(50):
        r = rng.choice(rels)
        piece = r[:5]
        w = tuple(rng.randrange(8) for _ in range(2)) + piece + tuple(rng.randrange(8) for _ in range(2))
        if free_reduce(w, p.inverse) != w:
            continue
        assert len(o.reduce(w)) < len(w)


def test_dehn_normal_forms_match_rewriting_oracle():
    p = preset("surface2")
    g = rewriting_group("surface2", 7)
    o = make_oracle(p)
    rng = random.Random(11)
    for _ in range(400):
        w = tuple(rng.randrange(8) for _ in range(rng.randint(0, 7)))
        assert o.normalize(w) == g.normal(w)


# -- balls ---------------------------------------------------------------

def test_z_ball():
    b = cached_ball("z", 3)
    assert b.size == 7 and b.sphere_sizes() == [1, 2, 2, 2]


def test_f2_ball():
    b = cached_ball("f2", 2)
    assert b.size == 17 and b.sphere_sizes() == [1, 4, 12]


def test_surface_spheres_match_rewriting_oracle():
    p = preset("surface2")
    spheres = rewriting_spheres(p.rank, p.inverse, p.relators, 4, slack=2)
    b = cached_ball("surface2", 4)
    assert [len(s) for s in spheres] == SURFACE_SPHERES[:5] == b.sphere_sizes()
    for n, s in enumerate(spheres):
        assert sorted(b.words[g] for g in b.sphere(n)) == s


def test_surface_sphere_five():
    assert cached_ball("surface2", 5).sphere_sizes() == SURFACE_SPHERES


def test_geodesic_words():
    z = cached_ball("z", 3)
    assert z.geodesic_word(0) == () and z.format(z.element((0, 0, 0))) == "a a a"
    f2 = cached_ball("f2", 2)
    ab = f2.index_of((0, 2))
    assert f2.geodesic_word(ab) == (0, 2) and f2.prefix(ab, 1) == f2.index_of((0,))


def test_distances_match_oracle():
    b = cached_ball("surface2", 4)
    g = rewriting_group("surface2", 7)
    rng = random.Random(2)
    elems = list(range(b.size))
    for _ in range(300):
        x, y = rng.choice(elems), rng.choice(elems)
        if b.length(x) + b.length(y) <= 7:
            assert b.distance(x, y) == g.distance(b.words[x], b.words[y])


def test_exact_depth_formula():
    b = cached_ball("surface2", 4)
    assert b.exact_depth(b.index_of((0,)), b.index_of((2, 4))) == 2 * 4 + 1 - 1 - 2


def test_geodesics_from_identity_match_oracle():
    b = cached_ball("surface2", 3)
    g = rewriting_group("surface2", 7)
    paths = geodesic_paths(g, 3)
    for h in range(b.size):
        ours = sorted(tuple(b.words[x] for x in P) for P in b.geodesics(0, h))
        assert ours == sorted(paths[b.words[h]])


def test_gromov_product_in_tree():
    b = cached_ball("f2", 4)
    x, y = b.index_of((0, 2, 2)), b.index_of((0, 2, 1))
    assert b.gromov_product(0, x, y) == 2


def test_element_cap():
    with pytest.raises(BallTooLarge):
        build_ball(preset("surface2"), 4, element_cap=100)


# -- slimness ------------------------------------------------------------

@pytest.mark.parametrize("name", ["z", "f2", "f3"])
def test_delta_zero_for_trees(name):
    est = estimate_delta(cached_ball(name, 6), 4)
    assert est.delta_raw == 0 and est.delta_ideal == 0


def test_surface_delta_side_three_matches_oracle():
    oracle, _ = slim_delta_exhaustive(rewriting_group("surface2", 7), 3)
    assert oracle == 1
    assert estimate_delta(cached_ball("surface2", 5), 3).delta_raw == oracle


def test_sampled_mode_is_a_lower_bound():
    b = cached_ball("surface2", 5)
    full = estimate_delta(b, 3)
    part = estimate_delta(b, 3, mode="sampled", count=20, seed=1)
    assert part.coverage == "sampled" and part.delta_raw <= full.delta_raw


# -- cache ---------------------------------------------------------------

def test_cache_round_trip_z(tmp_path):
    b = cached_ball("z", 8)
    save_cache(b, tmp_path / "z.rball")
    c = load_cache(tmp_path / "z.rball")
    assert c.words == b.words and content_hash(c) == content_hash(b)


def test_cache_round_trip_f2(tmp_path):
    b = cached_ball("f2", 6)
    save_cache(b, tmp_path / "f2.rball")
    c = load_cache(tmp_path / "f2.rball")
    assert c.adj == b.adj


def test_corrupt_cache_rejected(tmp_path):
    path = tmp_path / "f2.rball"
    save_cache(cached_ball("f2", 3), path)
    data = bytearray(path.read_bytes())
    data[-5] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(CacheError):
        load_cache(path)
