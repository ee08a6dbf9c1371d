import random
from fractions import Fraction

import pytest

from conftest import cached_ball, rewriting_group
from oracles import geodesic_paths
from ripsbound.complex import build_sphere_complex
from ripsbound.inverse_system import (BoundaryRay, admissible_projections, audit_projection_simplicial,
                                      check_close_projections, check_ray_product_bound, common_simplex_threshold,
                                      functoriality_violations, gromov_product_words, project_vertex, sample_rays)

SURFACE_DELTA = 8
SURFACE_D = 12 * SURFACE_DELTA + 2


def test_projection_is_prefix():
    b = cached_ball("f2", 4)
    g = b.index_of((0, 2, 2, 1))
    assert b.words[project_vertex(b, g, 2)] == (0, 2)
    with pytest.raises(ValueError):
        project_vertex(b, g, 5)


@pytest.mark.parametrize("name, R", [("z", 6), ("f2", 4), ("surface2", 4)])
def test_functoriality_exact(name, R):
    b = cached_ball(name, R)
    assert all(functoriality_violations(b, n) == 0 for n in range(R + 1))


def test_z_audit_has_no_violations():
    b = cached_ball("z", 8)
    for n in range(1, 7):
        for m in range(n):
            assert audit_projection_simplicial(b, n, m, 1, 0).passed


def test_f2_audit_is_vacuous():
    b = cached_ball("f2", 7)
    a = audit_projection_simplicial(b, 6, 2, 1, 0)
    assert a.checked_edges == 0 and a.passed and a.in_hypothesis_zone


def test_surface_audit_small_D_zone():
    # D = 2 keeps the zone n - m > D + delta reachable only without the delta term
    b = cached_ball("surface2", 5)
    k = build_sphere_complex(b, 4, 2)
    a = audit_projection_simplicial(b, 4, 1, 2, 0, k)
    assert a.checked_edges == k.n_edges and a.in_hypothesis_zone and a.passed


def test_surface_projection_edges_checked_by_oracle():
    b = cached_ball("surface2", 5)
    g = rewriting_group("surface2", 7)
    k = build_sphere_complex(b, 3, 2)
    a = audit_projection_simplicial(b, 3, 2, 2, 0, k)
    worst = 0
    for x, y in k.edges:
        px, py = (b.words[project_vertex(b, k.vertices[v], 2)] for v in (x, y))
        worst = max(worst, g.distance(px, py))
    assert (worst <= 2) == a.passed


def test_admissible_sets_are_singletons_in_trees():
    b = cached_ball("f2", 6)
    for ray in sample_rays(b, 6, 30, seed=4):
        for n in range(6):
            a = admissible_projections(b, ray, n, 0)
            assert a.vertices == [ray.point(b, n)] and a.diameter == 0 and a.passed


def test_surface_admissible_times_match_oracle_geodesics():
    b = cached_ball("surface2", 4)
    paths = geodesic_paths(rewriting_group("surface2", 7), 4)
    for ray in sample_rays(b, 4, 10, seed=1):
        target = ray.word
        for n in range(1, 4):
            a = admissible_projections(b, ray, n, 0)
            times = {P[n] for P in paths[target]}
            assert {b.words[x] for x in a.vertices} == times


def test_surface_admissible_diameter_bound():
    b = cached_ball("surface2", 5)
    for ray in sample_rays(b, 5, 20, seed=2):
        for n in range(1, 5):
            a = admissible_projections(b, ray, n, SURFACE_DELTA)
            assert a.passed and a.diameter <= 6 * SURFACE_DELTA + 2


def test_close_projections_bound():
    b = cached_ball("surface2", 5)
    for ray in sample_rays(b, 5, 10, seed=3):
        for n in range(1, 4):
            c = check_close_projections(b, ray, n, SURFACE_DELTA, SURFACE_D)
            assert c.passed and c.bound == 6 * SURFACE_DELTA + 3 + 2 * SURFACE_D


def test_identical_rays_share_a_simplex():
    b = cached_ball("f2", 6)
    r = sample_rays(b, 6, 1, seed=9)[0]
    c = common_simplex_threshold(b, r, r, 3, 0, 1)
    assert c.applicable and c.measured == 0 and c.passed


def test_tree_rays_sharing_k_letters():
    b = cached_ball("f2", 6)
    r1 = BoundaryRay((0, 2, 2, 0, 0, 0))
    r2 = BoundaryRay((0, 2, 2, 2, 2, 2))
    assert gromov_product_words(b, r1.word, r2.word) == 3
    for n in range(4):
        assert admissible_projections(b, r1, n, 0).vertices == admissible_projections(b, r2, n, 0).vertices
    for m in range(7):
        c = check_ray_product_bound(b, r1, r2, m, m, 0)
        assert c.measured == min(m, 3) == c.bound


def test_equal_rays_product_bound():
    b = cached_ball("surface2", 4)
    r = sample_rays(b, 4, 1, seed=0)[0]
    for m in range(5):
        c = check_ray_product_bound(b, r, r, m, m, SURFACE_DELTA)
        assert c.measured == m and c.passed


def test_surface_ray_products():
    b = cached_ball("surface2", 5)
    rays = sample_rays(b, 5, 40, seed=6)
    rng = random.Random(6)
    for _ in range(200):
        c = check_ray_product_bound(b, rng.choice(rays), rng.choice(rays), rng.randint(0, 5), rng.randint(0, 5),
                                    SURFACE_DELTA)
        assert c.passed and isinstance(c.measured, Fraction)


def test_sampling_is_seeded():
    b = cached_ball("surface2", 4)
    assert sample_rays(b, 4, 5, seed=1) == sample_rays(b, 4, 5, seed=1)
    assert len(sample_rays(cached_ball("z", 4), 4, 10)) == 10
