import pytest

from conftest import cached_ball, rewriting_group
from ripsbound.horoball import (check_local_diameter, check_stage_stability, extract_stable_stages,
                                horoball_sequence, pattern_hash, ray_from_stage, ray_sequence, stabilization_problems,
                                stage_pattern, stage_projection, trace_geodesic_through_horoball,
                                translation_isometry_problems)
from ripsbound.inverse_system import BoundaryRay

SURFACE_D = 98


@pytest.fixture(scope="module")
def z_stages():
    b = cached_ball("z", 8)
    seq = horoball_sequence(b, BoundaryRay((0,) * 8))
    stages, direction = extract_stable_stages(b, seq, 4, 1)
    return b, stages, direction


@pytest.fixture(scope="module")
def surface_stages():
    b = cached_ball("surface2", 5)
    seq = ray_sequence(b, BoundaryRay((0,) * 5))
    stages, direction = extract_stable_stages(b, seq, 4, SURFACE_D)
    return b, stages, direction


def test_z_stages_are_half_line_points(z_stages):
    b, stages, direction = z_stages
    assert [(s.i, s.n_i) for s in stages] == [(1, 1), (2, 2), (3, 3), (4, 4)]
    for s in stages:
        assert s.g_i == (0,) * s.i
        # the only point of N_i(e) at distance i from a^i is e itself
        assert s.vertices == [()]
    assert direction == (0,) * 8
    assert stabilization_problems(b, stages) == []
    assert all(translation_isometry_problems(b, s, 1) == [] for s in stages)


def test_f2_inverse_prefixes_admit_every_stage():
    b = cached_ball("f2", 6)
    seq = horoball_sequence(b, BoundaryRay((0, 2, 2, 2, 2, 2)))
    stages, direction = extract_stable_stages(b, seq, 4, 1)
    assert [s.n_i for s in stages] == [1, 2, 3, 4]
    assert [len(s.vertices) for s in stages] == [1, 3, 3, 9]
    assert direction == (0, 2, 2, 2, 2, 2)
    assert stabilization_problems(b, stages) == []
    assert all(translation_isometry_problems(b, s, 1) == [] for s in stages)


def test_f2_forward_prefixes_stop_early():
    b = cached_ball("f2", 6)
    stages, _ = extract_stable_stages(b, ray_sequence(b, BoundaryRay((0, 2, 2, 2, 2, 2))), 4, 1)
    assert len(stages) < 4


def _oracle_pattern(g, vn, n, j):
    return sorted(h for h in g.ball(j) if len(g.normal(vn + h)) == n)


def test_surface_stage_patterns_match_oracle(surface_stages):
    b, stages, _ = surface_stages
    g = rewriting_group("surface2", 7)
    assert [s.n_i for s in stages] == [1, 2, 3, 4]
    for s in stages:
        vn = b.words[s.source]
        assert vn == (0,) * s.n_i
        for j in range(1, s.i + 1):
            if s.n_i + j > g.max_len:
                continue
            want = _oracle_pattern(g, vn, s.n_i, j)
            assert stage_pattern(b, (), s.source, s.n_i, j) == want
            earlier = next((t for t in stages if t.i == j), None)
            assert earlier is not None and earlier.vertices == want
    assert stabilization_problems(b, stages) == []
    assert all(translation_isometry_problems(b, s, SURFACE_D) == [] for s in stages)


def test_pattern_hash_ignores_order():
    words = [(0, 1), (), (2,)]
    assert pattern_hash(words) == pattern_hash(list(reversed(words)))
    assert pattern_hash(words) != pattern_hash(words[:2])
    assert len(pattern_hash(words)) == 16


def test_sequence_off_the_spheres_is_rejected():
    b = cached_ball("z", 4)
    with pytest.raises(ValueError):
        extract_stable_stages(b, [0, 1, 1], 2, 1)


def test_stage_stability_against_itself(z_stages):
    b, stages, _ = z_stages
    zeta = BoundaryRay((1,) * 8)
    s = stages[1]
    chk = check_stage_stability(b, s, s, zeta, 0)
    assert chk.projectable and chk.measured == 0 and chk.passed


def test_single_ray_cluster_passes(z_stages):
    b, stages, _ = z_stages
    out = check_local_diameter(b, stages[0], [BoundaryRay((1,) * 8)], 0, 1)
    assert out["passed"] and out["points"] == 1 and out["diameter"] == 0


def test_ray_toward_limit_point_is_outside(z_stages):
    b, stages, _ = z_stages
    st = stages[3]
    local = ray_from_stage(b, st, BoundaryRay((0,) * 3))
    assert local.word == (1,)
    proj = stage_projection(b, st, local, 0)
    assert not proj.inside and not proj.resolved and proj.simplex == []


def test_ray_away_from_limit_point_projects_to_stage_vertex(z_stages):
    b, stages, _ = z_stages
    st = stages[1]
    local = ray_from_stage(b, st, BoundaryRay((1,) * 6))
    proj = stage_projection(b, st, local, 0)
    assert proj.resolved and proj.inside and proj.simplex == [()] and proj.passed


def test_trace_through_z_stages(z_stages):
    b, stages, direction = z_stages
    rep = trace_geodesic_through_horoball(b, stages, direction, BoundaryRay((1,) * 4), 0)
    assert rep.applicable and rep.path_length == 12 and rep.closest == 0
    assert all(rep.hits[s.i] == [0] for s in stages)
    assert rep.deep_from == 1 and rep.passed


def test_trace_along_the_limit_ray_is_not_applicable(z_stages):
    b, stages, direction = z_stages
    rep = trace_geodesic_through_horoball(b, stages, direction, BoundaryRay((0,) * 8), 0)
    assert not rep.applicable and rep.passed
