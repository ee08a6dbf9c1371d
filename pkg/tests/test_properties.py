"""Invariants checked on randomly drawn words, elements and evidence."""
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import cached_ball, rewriting_group
from ripsbound.complex import build_sphere_complex
from ripsbound.group import preset
from ripsbound.inverse_system import gromov_product_words, project_vertex
from ripsbound.reports import classify_evidence

SURFACE = preset("surface2")
FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

letters = st.lists(st.integers(0, SURFACE.rank - 1), max_size=7).map(tuple)


def _surface_ball():
    return cached_ball("surface2", 4)


@FAST
@given(letters)
def test_normal_form_is_idempotent(w):
    b = _surface_ball()
    nf = b.normalize(w)
    assert b.normalize(nf) == nf
    assert len(nf) <= len(w)


@FAST
@given(letters)
def test_word_times_inverse_is_trivial(w):
    b = _surface_ball()
    assert b.normalize(w + SURFACE.invert(w)) == ()
    assert b.normalize(SURFACE.invert(w) + w) == ()


@FAST
@given(letters)
def test_normal_forms_agree_with_rewriting_oracle(w):
    assert _surface_ball().normalize(w) == rewriting_group("surface2", 7).normal(w)


# indices of the radius-4 surface ball: 1 + 8 + 56 + 392 + 2736 elements
elements = st.integers(0, 3192)


@FAST
@given(elements, elements, elements)
def test_distance_is_a_metric(x, y, z):
    b = _surface_ball()
    dxy, dyz, dxz = b.distance(x, y), b.distance(y, z), b.distance(x, z)
    assert dxy == b.distance(y, x)
    assert (dxy == 0) == (x == y)
    assert dxz <= dxy + dyz


@FAST
@given(elements, elements)
def test_gromov_product_bounds(x, y):
    b = _surface_ball()
    u, v = b.words[x], b.words[y]
    p = gromov_product_words(b, u, v)
    assert 0 <= p <= min(len(u), len(v))


@FAST
@given(elements, st.integers(0, 4), st.integers(0, 4))
def test_projection_is_functorial(x, m, k):
    b = _surface_ball()
    n = b.length(x)
    hi, lo = min(m, n), min(k, m, n)
    assert project_vertex(b, project_vertex(b, x, hi), lo) == project_vertex(b, x, lo)


@FAST
@given(st.sampled_from(["z", "f2", "surface2"]), st.integers(1, 3), st.integers(1, 4))
def test_sphere_edges_respect_D(name, n, D):
    b = cached_ball(name, n + (D + 1) // 2)
    k = build_sphere_complex(b, n, D)
    if k.complete:
        assert 2 * n <= D
        return
    for i, j in k.iter_edges():
        assert b.distance(k.vertices[i], k.vertices[j]) <= D


def _row(n, comps, simplices, betti_1):
    h1 = None if betti_1 is None else {"betti_0": comps, "betti_1": betti_1, "torsion": []}
    return {"n": n, "components": comps, "components_are_simplices": simplices, "h1": h1}


rows = st.lists(st.tuples(st.integers(1, 40), st.booleans(), st.one_of(st.none(), st.integers(0, 3))),
                min_size=1, max_size=5)


@FAST
@given(rows, st.integers(1, 200))
def test_classification_is_pure(raw, D):
    ev = {"per_n": [_row(i + 1, *r) for i, r in enumerate(raw)], "n_range": [1, len(raw)], "D": D,
          "h1_rank_checks": [{"n": i + 1, "image_rank": 1} for i in range(len(raw))]}
    first = classify_evidence(ev)
    assert classify_evidence(ev) == first
    assert first["verdict"] in ("two-point", "Cantor-like", "circle-like", "connected-unclassified",
                                "disconnected-unclassified")
    if first["verdict"] == "two-point":
        assert ev["per_n"][-1]["components"] == 2
