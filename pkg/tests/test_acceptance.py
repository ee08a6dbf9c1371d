"""Acceptance suite: one test per criterion, one PASS/FAIL line each in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import json
import sys
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE, cached_ball, rewriting_group
from oracles import betti_q, bfs_distances, clique_skeleton, slim_delta_exhaustive, slim_delta_sampled, triangle_defect
from ripsbound.cli import main
from ripsbound.complex import build_sphere_complex, homology_h1
from ripsbound.group import estimate_delta
from ripsbound.reports import RunConfig, run

SURFACE_R = 6  # ball shared by the delta audit, ddag and horoball runs


def record(k, ok, detail):
    ACCEPTANCE[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def report(command, **kw):
    return run(command, RunConfig(**kw))


def test_01_z_two_points():
    t = time.perf_counter()
    rep = report("classify", preset="z", D=1, n_range=(1, 8))
    proj = report("project", preset="z", D=1, n_range=(1, 8))
    took = time.perf_counter() - t
    rows = rep["result"]["evidence"]["per_n"]
    sizes = [r["vertices"] for r in rows]
    comps = [r["components"] for r in rows]
    verdict = rep["result"]["classification"]["verdict"]
    func = rep["result"]["evidence"]["functoriality_violations"] + proj["result"]["functoriality_violations"]
    ok = sizes == [2] * 8 and comps == [2] * 8 and func == 0 and verdict == "two-point" and took < 1.0
    record(1, ok, f"|S_n|={sizes} components={comps} functoriality violations={func} verdict={verdict} "
                  f"{took:.2f}s")


def test_02_f2_cantor():
    t = time.perf_counter()
    rep = report("classify", preset="f2", D=1, n_range=(1, 6))
    took = time.perf_counter() - t
    rays = report("rays", preset="f2", D=1, n_range=(1, 6), N=7, samples=200)
    rows = rep["result"]["evidence"]["per_n"]
    expect = [4 * 3 ** (n - 1) for n in range(1, 7)]
    sizes = [r["vertices"] for r in rows]
    edgeless = all(r["edges"] == 0 for r in rows)
    comps = [r["components"] for r in rows]
    verdict = rep["result"]["classification"]["verdict"]
    singletons = rays["result"]["admissible_sets"]["max_size"] == 1
    ok = sizes == expect and edgeless and comps == sizes and verdict == "Cantor-like" and singletons and took < 5
    record(2, ok, f"|S_n|={sizes} edgeless={edgeless} verdict={verdict} singleton admissible sets={singletons} "
                  f"{took:.2f}s")


def test_03_surface_circle():
    # delta fixed by the independent slimness oracle before any production ball is built
    g = rewriting_group("surface2", 7)
    side3, _ = slim_delta_exhaustive(g, 3)
    witness = triangle_defect(g, (), (0, 2, 1, 3), (0, 2))
    sampled, _ = slim_delta_sampled(g, 4, 2000, seed=7)
    oracle_raw = max(witness, sampled)
    assert side3 == 1 and oracle_raw == 2
    est = estimate_delta(cached_ball("surface2", SURFACE_R), 4)
    assert est.coverage == "exhaustive" and est.delta_raw == oracle_raw
    delta = 4 * oracle_raw
    D = 12 * delta + 2

    # derived cross-check of the production complexes: BFS distances, cliques, rational H_1
    ball = cached_ball("surface2", 3)
    for n in (1, 2):
        k = build_sphere_complex(ball, n, D)
        words = [ball.words[v] for v in k.vertices]
        dist = bfs_distances(g, words, 3)
        edges, tris = clique_skeleton(words, lambda a, b: dist[a, b], D)
        assert k.n_edges == len(edges) and k.n_triangles == len(tris)
        if n == 1:
            b0, b1 = betti_q(len(words), edges, tris)
            h = homology_h1(k)
            assert (h.betti_0, h.betti_1) == (b0, b1)

    rep = report("classify", preset="surface2", n_range=(1, 6))
    rows = rep["result"]["evidence"]["per_n"]
    verdict = rep["result"]["classification"]["verdict"]
    first = next((r["n"] for r in rows if r["components"] == 1), None)
    tail = [r for r in rows if first is not None and r["n"] >= first]
    circle = bool(tail) and all(r["components"] == 1 and r["h1"] and r["h1"]["betti_1"] == 1
                                and not r["h1"]["torsion"] for r in tail)
    betti = [r["h1"]["betti_1"] if r["h1"] else None for r in rows]
    record(3, circle and verdict == "circle-like",
           f"delta_ideal={delta} (oracle), D={D}, betti_1 n=1..6: {betti}, verdict={verdict}")


def test_04_projection_is_simplicial():
    runs = [("z", dict(D=1, n_range=(1, 8))), ("f2", dict(D=1, n_range=(1, 6))),
            ("surface2", dict(n_range=(1, 4)))]
    zone, bad = {}, 0
    for name, kw in runs:
        rep = report("audit-projection", preset=name, **kw)
        zone[name] = rep["result"]["in_zone_pairs"]
        bad += rep["result"]["counterexamples"]
    record(4, bad == 0 and sum(zone.values()) > 0, f"in-zone (n, m) pairs {zone}, counterexamples {bad}")


def _rays_reports():
    if not hasattr(_rays_reports, "cache"):
        _rays_reports.cache = {
            "z": report("rays", preset="z", n_range=(1, 7), N=8, samples=200),
            "f2": report("rays", preset="f2", n_range=(1, 5), N=6, samples=200),
            "surface2": report("rays", preset="surface2", n_range=(1, 5), N=6, samples=200),
        }
    return _rays_reports.cache


def test_05_nerve_diameters():
    out, ok = {}, True
    for name, rep in _rays_reports().items():
        r = rep["result"]
        a, c = r["admissible_sets"], r["close_projections"]
        ok &= r["rays"] >= 200 and a["failed"] == 0 and c["failed"] == 0
        out[name] = f"diam {a['max_diameter']}<={a['bound']}, step {c['max_measured']}<={c['bound']}"
    record(5, ok, "; ".join(f"{k}: {v}" for k, v in out.items()))


def test_06_boundary_products():
    out, ok = {}, True
    for name, rep in _rays_reports().items():
        p = rep["result"]["ray_products"]
        ok &= p["count"] >= 500 and p["failed"] == 0
        out[name] = f"{p['count']} tuples, {p['failed']} violations"
    record(6, ok, "; ".join(f"{k}: {v}" for k, v in out.items()))


def test_07_ddag():
    rep = report("ddag", preset="surface2", n_range=(2, 4), radius=SURFACE_R)
    r = rep["result"]
    lmin = r["L_min"]
    surface_ok = rep["status"] == "pass" and all(v is not None for v in lmin.values()) and r["growth_ok"]
    f2 = report("ddag", preset="f2", n_range=(1, 4))
    fails = sum(x["failure_count"] for x in f2["result"]["reports"])
    record(7, surface_ok and fails > 0 and f2["status"] == "violations",
           f"surface2 M={r['M']} L_min={lmin} growth_ok={r['growth_ok']}; f2 failures reported: {fails}")


def test_08_imap():
    ok, notes = True, []
    for name, n in (("z", (1, 7)), ("f2", (1, 5))):
        g = report("growth", preset=name, D=1, m=1, n_range=n)["result"]
        vb = all(m["vertex_bound_ok"] for m in g["maps"])
        zero = all(Fraction(row[k]) == 0 for row in g["growth"] for k in ("C_fit", "simplex_C_fit", "ray_C_fit"))
        ok &= vb and zero and g["zero_at_delta_zero"]
        notes.append(f"{name}: vertex bound {vb}, C_fit=0 {zero}")
    im = report("imap", preset="surface2", n_range=(3, 5))
    total = all(m["total"] for m in im["result"]["maps"])
    g = report("growth", preset="surface2", m=3, n_range=(3, 6))
    fits = [(row["C_fit"], row["simplex_C_fit"], row["ray_C_fit"]) for row in g["result"]["growth"]]
    ok &= total and g["result"]["growth_ok"] and g["status"] == "pass"
    notes.append(f"surface2: total {total}, (C_fit, simplex, ray) {fits}, growth ok {g['result']['growth_ok']}")
    record(8, ok, "; ".join(notes))


def test_09_s_condition():
    ok, notes = True, []
    for name, kw in (("z", dict(D=1, n_range=(1, 4))), ("f2", dict(D=1, n_range=(1, 3))),
                     ("surface2", dict(n_range=(2, 4)))):
        rep = report("scond", preset=name, samples=100, **kw)
        rows = rep["result"]["reports"]
        cert = all(r["certified"] == r["solved"] for r in rows)
        lane = all(r["lane_exact"] for r in rows)
        ok &= cert and lane and rep["result"]["loop_length"] == 12
        if name == "surface2":
            frac = min(r["solved_fraction"] for r in rows)
            ok &= frac >= 0.95
            notes.append(f"surface2 solved fraction {frac}")
        notes.append(f"{name}: certified {cert}, lane exact {lane}")
    record(9, ok, "; ".join(notes))


def test_10_horoball():
    ok, notes = True, []
    for name, kw in (("z", dict(D=1, radius=8)), ("f2", dict(D=1, radius=6)),
                     ("surface2", dict(radius=SURFACE_R))):
        rep = report("horoball", preset=name, samples=50, **kw)
        r = rep["result"]
        good = (rep["status"] == "pass" and r["samples"] >= 50 and not r["stabilization_problems"]
                and r["projections"]["failed"] == 0 and r["stability"]["failed"] == 0
                and r["traces"]["failed"] == 0 and len(r["stages"]) >= 2)
        ok &= good
        notes.append(f"{name}: {len(r['stages'])} stages, proj {r['projections']['max_measured']}"
                     f"<={r['projections']['bound']}, traces {r['traces']['applicable']} applicable")
    record(10, ok, "; ".join(notes))


def test_11_determinism(tmp_path):
    argv = ["rays", "--preset", "surface2", "--n", "1..3", "--N", "4", "--samples", "30", "--seed", "3"]
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(argv + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    same = outs[0] == outs[1]
    json.loads(outs[0])
    record(11, same, f"two runs, {len(outs[0])} bytes each, identical={same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
