import json

import pytest

from ripsbound.cli import main
from ripsbound.reports import (EXIT_CODES, SCHEMA, RunConfig, classify_evidence, parse_range, run, worst)


def _cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _row(n, comps, simplices=True, betti_1=0, torsion=()):
    h1 = None if betti_1 is None else {"betti_0": comps, "betti_1": betti_1, "torsion": list(torsion)}
    return {"n": n, "components": comps, "components_are_simplices": simplices, "h1": h1}


def _evidence(rows, ranks=()):
    ns = [r["n"] for r in rows]
    return {"per_n": rows, "n_range": [min(ns), max(ns)], "D": 3, "h1_rank_checks": list(ranks)}


def test_parse_range():
    assert parse_range("4") == (4, 4)
    assert parse_range("2..5") == (2, 5)
    for bad in ("5..2", "-1", "a..b"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_worst_status_wins():
    assert worst("pass", "pass") == "pass"
    assert worst("pass", "unknown") == "unknown"
    assert worst("unknown", "violations", "pass") == "violations"
    assert EXIT_CODES == {"pass": 0, "violations": 1, "unknown": 2}


def test_two_point_rule():
    out = classify_evidence(_evidence([_row(n, 2) for n in range(1, 5)]))
    assert out["verdict"] == "two-point" and out["n0"] == 1 and not out["anomalies"]


def test_cantor_rule():
    out = classify_evidence(_evidence([_row(1, 4), _row(2, 12), _row(3, 36)]))
    assert out["verdict"] == "Cantor-like"


def test_circle_rule_needs_rank_preservation():
    rows = [_row(1, 3, False), _row(2, 1, False, 1), _row(3, 1, False, 1)]
    kept = classify_evidence(_evidence(rows, [{"n": 3, "image_rank": 1}]))
    assert kept["verdict"] == "circle-like" and kept["n0"] == 2
    lost = classify_evidence(_evidence(rows, [{"n": 3, "image_rank": 0}]))
    assert lost["verdict"] == "connected-unclassified"
    assert "truncation does not preserve H_1 rank" in lost["anomalies"]


def test_torsion_or_missing_homology_is_unclassified():
    rows = [_row(1, 1, False, 1, (2,)), _row(2, 1, False, None)]
    assert classify_evidence(_evidence(rows))["verdict"] == "connected-unclassified"
    rows = [_row(1, 3, False), _row(2, 5, False)]
    assert classify_evidence(_evidence(rows))["verdict"] == "disconnected-unclassified"


def test_non_monotone_counts_are_flagged():
    rows = [_row(1, 2), _row(2, 4), _row(3, 2), _row(4, 2)]
    out = classify_evidence(_evidence(rows))
    assert out["verdict"] != "two-point" and out["anomalies"]


def test_z_classify_exits_zero_and_verdict_rederives(capsys):
    code, out, _ = _cli(capsys, "classify", "--preset", "z", "--D", "1", "--n", "1..4")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == SCHEMA and rep["status"] == "pass"
    res = rep["result"]
    assert res["classification"]["verdict"] == "two-point"
    assert classify_evidence(res["evidence"]) == res["classification"]


def test_config_echo_omits_cache_settings(capsys, tmp_path):
    code, out, _ = _cli(capsys, "ball", "--preset", "f2", "--n", "3", "--cache-dir", str(tmp_path))
    assert code == 0
    cfg = json.loads(out)["config"]
    assert "cache_dir" not in cfg and "use_cache" not in cfg
    assert cfg["preset"] == "f2" and cfg["n_range"] == [3, 3]


def test_f2_ddag_reports_violations(capsys):
    code, out, _ = _cli(capsys, "ddag", "--preset", "f2", "--D", "1", "--n", "2..3")
    assert code == 1 and json.loads(out)["status"] == "violations"


def test_unknown_preset_is_an_operational_error(capsys):
    code, out, err = _cli(capsys, "ball", "--preset", "nope")
    assert code == 3 and out == "" and "unknown preset" in err


def test_small_D_needs_force(capsys):
    code, _, err = _cli(capsys, "sphere", "--preset", "surface2", "--D", "4", "--n", "2")
    assert code == 3 and "--force-D" in err
    code, out, _ = _cli(capsys, "sphere", "--preset", "surface2", "--D", "4", "--n", "2", "--force-D")
    assert code == 0
    assert json.loads(out)["watermark"] == "NON-CONFORMING: D < 12*delta_ideal"


def test_out_file_replaces_stdout(capsys, tmp_path):
    target = tmp_path / "report.json"
    target.write_text("stale")
    code, out, _ = _cli(capsys, "ball", "--preset", "z", "--n", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "ball"
    assert [p.name for p in tmp_path.iterdir()] == ["report.json"]


@pytest.mark.parametrize("fmt", ["json", "dot"])
def test_export_complex(capsys, tmp_path, fmt):
    target = tmp_path / f"k.{fmt}"
    code, out, _ = _cli(capsys, "export", "--preset", "f2", "--D", "1", "--n", "2", "--format", fmt,
                        "--artifact", str(target))
    assert code == 0
    res = json.loads(out)["result"]
    text = target.read_text()
    if fmt == "json":
        assert isinstance(json.loads(text), dict)
    else:
        assert text.lstrip().startswith(("graph", "strict graph"))
    assert res["vertices"] == 12 and res["path"] == target.name


def test_export_ball_round_trips(capsys, tmp_path):
    target = tmp_path / "ball.cache"
    code, out, _ = _cli(capsys, "export", "--what", "ball", "--preset", "f2", "--n", "3",
                        "--artifact", str(target))
    assert code == 0 and target.exists()
    assert json.loads(out)["result"]["radius"] == 3


def test_reports_are_deterministic():
    cfg = dict(preset="f2", D=1, n_range=(2, 3), seed=5)
    a = json.dumps(run("rays", RunConfig(**cfg)), sort_keys=True, default=str)
    b = json.dumps(run("rays", RunConfig(**cfg)), sort_keys=True, default=str)
    assert a == b
