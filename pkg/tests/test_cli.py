import json
import xml.etree.ElementTree as ET

import pytest

from lattice_curve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_on(capsys):
    code, out, _ = run(capsys, "count", "--curve", "circle R=5", "--lattice", "Z2", "--on")
    assert code == 0 and json.loads(out)["count"] == 12


def test_count_near_requires_delta(capsys):
    code, _, err = run(capsys, "count", "--curve", "circle R=5", "--lattice", "Z2", "--near")
    assert code == 2 and "delta" in err


def test_count_near(capsys):
    code, out, _ = run(capsys, "count", "--curve", "circle R=5", "--lattice", "Z2", "--near", "--delta", "0.05")
    assert code == 0 and json.loads(out)["count"] >= 12


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--curve", "circle R=5", "--lattice", "hex", "--on", "--csv")
    assert code == 0 and out.splitlines()[0] == "m,n,x,y,distance,t_star"


def test_bad_shorthand(capsys):
    assert run(capsys, "count", "--curve", "spiral k=1", "--lattice", "Z2", "--on")[0] == 2
    assert run(capsys, "count", "--curve", "circle R=5", "--lattice", "Z3", "--on")[0] == 2


def test_file_and_inline_ambiguity(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "Z2").write_text(json.dumps({"v0": [0, 0], "v1": [1, 0], "v2": [0, 1]}))
    code, _, err = run(capsys, "count", "--curve", "circle R=5", "--lattice", "Z2", "--on")
    assert code == 2 and "both" in err


def test_curve_from_file(tmp_path, capsys):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"kind": "circle_arc", "center": [0, 0], "R": 5.0}))
    code, out, _ = run(capsys, "count", "--curve", str(f), "--lattice", "Z2", "--on")
    assert code == 0 and json.loads(out)["count"] == 12


def test_bound_single(capsys):
    code, out, _ = run(capsys, "bound", "--curve", "circle R=5", "--lattice", "Z2", "--theorem", "thm_circ_closed")
    v = json.loads(out)
    assert code == 0 and v["bound_value"] == pytest.approx(18.37, abs=0.01) and v["preconditions"]


def test_bound_inapplicable_is_exit_0(capsys):
    code, out, _ = run(capsys, "bound", "--curve", "circle R=5 theta1=1", "--lattice", "Z2",
                       "--theorem", "thm_circ_closed", "--check")
    assert code == 0 and json.loads(out)["applicable"] is False


def test_bound_unknown(capsys):
    assert run(capsys, "bound", "--curve", "circle R=5", "--lattice", "Z2", "--theorem", "nonsense")[0] == 2


def test_failure_dump_replay(tmp_path, capsys):
    dump = {
        "curve": {"kind": "circle_arc", "center": [0, 0], "R": 5.0}, "lattice": {"v0": [0, 0], "v1": [1, 0], "v2": [0, 1]},
        "delta": None, "eps_on": 5e-9, "overrides": {"A": 1000.0}, "theorem_id": "thm_circ_closed",
    }
    f = tmp_path / "dump.json"
    f.write_text(json.dumps(dump))
    code, out, _ = run(capsys, "bound", "--instance", str(f), "--theorem", "all", "--check")
    assert code == 1
    verdicts = {v["theorem_id"]: v for v in json.loads(out)}
    assert verdicts["thm_circ_closed"]["passed"] is False
    code2, out2, _ = run(capsys, "bound", "--instance", str(f), "--theorem", "all", "--check")
    assert out2 == out


def test_verify_small(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"families": {"circle": 4, "parabola": 4}}))
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["trials"] == 8 and rep["seed"] == 1


def test_verify_env_seed(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"families": {"circle": 2}}))
    monkeypatch.setenv("LATTICE_CURVE_SEED", "99")
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    assert code == 0 and json.loads(out)["seed"] == 99


def test_verify_bad_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"families": {"circle": 0}}))
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2


def test_sharpness_schinzel(capsys):
    code, out, _ = run(capsys, "sharpness", "--family", "schinzel", "--R-sweep", "1,10,100")
    ratios = [r["ratio"] for r in json.loads(out)["rows"]]
    assert code == 0 and ratios == sorted(ratios)


def test_sharpness_parabolic(capsys):
    code, out, _ = run(capsys, "sharpness", "--family", "parabolic", "--n", "3", "--a-sweep", "10,100,1000")
    rows = json.loads(out)["rows"]
    assert code == 0 and all(r["count"] == 3 and r["quantity"] < 5 for r in rows)


def test_plot(tmp_path, capsys):
    spec = tmp_path / "p.json"
    svg = tmp_path / "p.svg"
    spec.write_text(json.dumps({"curve": "circle R=5", "lattice": "Z2", "delta": 0.1, "out": str(svg)}))
    assert run(capsys, "plot", "--spec", str(spec))[0] == 0
    root = ET.parse(svg).getroot()
    hits = [e for e in root.iter() if e.get("class") == "hit"]
    assert len(hits) == 12


def test_plot_bad_size(tmp_path, capsys):
    spec = tmp_path / "p.json"
    spec.write_text(json.dumps({"curve": "circle R=5", "lattice": "Z2", "size": [10, 10]}))
    assert run(capsys, "plot", "--spec", str(spec))[0] == 2
