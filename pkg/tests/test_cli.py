import csv
import json
import re
import shutil

import pytest

from metasoc.cli import main
from metasoc.constructions import CSV_COLUMNS, cluster, dump_profile

from conftest import conllu_block
from test_constructions import inst
from test_rules import twelve_timelines


def run(*argv):
    return main([str(a) for a in argv])


def write_profile(path, freqs_by_label, lemma):
    insts, k = [], 0
    for label, year, n in freqs_by_label:
        for _ in range(n):
            insts.append(inst(label, year=year, sent=f"s{k}", lemma=lemma))
            k += 1
    path.write_text(dump_profile(cluster(insts, 1, 0.0)), encoding="utf-8")


def test_extract(tmp_path, synthetic_path, capsys):
    assert run("extract", synthetic_path, "--lemma", "lianyin", "--dump-instances",
               "-o", tmp_path) == 0
    rows = list(csv.DictReader(open(tmp_path / "constructions.csv", encoding="utf-8")))
    assert rows and rows[0]["lemma"] == "lianyin"
    assert (tmp_path / "profiles" / "lianyin.json").exists()
    assert len((tmp_path / "instances.jsonl").read_text().splitlines()) == 25
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "extract" and manifest["exit_code"] == 0
    assert "constructions.csv" in manifest["outputs"]


def test_extract_absent_lemma(tmp_path, synthetic_path):
    assert run("extract", synthetic_path, "--lemma", "nothere", "-o", tmp_path) == 3
    assert (tmp_path / "constructions.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_extract_strict_malformed(tmp_path, capsys):
    corpus = tmp_path / "bad.conllu"
    corpus.write_text(conllu_block([("a", "a", 1, "root")], sent_id="broken-3"))
    assert run("extract", corpus, "--lemma", "a", "--strict", "-o", tmp_path / "out") == 2
    assert "broken-3" in capsys.readouterr().err


def test_extract_missing_file(tmp_path):
    assert run("extract", tmp_path / "nope.conllu", "--lemma", "a", "-o", tmp_path) == 2


def test_fit_exact_points(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("x,y\n1,2\n2,1\n4,0.5\n")
    assert run("fit", pts, "-o", tmp_path / "out") == 0
    fit = json.loads((tmp_path / "out" / "fit.json").read_text())
    assert fit["params"] == {"a": 2.0, "b": 1.0}
    assert fit["r_squared"] == 1.0
    svg = (tmp_path / "out" / "fit.svg").read_text()
    assert "R² = 1.0000" in svg and "<polyline" in svg


def test_fit_too_few_points(tmp_path, capsys):
    prof = tmp_path / "two.json"
    write_profile(prof, [("ROOT", 1990, 9), ("CCOMP", 1991, 8)], "two")
    assert run("fit", prof, "-o", tmp_path / "out") == 4
    assert "TooFewPoints" in capsys.readouterr().err


def test_fit_other_models(tmp_path):
    pts = tmp_path / "pts.csv"
    pts.write_text("x,y\n1,1\n2,3\n3,9\n4,15\n5,18\n6,19.5\n")
    assert run("fit", pts, "--model", "logistic", "-o", tmp_path / "out") == 0
    assert json.loads((tmp_path / "out" / "fit.json").read_text())["model"] == "logistic"


def test_fit_family(tmp_path):
    assert run("fit", "--family", "a=2", "b=0.5:2.5:0.5", "-o", tmp_path) == 0
    svg = (tmp_path / "family.svg").read_text()
    assert svg.count('class="curve"') == 5
    rows = list(csv.DictReader(open(tmp_path / "family.csv", encoding="utf-8")))
    firsts = {}
    for r in rows:
        firsts.setdefault(r["b"], (float(r["x"]), float(r["y"])))
    assert sorted(firsts) == ["0.5", "1.0", "1.5", "2.0", "2.5"]
    assert set(firsts.values()) == {(1.0, 2.0)}


def test_fit_batch(tmp_path):
    profiles = tmp_path / "profiles"
    profiles.mkdir()
    write_profile(profiles / "a.json", [("ROOT", 1990, 60), ("CCOMP", 1991, 30),
                                        ("DEP", 1992, 20), ("CONJ", 1993, 15)], "a")
    write_profile(profiles / "b.json", [("ROOT", 1990, 9)], "b")
    assert run("fit", profiles, "--batch", "-o", tmp_path / "out") == 0
    report = json.loads((tmp_path / "out" / "batch_fit.json").read_text())
    assert set(report["fits"]) == {"a"}
    assert report["errors"]["b"].startswith("TooFewPoints")
    assert report["r_squared"]["mean"] == pytest.approx(1.0)


def test_rules_on_the_fixture(tmp_path):
    profiles = tmp_path / "profiles"
    profiles.mkdir()
    for t in twelve_timelines():
        write_profile(profiles / f"{t.lemma}.json",
                      [(label, year, 7) for label, year in t.class_foys.items()], t.lemma)
    assert run("rules", profiles, "-o", tmp_path / "default") == 0
    text = (tmp_path / "default" / "rules.txt").read_text()
    assert text.splitlines()[0] == "CONJ(X, VEHICLE) → DEP(X, VEHICLE)  p=1.00  n=7"
    assert run("rules", profiles, "--min-frequency", 0, "--min-probability", 0,
               "-o", tmp_path / "loose") == 0
    strict = json.loads((tmp_path / "default" / "rules.json").read_text())
    loose = json.loads((tmp_path / "loose" / "rules.json").read_text())
    assert all(r in loose for r in strict) and len(loose) > len(strict)


def test_rules_single_profile(tmp_path, capsys):
    profiles = tmp_path / "profiles"
    profiles.mkdir()
    write_profile(profiles / "x.json", [("ROOT", 1990, 9), ("CONJ", 1995, 8)], "x")
    assert run("rules", profiles, "-o", tmp_path / "out") == 0
    assert json.loads((tmp_path / "out" / "rules.json").read_text()) == []
    assert "single metaphor" in capsys.readouterr().err


def test_correlate(tmp_path, metaphors_path, capsys):
    assert run("correlate", metaphors_path, "-o", tmp_path) == 0
    out = capsys.readouterr().out
    assert out == (tmp_path / "matrix.csv").read_text()
    assert "-0.554363698" in out and "0.529680999" in out and "-0.459786631" in out


def test_correlate_one_row(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("lemma,b,foy,frequency\nx,1.2,1960,30\n")
    assert run("correlate", table, "-o", tmp_path / "out") == 2


def test_correlate_constant_column(tmp_path, capsys):
    table = tmp_path / "t.csv"
    table.write_text("lemma,b,foy,frequency\nx,1.2,1960,30\ny,1.5,1960,40\nz,0.9,1960,10\n")
    assert run("correlate", table, "-o", tmp_path / "out") == 4
    assert "'foy'" in capsys.readouterr().err


def test_sandpile_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert run("simulate", "sandpile", "--width", 5, "--height", 5, "--seed", 1,
                   "--drops", 100, "-o", tmp_path / name) == 0
    for f in ("records.csv", "avalanches.json", "config.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    assert len((tmp_path / "a" / "records.csv").read_text().splitlines()) == 101


def test_sandpile_histogram_and_plot(tmp_path):
    assert run("simulate", "sandpile", "--width", 20, "--height", 20, "--drops", 20000,
               "--seed", 3, "-o", tmp_path) == 0
    svg = (tmp_path / "distribution.svg").read_text()
    assert re.search(r"slope = -\d", svg)
    assert (tmp_path / "histogram.csv").read_text().startswith("size,value\n")


def test_simulate_bad_config(tmp_path):
    assert run("simulate", "sandpile", "--threshold", 2, "-o", tmp_path) == 2


def test_adoption_zero_threshold(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_nodes": 100, "threshold_fraction": 0.0,
                               "innovation_rate": 0.1, "steps": 80, "seed": 2}))
    assert run("simulate", "adoption", "--config", cfg, "-o", tmp_path / "out") == 0
    rows = list(csv.DictReader(open(tmp_path / "out" / "trace.csv", encoding="utf-8")))
    first = next(r for r in rows if r["innovations"] == "1")
    assert first["cumulative_adopters"] == "100"
    assert rows[-1]["cumulative_adopters"] == "100"


def test_report(tmp_path, synthetic_path):
    assert run("extract", synthetic_path, "--lemma", "lianyin", "-o", tmp_path) == 0
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps([{"antecedent": "CONJ", "consequent": "NSUBJ",
                                  "frequency": 7, "conditional_probability": 0.875}]))
    assert run("report", "--profile", tmp_path / "profiles" / "lianyin.json",
               "--rules", rules, "-o", tmp_path / "rep") == 0
    report = json.loads((tmp_path / "rep" / "report.json").read_text())
    assert report["lemma"] == "lianyin"
    assert report["construction_count"] == len(report["constructions"])
    assert (tmp_path / "rep" / "report.svg").read_text().startswith("<svg")


def test_replay_reproduces_outputs(tmp_path, synthetic_path):
    out = tmp_path / "first"
    assert run("extract", synthetic_path, "--lemma", "lianyin", "--lemma", "chao",
               "-o", out) == 0
    before = {p.name: p.read_bytes() for p in out.rglob("*") if p.is_file()
              and p.name != "manifest.json"}
    shutil.rmtree(out / "profiles")
    (out / "constructions.csv").unlink()
    assert run("replay", out / "manifest.json") == 0
    after = {p.name: p.read_bytes() for p in out.rglob("*") if p.is_file()
             and p.name != "manifest.json"}
    assert after == before


def test_commands_do_not_touch_inputs(tmp_path, synthetic_path, metaphors_path):
    snapshot = {p: p.read_bytes() for p in (synthetic_path, metaphors_path)}
    run("extract", synthetic_path, "--lemma", "lianyin", "-o", tmp_path / "a")
    run("correlate", metaphors_path, "-o", tmp_path / "b")
    assert {p: p.read_bytes() for p in snapshot} == snapshot
