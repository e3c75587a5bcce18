import json

import pytest

from interlangue.cli import main
from interlangue.render import render_svg
from interlangue.space import load_snapshot, state_from_snapshot, total_energy

from conftest import DATA

TOY = str(DATA / "toy_en_ja.tsv")
GOLDEN_TABLE = DATA / "toy_en_ja_table.tsv"


def run_count(tmp_path, name="table.tsv", extra=()):
    out = tmp_path / name
    code = main(["count", "--corpus", TOY, "--langs", "en-ja",
                 "--align", "provided", "--out", str(out), *extra])
    assert code == 0
    return out


def run_layout(tmp_path, name="snap.json", rounds="6", svg=None, seed_rng="7"):
    out = tmp_path / name
    table = run_count(tmp_path)
    argv = ["layout", "--table", str(table), "--seed", "en:beautiful",
            "--pairs", "en-ja", "--rounds", rounds, "--seed-rng", seed_rng,
            "--out", str(out)]
    if svg:
        argv += ["--svg", str(tmp_path / svg)]
    assert main(argv) == 0
    return out


# -- count -------------------------------------------------------------------

def test_count_matches_golden_table(tmp_path):
    out = run_count(tmp_path)
    assert out.read_bytes() == GOLDEN_TABLE.read_bytes()


def test_count_parallel_jobs_identical(tmp_path):
    serial = run_count(tmp_path, "serial.tsv")
    parallel = run_count(tmp_path, "parallel.tsv", extra=("--jobs", "3"))
    assert serial.read_bytes() == parallel.read_bytes()


def test_count_dice_runs(tmp_path):
    out = tmp_path / "dice.tsv"
    code = main(["count", "--corpus", TOY, "--langs", "en-ja",
                 "--align", "dice:0.99", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert "# pairs" in text


# -- layout ---------------------------------------------------------------

def test_layout_deterministic_bytes(tmp_path):
    a = run_layout(tmp_path, "a.json", svg="a.svg")
    b = run_layout(tmp_path, "b.json", svg="b.svg")
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_layout_rounds_zero_snapshots_initial_configuration(tmp_path):
    out = run_layout(tmp_path, rounds="0")
    snap = load_snapshot(out)
    words = {(w["lang"], w["word"]) for w in snap["words"]}
    assert words == {("en", "beautiful"), ("ja", "utsukushii"), ("ja", "kirei")}
    pinned = next(w for w in snap["words"] if w["word"] == "beautiful")
    assert pinned["x"] == [0.0, 0.0]
    assert len(snap["edges"]) == 2


def test_snapshot_energy_matches_recomputation(tmp_path):
    snap = load_snapshot(run_layout(tmp_path))
    state, config = state_from_snapshot(snap)
    total, rep, att = total_energy(state, config)
    assert total == pytest.approx(snap["energy"]["total"], rel=1e-12, abs=1e-15)
    assert rep == pytest.approx(snap["energy"]["rep"], rel=1e-12, abs=1e-15)
    assert att == pytest.approx(snap["energy"]["att"], rel=1e-12, abs=1e-15)


# -- export ---------------------------------------------------------------

def test_export_svg_round_trip(tmp_path):
    snap_path = run_layout(tmp_path, svg="direct.svg")
    out = tmp_path / "exported.svg"
    assert main(["export", "--snapshot", str(snap_path), "--out", str(out)]) == 0
    assert out.read_bytes() == (tmp_path / "direct.svg").read_bytes()


def test_export_network_json(tmp_path):
    table = run_count(tmp_path)
    out = tmp_path / "net.json"
    assert main(["export", "--network", "--table", str(table),
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["nodes"]) == 19
    assert len(data["edges"]) == 8
    assert data["pairs"][0]["total"] == 20


def test_build_network_subcommand(tmp_path):
    table = run_count(tmp_path)
    out = tmp_path / "net.json"
    assert main(["build-network", "--table", str(table), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["pairs"][0]["total"] == 20


# -- render ---------------------------------------------------------------

def test_svg_structure(tmp_path):
    snap = load_snapshot(run_layout(tmp_path))
    svg = render_svg(snap)
    assert svg.count("<text") == len(snap["words"])
    assert svg.count("<line") == len(snap["edges"])
    assert render_svg(snap) == svg  # pure function of the snapshot


def test_svg_escapes_markup():
    snap = {
        "words": [{"lang": "en", "word": "a<b&c", "x": [0.0, 0.0], "q": 1.0,
                   "t": 1, "occ": 2}],
        "edges": [],
        "pinned": {"lang": "en", "word": "a<b&c"},
        "pairs": [["en", "ja"]],
        "energy": {"total": 0.0, "rep": 0.0, "att": 0.0},
        "config": {"gamma": 0.5},
    }
    svg = render_svg(snap)
    assert "a&lt;b&amp;c" in svg


# -- exit codes ---------------------------------------------------------------

def test_unknown_flag_is_usage_error(tmp_path):
    assert main(["count", "--corpus", TOY, "--langs", "en-ja",
                 "--out", str(tmp_path / "t.tsv"), "--frobnicate"]) == 1


def test_missing_subcommand_is_usage_error():
    assert main([]) == 1


def test_missing_file_is_data_error(tmp_path):
    assert main(["count", "--corpus", str(tmp_path / "absent.tsv"),
                 "--langs", "en-ja", "--out", str(tmp_path / "t.tsv")]) == 2


def test_unknown_seed_word_is_data_error(tmp_path):
    table = run_count(tmp_path)
    assert main(["layout", "--table", str(table), "--seed", "en:zzz",
                 "--pairs", "en-ja", "--out", str(tmp_path / "s.json")]) == 2


def test_malformed_table_is_data_error(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("not a table\n", encoding="utf-8")
    assert main(["build-network", "--table", str(bad),
                 "--out", str(tmp_path / "n.json")]) == 2
