import csv
import json

import pytest

from ergofit.cli import main


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert main(["generate", "--style", "all", "--count", "8", "--seed", "3",
                 "--out", str(out)]) == 0
    return out


def test_generate_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["generate", "--style", "office", "--count", "4", "--seed", "1",
                 "--out", str(a)]) == 0
    assert main(["generate", "--style", "office", "--count", "4", "--seed", "1",
                 "--out", str(b)]) == 0
    files_a = sorted(p.name for p in a.glob("*.json"))
    files_b = sorted(p.name for p in b.glob("*.json"))
    assert files_a == files_b and len(files_a) == 4
    for name in files_a:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_rank_csv_ascending(corpus_dir, tmp_path):
    out = tmp_path / "rank.csv"
    assert main(["rank", "--collection", str(corpus_dir), "--pose", "normal_sitting",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["rank", "shape_id", "energy"]
    energies = [float(r[2]) for r in rows[1:]]
    assert energies == sorted(energies)
    assert len(energies) == 8


def test_deform_writes_shape_and_report(corpus_dir, tmp_path):
    shape_file = sorted(corpus_dir.glob("*.json"))[0]
    out = tmp_path / "deformed.json"
    assert main(["deform", "--shape", str(shape_file), "--pose", "bar_sitting",
                 "--out", str(out)]) == 0
    assert out.exists()
    report = json.loads((tmp_path / "deformed.report.json").read_text())
    assert all(c["satisfied"] for c in report["constraints"])
    assert report["total_energy"] >= 2.0


def test_deform_dump_constraints(corpus_dir, capsys):
    shape_file = sorted(corpus_dir.glob("*.json"))[0]
    assert main(["deform", "--shape", str(shape_file), "--pose", "beach_lying",
                 "--dump-constraints"]) == 0
    groups = json.loads(capsys.readouterr().out)
    assert [g["name"] for g in groups][0] == "heights"


def test_classify_csv(corpus_dir, tmp_path):
    out = tmp_path / "labels.csv"
    assert main(["classify", "--collection", str(corpus_dir), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0][0] == "shape_id" and rows[0][-1] == "label"
    assert len(rows) == 9


def test_embed_csv_columns(corpus_dir, tmp_path):
    out = tmp_path / "embed.csv"
    assert main(["embed", "--collection", str(corpus_dir), "--metric", "euclidean",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["shape_id", "cost_normal_sitting", "cost_bench_sitting",
                       "cost_beach_lying", "cost_bar_sitting", "label", "u", "v", "stress"]
    stresses = {r[-1] for r in rows[1:]}
    assert len(stresses) == 1


def test_coretrieve_outputs(tmp_path):
    chairs, tables, monitors = tmp_path / "c", tmp_path / "t", tmp_path / "m"
    assert main(["generate", "--style", "office", "--count", "2", "--seed", "5",
                 "--out", str(chairs)]) == 0
    # tables/monitors are not chair styles; write them directly
    from ergofit.generator import generate_monitor, generate_table
    from ergofit.shape import save_shape
    tables.mkdir()
    monitors.mkdir()
    save_shape(generate_table(seed=1), tables / "table.json")
    save_shape(generate_monitor(seed=1), monitors / "monitor.json")
    out = tmp_path / "workspace"
    assert main(["coretrieve", "--chairs", str(chairs), "--tables", str(tables),
                 "--monitors", str(monitors), "--pose", "normal_sitting",
                 "--out", str(out)]) == 0
    summary = json.loads((out / "coretrieve.json").read_text())
    assert [e["category"] for e in summary] == ["chair", "table", "monitor"]
    assert len(list(out.glob("*.json"))) == 4


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["polish", "--collection", "x"])
    assert exc.value.code == 2


def test_missing_file_exits_1(tmp_path):
    assert main(["deform", "--shape", str(tmp_path / "nope.json")]) == 1


def test_rank_matches_across_invocations(corpus_dir, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["rank", "--collection", str(corpus_dir), "--pose", "beach_lying",
                     "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_serve_port_env_override(corpus_dir, monkeypatch):
    captured = {}

    def fake_run(app, host, port, log_level):
        captured["port"] = port

    monkeypatch.setenv("ERGOFIT_PORT", "9317")
    monkeypatch.setattr("uvicorn.run", fake_run)
    assert main(["serve", "--collection", str(corpus_dir), "--port", "8000"]) == 0
    assert captured["port"] == 9317
