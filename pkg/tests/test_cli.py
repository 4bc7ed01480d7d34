import json

import pytest

from shiftwish.cli import main
from shiftwish.fixture import bundled_fixture_path, roster_csv


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "roster.csv").write_text(roster_csv(), encoding="utf-8")
    assert main(["init"]) == 0
    config = json.loads((tmp_path / "shiftwish.json").read_text())
    config["roster_path"] = str(tmp_path / "roster.csv")
    (tmp_path / "shiftwish.json").write_text(json.dumps(config))
    return tmp_path


def test_init_refuses_overwrite(workspace, capsys):
    assert main(["init"]) == 1


def test_import_roster_reports_workers(workspace, capsys):
    assert main(["import-roster", "roster.csv"]) == 0
    out = capsys.readouterr().out
    assert "roster ok: 16 workers" in out


def test_open_detect_release_export_stats(workspace, capsys):
    assert main(["open-cycle", "2019-03"]) == 0
    assert main(["detect", "2019-03"]) == 0  # no conflicts
    out = capsys.readouterr().out
    assert "no conflicts" in out

    assert main(["release", "2019-03", "--as-of", "2019-02-14"]) == 0
    out = capsys.readouterr().out
    assert "released 2019-03" in out

    matrix = workspace / "march.csv"
    assert main(["export", "2019-03", "--format", "matrix", "--out", str(matrix)]) == 0
    header = matrix.read_text(encoding="utf-8").splitlines()[0]
    assert header.startswith("worker_id,2019-03-01")

    ics = workspace / "w01.ics"
    assert (
        main(["export", "2019-03", "--format", "ics", "--worker", "w01", "--out", str(ics)])
        == 0
    )
    assert "BEGIN:VEVENT" in ics.read_text(encoding="utf-8")

    assert main(["stats"]) == 0
    out = capsys.readouterr().out
    assert '"total_wishes": 0' in out


def test_stats_on_study_fixture(workspace, capsys):
    log = workspace / "study.jsonl"
    log.write_text(bundled_fixture_path().read_text(encoding="utf-8"), encoding="utf-8")
    assert main(["--log-path", str(log), "stats"]) == 0
    out = capsys.readouterr().out
    report = json.loads(out[: out.rindex("}") + 1])
    assert report["total_wishes"] == 105
    assert report["max_per_worker"] == 26

    assert main(["--log-path", str(log), "stats", "--exclude", "2019-11"]) == 0
    out = capsys.readouterr().out
    report = json.loads(out[: out.rindex("}") + 1])
    assert report["total_wishes"] == 74


def test_export_before_release_fails(workspace, capsys):
    assert main(["open-cycle", "2019-04"]) == 0
    assert main(["export", "2019-04"]) == 1
