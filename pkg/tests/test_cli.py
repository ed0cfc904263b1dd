import json

import pytest

from opmkit.cli import INVALID, OK, USAGE, main
from opmkit.corpus import corpus_path


@pytest.fixture
def corpus_copy(tmp_path):
    dest = tmp_path / "model.opm"
    dest.write_text(corpus_path().read_text(encoding="utf-8"), encoding="utf-8")
    return dest


def test_validate_clean(capsys):
    assert main(["validate", str(corpus_path()), "--strict"]) == OK
    assert capsys.readouterr().err == ""


def test_validate_warnings_and_strict(tmp_path, capsys):
    src = tmp_path / "w.opm"
    src.write_text('object "Lonely".\n', encoding="utf-8")
    assert main(["validate", str(src)]) == OK
    assert "W1 warning Lonely" in capsys.readouterr().err
    assert main(["validate", str(src), "--strict"]) == INVALID


def test_validate_reports_positions(tmp_path, capsys):
    src = tmp_path / "bad.opm"
    src.write_text('object "A".\nprocess "P".\n"P" is agent of "A".\n', encoding="utf-8")
    assert main(["validate", str(src)]) == INVALID
    assert f"{src}:P202 error 3:1:" in capsys.readouterr().err


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.opm")]) == USAGE
    assert "cannot read" in capsys.readouterr().err


def test_bad_arguments_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["export", "x", "--format", "png"])
    assert info.value.code == 2


def test_fmt_is_idempotent_and_quiet_when_canonical(corpus_copy):
    text = corpus_copy.read_text(encoding="utf-8")
    messy = "\n\n".join(line + "  // note" if line and not line.startswith("//") else line for line in text.splitlines())
    corpus_copy.write_text(messy, encoding="utf-8")
    assert main(["fmt", str(corpus_copy)]) == OK
    assert corpus_copy.read_text(encoding="utf-8") == text
    before = corpus_copy.stat().st_mtime_ns
    assert main(["fmt", str(corpus_copy)]) == OK
    assert corpus_copy.stat().st_mtime_ns == before


def test_fmt_refuses_invalid_input(tmp_path):
    src = tmp_path / "bad.opm"
    src.write_text('object "A"', encoding="utf-8")
    assert main(["fmt", str(src)]) == INVALID
    assert src.read_text(encoding="utf-8") == 'object "A"'


def test_render_all_and_one(tmp_path, capsys):
    assert main(["render", str(corpus_path()), "--out", str(tmp_path)]) == OK
    written = capsys.readouterr().out.split()
    assert [p.rsplit("-", 1)[1] for p in written] == ["SD.svg", "SD1.svg", "SD1.1.svg"]
    assert main(["render", str(corpus_path()), "SD1", "--out", str(tmp_path / "one")]) == OK
    assert len(list((tmp_path / "one").iterdir())) == 1
    assert main(["render", str(corpus_path()), "SD7", "--out", str(tmp_path)]) == USAGE


def test_export_formats(tmp_path, capsys):
    assert main(["export", str(corpus_path()), "--format", "json"]) == OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["nodes"]) == 18 and len(doc["edges"]) == 20
    out = tmp_path / "g.dot"
    assert main(["export", str(corpus_path()), "--format", "dot", "--out", str(out)]) == OK
    assert out.read_text(encoding="utf-8").startswith('digraph "Unique HPC System Development" {')


def test_requirements(capsys):
    assert main(["requirements", str(corpus_path()), "MicroAI"]) == OK
    out = capsys.readouterr().out.splitlines()
    assert out == [
        "SYSTEM MicroAI",
        "  - Articles Storage (instrument, SD1.1)",
        "  - Prototypes Storage (instrument, SD1.1)",
        "  - Solutions Storage (instrument, SD1.1)",
    ]
    assert main(["requirements", str(corpus_path()), "Artificial Electronic", "--format", "json"]) == OK
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["functions"]) == 4


def test_requirements_unknown_or_wrong_kind(capsys):
    assert main(["requirements", str(corpus_path()), "Nobody"]) == USAGE
    assert main(["requirements", str(corpus_path()), "Production"]) == USAGE
    assert "not an object" in capsys.readouterr().err


def test_example_path(capsys):
    assert main(["example"]) == OK
    assert capsys.readouterr().out.strip() == str(corpus_path())
