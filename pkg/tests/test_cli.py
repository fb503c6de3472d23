import json
from io import StringIO
from pathlib import Path

import pytest

from opkoszul.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, EXIT_WINDOW, _status, parse_presentation, run
from opkoszul.algebras import PresentationError

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def sample(name):
    return str(SAMPLES / name)


def call(*argv):
    out = StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_abelianize_table():
    code, text = call("abelianize", sample("free_x.yaml"))
    assert code == EXIT_OK
    assert "## routes agree: PASS" in text
    assert "1\t1\t1\tyes" in text


def test_dual_numbers_cohomological():
    code, text = call("abelianize", sample("dual_numbers.yaml"), "--cohomological", "--weight-cap", "3",
                      "--format", "json")
    assert code == EXIT_OK
    data = json.loads(text)
    assert data["reports"][0]["passed"]


def test_bad_degree_reports_line():
    with pytest.raises(PresentationError, match="line 7"):
        parse_presentation(sample("bad_degree.yaml"))
    assert call("homology", sample("bad_degree.yaml"))[0] == EXIT_USAGE


def test_usage_errors():
    assert call()[0] == EXIT_USAGE
    assert call("homology")[0] == EXIT_USAGE
    assert call("homology", sample("missing.yaml"))[0] == EXIT_USAGE
    assert call("dims", "--operad", "lie")[0] == EXIT_USAGE


def test_window_exit_codes():
    assert call("unit-check", sample("free_x.yaml"), "--max-degree", "2")[0] == EXIT_WINDOW
    assert call("homology", sample("free_x.yaml"), "--bar-depth", "1", "--max-degree", "7")[0] == EXIT_WINDOW


def test_failing_report_exit_code():
    rep = {"name": "r", "passed": False, "rows": [], "notes": [], "data": {}}
    assert _status({"reports": [rep]}) == EXIT_FAIL
    assert _status({"reports": [dict(rep, passed=True)]}) == EXIT_OK


@pytest.mark.parametrize("argv,value", [
    (("bm", "profile_bm.yaml"), "0"),
    (("dual-bm", "profile_dual.yaml"), "6"),
    (("uniformity", "--offset", "3"), "2id+2"),
    (("dims", "--filtration"), "1 / 1,1 / 1,3,2 / 1,6,11,6"),
    (("dims", "--operad", "com"), "1 / 1 / 1 / 1"),
])
def test_values(argv, value):
    argv = [sample(a) if a.endswith(".yaml") else a for a in argv]
    code, text = call(*argv)
    assert code == EXIT_OK
    assert f"value\t{value}\n" in text


def test_lim1():
    code, text = call("lim1", sample("tower.yaml"), "--format", "json")
    assert code == EXIT_OK and json.loads(text)["value"] == {"lim": 1, "lim1": 0}


def test_environment_defaults_and_flag_precedence(monkeypatch):
    monkeypatch.setenv("OPK_FORMAT", "json")
    code, text = call("bm", sample("profile_bm.yaml"))
    assert json.loads(text)["value"] == 0
    code, text = call("bm", sample("profile_bm.yaml"), "--format", "table")
    assert text.startswith("# bm")


def test_json_round_trip(tmp_path):
    code, text = call("homology", sample("xy.yaml"), "--format", "json")
    assert code == EXIT_OK
    dump = tmp_path / "dump.json"
    dump.write_text(text)
    code2, text2 = call("homology", str(dump), "--format", "json")
    a, b = json.loads(text), json.loads(text2)
    assert list(a["tables"].values())[0] == b["tables"]["complex"]
    assert a["complex"] == b["complex"]


def test_output_is_deterministic():
    runs = [call("nc-tower", sample("free_x.yaml"), "--max-degree", "4", "--stages", "2") for _ in range(2)]
    assert runs[0] == runs[1] and runs[0][0] == EXIT_OK


def test_figures(tmp_path):
    pytest.importorskip("matplotlib")
    code, _ = call("homology", sample("free_x.yaml"), "--figures", str(tmp_path))
    assert code == EXIT_OK and (tmp_path / "homology.png").stat().st_size > 0
    code, _ = call("nc-tower", sample("free_x.yaml"), "--max-degree", "4", "--stages", "2",
                   "--figures", str(tmp_path))
    assert (tmp_path / "nc-tower.png").exists()


def test_en_tower_and_counit():
    assert call("en-tower", sample("poisson_x.yaml"), "--max-degree", "4", "--stages", "2")[0] == EXIT_OK
    assert call("counit-check", sample("com_x.yaml"), "--max-degree", "8", "--cosimplicial-depth", "0")[0] == EXIT_OK
