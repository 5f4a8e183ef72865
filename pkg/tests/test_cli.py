import json

import pytest

from conic_codes.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["verify", "--q", "8"],
    ["verify", "--q", "3"],
    ["verify", "--q", "103"],
    ["verify", "--p", "3"],
    ["dims", "--q", "9", "--poly", "1,0,1,1"],
    ["classify", "--q", "9", "--point", "0", "0", "9"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_group_suites_rejected_above_31(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--q", "37", "--suite", "group"])
    assert info.value.code == 2


def test_verify_text_q5(capsys):
    code, out = run(capsys, "verify", "--q", "5", "--suite", "matrix", "--format", "text", "--no-timestamp")
    assert code == 0
    lines = out.out.splitlines()
    assert "B5_eq_B: pass" in lines
    assert "dim_L: expected 5, actual 5 [pass]" in lines


def test_verify_json_q7(capsys):
    code, out = run(capsys, "verify", "--q", "7", "--suite", "matrix", "--no-timestamp")
    report = json.loads(out.out)
    assert code == 0 and report["pass"]
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["dim_L"]["actual"] == 8
    assert "timestamp" not in report
    assert all("elapsed" not in c for c in report["checks"])


def test_verify_all_suites_q7(capsys):
    code, out = run(capsys, "verify", "--q", "7", "--threads", "2", "--no-timestamp")
    report = json.loads(out.out)
    assert code == 0
    assert report["suites"] == ["geometry", "matrix", "group", "blocks"]
    assert all(c["pass"] for c in report["checks"])


def test_verify_deterministic(capsys):
    argv = ["verify", "--q", "9", "--no-timestamp"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv[:-1], "--threads", "1", "--no-timestamp")
    assert a.out == b.out


def test_field_by_p_and_e(capsys):
    _, a = run(capsys, "dims", "--q", "9")
    _, b = run(capsys, "dims", "--p", "3", "--e", "2", "--poly", "2,2,1")
    assert json.loads(a.out) == json.loads(b.out)


def test_dims_q11(capsys):
    code, out = run(capsys, "dims", "--q", "11", "--matrix", "A33")
    assert code == 0
    assert json.loads(out.out) == {"n": 66, "k": 24, "rank": 42}


def test_export_alist_header(capsys, tmp_path):
    path = tmp_path / "a33.alist"
    code, _ = run(capsys, "export", "--q", "5", "--matrix", "A33", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0
    assert lines[0] == "15 15"
    assert lines[1] == "2 2"


def test_chartable_csv(capsys):
    code, out = run(capsys, "chartable", "--q", "5", "--format", "csv")
    rows = out.out.splitlines()
    assert code == 0
    assert rows[1].startswith("character,D,")
    assert rows[2] == "1,1,1,1,1,1"


def test_chartable_json(capsys):
    _, out = run(capsys, "chartable", "--q", "7")
    table = json.loads(out.out)
    assert len(table["characters"]) == len(table["classes"])


def test_classify(capsys):
    _, out = run(capsys, "classify", "--q", "7", "--point", "1", "0", "0", "--json")
    assert json.loads(out.out)["class"] == "O"
    _, out = run(capsys, "classify", "--q", "7", "--element", "1", "1", "0", "1", "--json")
    assert json.loads(out.out)["class"] in {"F+", "F-"}
    with pytest.raises(SystemExit):
        main(["classify", "--q", "7", "--element", "1", "1", "1", "1"])


def test_group_and_blocks_commands(capsys):
    code, out = run(capsys, "group", "--q", "5", "--classes", "--parities")
    assert code == 0 and json.loads(out.out)
    code, out = run(capsys, "blocks", "--q", "5")
    assert code == 0 and json.loads(out.out)
