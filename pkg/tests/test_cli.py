import json


from loopforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_construct_round_trip(tmp_path, capsys):
    path = tmp_path / "c6.json"
    code = main(["construct", "--kind", "cyclic:6", "-o", str(path)])
    assert code == 0
    first = path.read_bytes()
    doc = json.loads(first)
    assert doc["order"] == 6
    assert doc["elements"][0] == "e"
    assert doc["table"][0] == list(range(6))
    # load -> re-serialise must be byte identical
    code, out = run(capsys, "check", "--loop", str(path), "--property", "associative")
    assert code == 0
    path2 = tmp_path / "again.json"
    main(["construct", "--kind", "cyclic:6", "-o", str(path2)])
    assert path2.read_bytes() == first


def test_construct_paige2(tmp_path):
    path = tmp_path / "m2.json"
    assert main(["construct", "--kind", "paige:2", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["order"] == 120


def test_check_violation_exit_code(tmp_path, capsys):
    path = tmp_path / "m2.json"
    main(["construct", "--kind", "paige:2", "-o", str(path)])
    code, out = run(capsys, "check", "--loop", str(path), "--property", "associative")
    assert code == 1
    doc = json.loads(out)
    assert doc["ok"] is False
    assert doc["witness"] is not None and len(doc["witness"]) == 3


def test_check_pass_exit_code(capsys):
    code, out = run(capsys, "check", "--loop", "cml81", "--property", "moufang")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True and doc["mode"] == "exhaustive"


def test_check_identity44(capsys):
    code, out = run(capsys, "check", "--loop", "cml81", "--property", "identity44",
                    "--samples", "25", "--seed", "7")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] and doc["seed"] == 7 and doc["samples"] == 25


def test_series_json(capsys):
    code, out = run(capsys, "series", "--loop", "cml81", "--kind", "lower")
    assert code == 0
    doc = json.loads(out)
    assert doc["orders"] == [81, 3, 1]
    assert doc["nilpotency_class"] == 2


def test_algebra_report_schema(capsys):
    code, out = run(capsys, "algebra", "--loop", "chein12", "--field", "gf:7",
                    "--samples", "500")
    assert code == 0
    doc = json.loads(out)
    for key in ("dim", "ideal_dim", "unit_in_ideal", "nilpotency_index", "alternative"):
        assert key in doc
    assert doc["dim"] == 4 and doc["ideal_dim"] == 8
    assert doc["unit_in_ideal"] is False
    assert doc["alternative"]["ok"] is True
    assert doc["alternative"]["mode"] == "sampled"
    assert doc["alternative"]["seed"] is not None


def test_embed_verdict_schema(capsys):
    code, out = run(capsys, "embed", "--loop", "cml81", "--field", "gf:3")
    assert code == 0
    doc = json.loads(out)
    assert doc["outcome"] == "embeds"
    assert set(doc["checks"]) >= {"r1", "r2", "r3"}
    assert doc["seed"] == 0xA17E41


def test_radical_json(capsys):
    code, out = run(capsys, "radical", "--loop", "chein12", "--field", "gf:7")
    assert code == 0
    doc = json.loads(out)
    assert doc["in_class_S"] is True
    assert doc["radical_order"] == 12


def test_report_json(capsys):
    code, out = run(capsys, "report", "--loop", "s3", "--field", "gf:7")
    assert code == 0
    doc = json.loads(out)
    assert doc["checks"]["dim_cross_check"] is True
    assert doc["quotient_dim"] == 1


def test_usage_errors(capsys, tmp_path):
    assert main(["frobnicate"]) == 2
    assert main(["check", "--loop", "cml81", "--property", "qwerty"]) == 2
    assert main(["check", "--loop", "nonexistent_loop_name", "--property", "moufang"]) == 2
    assert main(["embed", "--loop", "cml81", "--field", "gf:6"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"order": 2, "elements": ["a","b"], "table": [[1,0],[0,1]]}')
    assert main(["check", "--loop", str(bad), "--property", "moufang"]) == 2


def test_byte_stable_reports(capsys):
    code, first = run(capsys, "embed", "--loop", "cml81", "--field", "gf:3")
    code, second = run(capsys, "embed", "--loop", "cml81", "--field", "gf:3")
    assert first == second
