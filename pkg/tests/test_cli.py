import json

from majorbit import cli
from majorbit.selftest import CriterionResult

CONST5 = {
    "space": {"atoms": [], "diffuse_mass": "1"},
    "atoms": {},
    "diffuse": [{"value": "5", "mass": "1"}],
}

FLAT = {
    "space": {
        "atoms": [{"id": "a", "weight": "1/2"}, {"id": "b", "weight": "1/2"}],
        "diffuse_mass": "0",
    },
    "atoms": {"a": "2", "b": "2"},
    "diffuse": [],
}

PEAK = {
    "space": {
        "atoms": [{"id": "a", "weight": "1/2"}, {"id": "b", "weight": "1/2"}],
        "diffuse_mass": "0",
    },
    "atoms": {"a": "3", "b": "1"},
    "diffuse": [],
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_rearrange_constant(tmp_path, capsys):
    path = write(tmp_path, "f.json", CONST5)
    code, doc = run(capsys, ["rearrange", "-f", path])
    assert code == 0
    assert doc == {"steps": [{"value": "5", "length": "1"}]}


def test_extreme_with_witness(tmp_path, capsys):
    x = write(tmp_path, "x.json", FLAT)
    y = write(tmp_path, "y.json", PEAK)
    code, doc = run(capsys, ["extreme", "-x", x, "-y", y, "--witness"])
    assert code == 0
    assert doc["verdict"] == "not_extreme"
    assert doc["witness"]["delta"] == "1/2"
    assert doc["witness"]["case"] == "split_level"

    code, doc = run(capsys, ["extreme", "-x", x, "-y", y])
    assert "witness" not in doc


def test_malformed_ratstr_exits_2(tmp_path, capsys):
    bad = dict(PEAK, atoms={"a": "0.5", "b": "1"})
    x = write(tmp_path, "x.json", bad)
    y = write(tmp_path, "y.json", PEAK)
    code, doc = run(capsys, ["extreme", "-x", x, "-y", y])
    assert code == 2
    assert doc["error"] == "SchemaError"


def test_missing_file_exits_2(tmp_path, capsys):
    y = write(tmp_path, "y.json", PEAK)
    code, doc = run(capsys, ["extreme", "-x", str(tmp_path / "nope.json"), "-y", y])
    assert code == 2
    assert doc["error"] == "SchemaError"


def test_witness_on_extreme_point_exits_2(tmp_path, capsys):
    x = write(tmp_path, "x.json", PEAK)
    y = write(tmp_path, "y.json", PEAK)
    code, doc = run(capsys, ["witness", "-x", x, "-y", y])
    assert code == 2
    assert doc["error"] == "CriterionSatisfied"


def test_unknown_command_exits_2(capsys):
    code, doc = run(capsys, ["frobnicate"])
    assert code == 2
    assert doc["error"] == "SchemaError"


def test_majorise_and_oracle_and_enumerate(tmp_path, capsys):
    x = write(tmp_path, "x.json", FLAT)
    y = write(tmp_path, "y.json", PEAK)
    code, doc = run(capsys, ["majorise", "-x", x, "-y", y])
    assert code == 0 and doc["holds"] is True
    code, doc = run(capsys, ["submajorise", "-x", x, "-y", y])
    assert code == 0 and doc["holds"] is True
    code, doc = run(capsys, ["oracle", "-x", x, "-y", y])
    assert code == 0 and doc["extreme"] is False
    code, doc = run(capsys, ["enumerate", "-y", y])
    assert code == 0
    assert [entry["atoms"] for entry in doc] == [
        {"a": "1", "b": "3"},
        {"a": "3", "b": "1"},
    ]


def test_sample_deterministic_stdout(tmp_path, capsys):
    y = write(tmp_path, "y.json", PEAK)
    code1 = cli.main(["sample", "-y", y, "--seed", "42"])
    out1 = capsys.readouterr().out
    code2 = cli.main(["sample", "-y", y, "--seed", "42"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_normalize_flag(tmp_path, capsys):
    doc = {
        "space": {
            "atoms": [{"id": "a", "weight": "1"}, {"id": "b", "weight": "1"}],
            "diffuse_mass": "0",
        },
        "atoms": {"a": "3", "b": "1"},
        "diffuse": [],
    }
    path = write(tmp_path, "f.json", doc)
    code, out = run(capsys, ["rearrange", "-f", path])
    assert code == 2 and out["error"] == "NormalizationError"
    code, out = run(capsys, ["rearrange", "-f", path, "--normalize"])
    assert code == 0
    assert out["steps"] == [
        {"value": "3", "length": "1/2"},
        {"value": "1", "length": "1/2"},
    ]


def test_matrix_commands(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"n": 2, "re": [[2.0, 1.0], [1.0, 2.0]]})
    code, doc = run(capsys, ["matrix-eig", "-f", m, "--snap", "1000000"])
    assert code == 0
    assert doc["steps"][0]["value"] == "3"

    x = write(tmp_path, "xd.json", {"n": 2, "re": [[2.0, 0.0], [0.0, 2.0]]})
    code, doc = run(capsys, ["matrix-majorise", "-x", x, "-y", m])
    assert code == 0 and doc["holds"] is True
    code, doc = run(capsys, ["matrix-extreme", "-x", x, "-y", m])
    assert code == 0 and doc["extreme"] is False

    ds = write(tmp_path, "s.json", {"n": 2, "re": [[0.5, 0.5], [0.5, 0.5]]})
    code, doc = run(capsys, ["birkhoff", "-f", ds])
    assert code == 0
    assert doc["residual"] <= 1e-10
    assert len(doc["terms"]) == 2

    xv = write(tmp_path, "xv.json", ["2", "2"])
    yv = write(tmp_path, "yv.json", ["3", "1"])
    code, doc = run(capsys, ["ttransform", "-x", xv, "-y", yv])
    assert code == 0
    assert doc["matrix"] == [[0.5, 0.5], [0.5, 0.5]]


def test_suite_command(capsys):
    code, doc = run(capsys, ["suite", "--seed", "7", "--trials", "20", "--dim", "3"])
    assert code == 0
    assert doc["passed"] is True


def test_selftest_zero_trials_vacuous(capsys):
    code, doc = run(capsys, ["selftest", "--trials", "0"])
    assert code == 0
    assert doc["passed"] is True
    assert all("0 trials" in c["note"] for c in doc["criteria"])


def test_selftest_small_run(capsys):
    code, doc = run(capsys, ["selftest", "--seed", "1", "--trials", "40"])
    assert code == 0
    assert doc["passed"] is True


def test_selftest_detects_corruption(capsys, monkeypatch):
    """Negative control: a failing criterion turns the exit code nonzero."""
    from majorbit import selftest as st

    def broken(seed, trials=1):
        return CriterionResult(1, "broken", 1, 1, 0.0)

    monkeypatch.setattr(st, "CRITERIA", [("broken", broken, 1000)])
    code, doc = run(capsys, ["selftest", "--trials", "1000"])
    assert code == 1
    assert doc["passed"] is False


def test_internal_error_exits_3(tmp_path, capsys, monkeypatch):
    def explode(f):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "rearrange", explode)
    path = write(tmp_path, "f.json", CONST5)
    code, out = run(capsys, ["rearrange", "-f", path])
    assert code == 3
    assert out["error"] == "InternalError"
    assert "boom" in out["detail"]


def test_json_indent(tmp_path, capsys):
    path = write(tmp_path, "f.json", CONST5)
    code = cli.main(["rearrange", "-f", path, "--json-indent", "2"])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("{\n  ")
