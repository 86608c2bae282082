import json
import subprocess
import sys

import pytest

from simpleperms.cli import main
from simpleperms.sequences import CACHE_ENV, SequenceTable, s_sequence, save_table
from simpleperms.series import TruncSeries

SIMPLE = [1, 2, 0, 2, 6, 46, 338, 2926, 28146, 298526, 3454434, 43286526]


@pytest.fixture(autouse=True)
def isolated_cache(monkeypatch, tmp_path):
    cache = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(cache))
    return cache


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


class TestSeq:
    def test_tsv(self, capsys):
        code, out = run(capsys, "seq", "--name", "s", "--max", "12", "--format", "tsv", "--no-cache")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "n\ts"
        assert [int(line.split("\t")[1]) for line in lines[1:]] == SIMPLE

    def test_json_schema(self, capsys):
        code, doc = run_json(capsys, "seq", "--name", "com", "--max", "10", "--no-cache")
        assert code == 0
        assert set(doc) == {"name", "provenance", "values", "cross_checked_with"}
        assert doc["cross_checked_with"] == ["lagrange"]
        table = SequenceTable.from_json(doc)
        assert [abs(v) for v in table.as_list()] == [1, 2, 2, 4, 4, 48, 336, 2928, 28144, 298528]

    def test_fm(self, capsys):
        code, doc = run_json(capsys, "seq", "--name", "fm", "--m", "2", "--max", "8", "--no-cache")
        assert code == 0 and doc["name"] == "f2"
        assert [int(v) for _, v in doc["values"]] == [1, 0, 0, 2, 14, 90, 646, 5242]

    def test_fm_needs_m(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["seq", "--name", "fm", "--max", "5", "--no-cache"])
        assert info.value.code == 2

    def test_i(self, capsys):
        code, doc = run_json(capsys, "seq", "--name", "i", "--max", "6", "--no-cache")
        assert [int(v) for _, v in doc["values"]] == [1, 1, 3, 13, 71, 461]

    def test_cache_written_and_reused(self, capsys, isolated_cache):
        run(capsys, "seq", "--name", "s", "--max", "30")
        assert (isolated_cache / "s.json").exists()
        code, doc = run_json(capsys, "seq", "--name", "s", "--max", "12")
        assert code == 0 and doc["cross_checked_with"] == ["relation (on load)"]
        assert [int(v) for _, v in doc["values"]] == SIMPLE

    def test_corrupt_cache_fails(self, capsys, isolated_cache):
        bad = s_sequence(15)
        bad.values[9] = (10, 1)
        save_table(bad)
        code, _ = run(capsys, "seq", "--name", "s", "--max", "12")
        assert code == 1

    def test_writes_only_to_cache(self, capsys, isolated_cache, tmp_path, monkeypatch):
        work = tmp_path / "work"
        work.mkdir()
        monkeypatch.chdir(work)
        run(capsys, "seq", "--name", "com", "--max", "20")
        assert list(work.iterdir()) == []
        assert [p.name for p in isolated_cache.iterdir()] == ["com.json"]


class TestPermCommands:
    def test_simple_true(self, capsys):
        assert run(capsys, "simple", "58317462") == (0, "true\n")

    def test_simple_false_with_witness(self, capsys):
        code, doc = run_json(capsys, "simple", "123")
        assert code == 0 and doc["simple"] is False
        w = doc["witness"]
        assert w["end"] - w["start"] + 1 == 2
        assert w["hi"] - w["lo"] == w["end"] - w["start"]

    def test_decompose(self, capsys):
        assert run(capsys, "decompose", "67183524") == (0, "(3142)[12, 1, 1, 2413]\n")

    def test_decompose_json(self, capsys):
        _, doc = run_json(capsys, "decompose", "67183524")
        assert doc == {"perm": "67183524", "skeleton": "3142", "parts": ["12", "1", "1", "2413"]}

    def test_separated_input(self, capsys):
        code, out = run(capsys, "simple", "10 2 3 4 5 6 7 8 9 1")
        assert code == 0 and out.startswith("false")

    def test_enumerate(self, capsys):
        code, out = run(capsys, "enumerate", "--n", "5")
        assert out.split() == ["24153", "25314", "31524", "35142", "41352", "42513"]

    def test_enumerate_json(self, capsys):
        _, doc = run_json(capsys, "enumerate", "--n", "4")
        assert doc == {"n": 4, "perms": ["2413", "3142"]}

    def test_random(self, capsys):
        _, a = run_json(capsys, "random", "--n", "9", "--seed", "3")
        _, b = run_json(capsys, "random", "--n", "9", "--seed", "3")
        assert a == b and len(a["perm"]) == 9

    def test_marked(self, capsys):
        code, doc = run_json(capsys, "marked", "345612", "--marks", "1-2;2-3;3-4;5-6")
        assert code == 0
        assert doc["skeleton"] == "21" and doc["parts"] == ["1234", "12"]
        assert doc["mark_count"] == 4 == doc["r"] + doc["l"] - doc["s"]

    def test_marked_text(self, capsys):
        code, out = run(capsys, "marked", "5672413", "--marks", "1-2;4-7")
        assert code == 0
        # representatives 5, 7, 1 have the pattern 231
        assert out.splitlines()[0] == "(231; 12, 1, 2413)"


class TestUsageErrors:
    @pytest.mark.parametrize("argv", [
        ["simple", "1224"],
        ["simple", ""],
        ["decompose", "abc"],
        ["marked", "123", "--marks", "1-3"],
        ["marked", "123", "--marks", "2-9"],
        ["marked", "123", "--marks", "x"],
        ["random", "--n", "3"],
        ["enumerate", "--n", "12"],
        ["seq", "--name", "s", "--max", "0"],
        ["seq", "--name", "q", "--max", "3"],
        ["congruence", "--scan-prime", "4"],
        ["identities", "--order", "-1"],
        ["verify", "--jobs", "0"],
        [],
    ])
    def test_exit_2(self, argv, capsys):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


class TestChecks:
    def test_identities(self, capsys):
        code, doc = run_json(capsys, "identities", "--order", "30")
        assert code == 0 and doc["order"] == 30 and len(doc["passed"]) == 9

    def test_congruence(self, capsys):
        code, doc = run_json(capsys, "congruence", "--max", "40")
        assert code == 0
        assert [r["valuation"] for r in doc["valuations"][:12]] == [0, 1, 1, 2, 2, 4, 4, 4, 4, 5, 5, 15]
        assert all(c["ok"] for c in doc["congruences"])

    def test_scan(self, capsys):
        code, doc = run_json(capsys, "congruence", "--max", "8", "--scan-prime", "3")
        assert code == 0 and doc["p"] == 3 and len(doc["rows"]) == 8

    def test_asymptotics(self, capsys):
        code, doc = run_json(capsys, "asymptotics", "--max", "24")
        assert code == 0
        assert doc["headline"]["relative_error"] == "3.89039e-3"
        assert set(doc["tables"]) == {"simple", "kaplansky_f2", "f4"}
        assert doc["tables"]["simple"][0]["n"] == 4

    def test_asymptotics_tsv(self, capsys):
        code, out = run(capsys, "asymptotics", "--max", "12", "--format", "tsv")
        lines = out.splitlines()
        assert lines[0] == "# simple" and lines[1].startswith("n\texact")


def test_verify_deterministic_across_jobs():
    outs = []
    for jobs in ("1", "4"):
        proc = subprocess.run([sys.executable, "-m", "simpleperms", "verify", "--jobs", jobs],
                              capture_output=True, text=True, timeout=300)
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
    lines = outs[0].splitlines()
    assert len(lines) == 12 and all(line.startswith("PASS\t") for line in lines)


def test_entry_point_usage_exit_code():
    proc = subprocess.run([sys.executable, "-m", "simpleperms", "simple", "1 1"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 2 and "error" in proc.stderr


def test_series_json_document():
    # the documented series schema accepts what the library emits
    doc = TruncSeries([0, 1, -2, 2], 3).to_json("com")
    assert doc == {"name": "com", "order": 3, "coeffs": ["0", "1", "-2", "2"]}
