import json
import subprocess
import sys

import pytest

from graphentropy import __version__

RUN = [sys.executable, "-m", "graphentropy.cli"]


def invoke(*args, stdin: str | None = None):
    proc = subprocess.run(
        RUN + list(args), input=stdin, capture_output=True, text=True, timeout=120
    )
    return proc


def write_graph(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture
def c5_file(tmp_path):
    return write_graph(tmp_path, "c5.g6", "DLo")


def test_bounds_report(c5_file):
    proc = invoke("bounds", "--graph", c5_file)
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["command"] == "bounds"
    assert report["version"] == __version__
    result = report["result"]
    assert result["nu"] == 2
    assert result["cc"] == 3
    assert result["kappa_f"] == "5/2"
    assert result["tau"] == 3
    assert result["theta"] == "5/2"
    assert result["bracket"] == {"lower": "5/2", "upper": "5/2", "exact": True}
    assert result["witnesses"]["upper"]["tag"] == "shannon-lp"


def test_bounds_byte_identical(c5_file):
    first = invoke("bounds", "--graph", c5_file)
    second = invoke("bounds", "--graph", c5_file)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_stdin_dash():
    proc = invoke("bounds", "--graph", "-", stdin="DLo")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["theta"] == "5/2"


def test_guess_k3(tmp_path):
    path = write_graph(tmp_path, "k3.el", "3; 1-2,2-3,1-3")
    proc = invoke("guess", "--graph", path, "--q", "2")
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["code_size"] == 4
    assert result["guessing_number"] == "log_2(4)"
    assert result["optimal"] is True
    assert len(result["code"]) == 4
    assert all(len(w) == 3 for w in result["code"])


def test_reduce_schema(tmp_path, c5_file):
    proc = invoke("reduce", "--graph", c5_file)
    assert json.loads(proc.stdout)["result"] == {
        "reducible": False, "S": None, "matching": None, "remainder_graph6": None,
    }

    pendant = write_graph(tmp_path, "pendant.el", "6; 1-2,2-3,3-4,4-5,5-1,1-6")
    proc = invoke("reduce", "--graph", pendant)
    result = json.loads(proc.stdout)["result"]
    assert result["reducible"] is True
    assert result["S"] == [0]
    assert result["matching"] == [[5, 0]]
    assert result["remainder_graph6"]


def test_minimal_check(c5_file):
    proc = invoke("minimal-check", "--graph", c5_file)
    result = json.loads(proc.stdout)["result"]
    assert result["candidate"] is True
    assert result["comparison"].startswith("|c(M)|")


def test_survey_json():
    proc = invoke("survey", "--n", "4")
    assert proc.returncode == 0
    result = json.loads(proc.stdout)["result"]
    assert result["classes"] == 18
    assert result["unresolved"] == []
    assert "5/2" not in result["collapsed_values"]
    record = result["records"][0]
    assert set(record) == {"graph6", "n", "connected", "lower", "upper", "exact"}


def test_verify_exit_codes():
    proc = invoke("verify", "--suite", "wheel")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["ok"] is True


def test_lp_dump_shannon_c5(c5_file):
    proc = invoke("lp-dump", "--graph", c5_file, "--which", "shannon")
    assert proc.returncode == 0
    names = {tok for line in proc.stdout.splitlines()
             for tok in line.split() if tok.startswith("h_")}
    assert len(names) == 32
    assert "h_empty" in names
    assert proc.stdout.strip().endswith("End")


def test_lp_dump_shannon_g1(tmp_path):
    path = write_graph(tmp_path, "g1.el", "7; 1-2,2-3,3-4,4-5,5-1,6-7,6-1,6-2,7-4")
    proc = invoke("lp-dump", "--graph", path, "--which", "shannon")
    names = {tok for line in proc.stdout.splitlines()
             for tok in line.split() if tok.startswith("h_")}
    assert len(names) == 128


def test_lp_dump_cover_k2(tmp_path):
    path = write_graph(tmp_path, "k2.el", "2; 1-2")
    proc = invoke("lp-dump", "--graph", path, "--which", "fractional-cover")
    assert proc.returncode == 0
    body = proc.stdout
    assert "w_0" in body and "w_1" not in body
    assert " obj: w_0" in body


def test_usage_errors():
    assert invoke("bounds").returncode == 2
    assert invoke("nonsense").returncode == 2
    assert invoke("bounds", "--graph", "/does/not/exist").returncode == 2


def test_cap_violation(tmp_path):
    path = write_graph(tmp_path, "big.el",
                       "13; " + ",".join(f"{v}-{v + 1}" for v in range(1, 13)))
    proc = invoke("guess", "--graph", path, "--q", "2")
    assert proc.returncode == 2
    assert "cap" in proc.stderr


def test_version_flag():
    proc = invoke("--version")
    assert proc.returncode == 0
    assert __version__ in proc.stdout
