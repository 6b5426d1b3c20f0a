import io
import json
import os
import subprocess
import sys

import pytest

from expuiseux.cli import run

SPARSE_N = "elems:0,18,19,25,27;cond:36"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_lengths_json():
    code, out, _ = call("lengths", "--r", "2/3", "--N", SPARSE_N, "--element", "2*r^18+4*r^25", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["schema"] == "1" and rec["op"] == "lengths"
    assert rec["result"]["lengths"] == [6, 7, 11, 12] and rec["result"]["complete"] is True
    assert rec["caps"]["exp_cap"] == 64


def test_catenary_text():
    assert call("catenary", "--r", "2/3", "--N", "gens:1") == (0, "3\n", "")


def test_classify_non_atomic():
    code, out, _ = call("classify", "--r", "1/2", "--N", "gens:1", "--json")
    assert code == 0 and json.loads(out)["result"]["atomic"] is False


@pytest.mark.parametrize("argv", [
    ("lengths", "--r", "2/3", "--element", "1/3"),
    ("lengths", "--r", "1/2", "--element", "3"),
    ("omega", "--r", "1/2"),
])
def test_domain_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_domain_error_json():
    code, out, _ = call("member", "--r", "1/2", "--element", "1", "--json")
    assert code == 2 and json.loads(out)["error"] == "NotAtomic"


@pytest.mark.parametrize("argv", [
    ("lengths", "--r", "x/3", "--element", "1"),
    ("lengths", "--r", "2/3", "--element", "2*r^q"),
    ("lengths", "--r", "2/3"),
    ("lengths", "--r", "2/3", "--N", "gens:"),
    ("frobnicate",),
    ("verify", "--pool", "2/3"),
])
def test_parse_errors_exit_1(argv):
    code, _, err = call(*argv)
    assert code == 1 and err


def test_parse_error_reports_position():
    _, _, err = call("lengths", "--r", "2/3", "--N", SPARSE_N, "--element", "2*r^18+r^20")
    assert "position 7" in err


def test_factorize_and_member():
    code, out, _ = call("factorize", "--r", "5/2", "--element", "5", "--json")
    res = json.loads(out)["result"]
    assert code == 0 and res["count"] == 2 and res["complete"]
    code, out, _ = call("member", "--r", "2/3", "--element", "2")
    assert code == 0 and "no max-length factorization" in out


def test_cache_hits_are_identical(tmp_path, monkeypatch):
    path = tmp_path / "cache.json"
    monkeypatch.setenv("PUISEUX_CACHE", str(path))
    argv = ("lengths", "--r", "2/3", "--N", SPARSE_N, "--element", "2*r^18+4*r^25", "--json")
    cold = call(*argv)
    assert path.exists()
    warm = call(*argv)
    assert cold == warm
    assert len(json.loads(path.read_text())) == 1


def test_corrupt_cache_is_ignored(tmp_path, monkeypatch):
    path = tmp_path / "cache.json"
    path.write_text("{not json")
    monkeypatch.setenv("PUISEUX_CACHE", str(path))
    code, out, err = call("catenary", "--r", "5/2")
    assert code == 0 and out == "5\n" and "warning" in err
    assert json.loads(path.read_text())  # rewritten cleanly


def test_cache_flag_without_env(tmp_path, monkeypatch):
    monkeypatch.delenv("PUISEUX_CACHE", raising=False)
    path = tmp_path / "c.json"
    assert call("catenary", "--r", "5/2", "--cache", str(path))[0] == 0
    assert path.exists()


def test_verify_restricted_pool():
    code, out, _ = call("verify", "--pool", "5/2@gens:1")
    assert code == 0
    assert "FAIL" not in out
    assert "observed [3]" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "expuiseux", "catenary", "--r", "2/3"],
                          capture_output=True, text=True, env={**os.environ, "PUISEUX_CACHE": ""})
    assert proc.returncode == 0 and proc.stdout == "3\n"


def test_delta_record_has_witnesses():
    code, out, _ = call("delta", "--r", "2/3", "--N", "elems:0;cond:2", "--index-cap", "8", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["result"]["delta_of_samples"] == [1, 5]
    assert rec["witnesses"]["max_attained_at"]["element"] == {"num": "4", "den": "1"}
    assert rec["witnesses"]["min_attained_at"]["verified"] is True


def test_json_output_round_trips():
    from expuiseux.serialize import decode, render
    _, out, _ = call("factorize", "--r", "7/3", "--N", "gens:3,4,5", "--element", "343", "--json")
    assert render(decode(json.loads(out))) + "\n" == out
