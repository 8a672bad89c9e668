import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from tbf.cli import JobSpec, main, run_corpus, run_job
from tbf.errors import InputError

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_finite_tbft(capsys):
    code, out, _ = run(capsys, "finite", "--group", SAMPLES / "s3.json", "--endo", SAMPLES / "id.json", "--tbft", 3,
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    tbft = next(r for r in data["records"] if r["command"] == "tbft")
    assert [row["R"] for row in tbft["rows"]] == [3, 3, 3]
    assert all(row["pass"] for row in tbft["rows"])


def test_table_output(capsys):
    code, out, _ = run(capsys, "finite", "--group", SAMPLES / "s3.json", "--endo", SAMPLES / "s3_collapse.json")
    assert code == 0 and "R = 2" in out


def test_abelian_sequence_csv(capsys):
    code, out, _ = run(capsys, "abelian", "--matrix", "[[2]]", "--sequence", 5, "--congruence", 5, "--format", "csv")
    assert code == 0
    assert "5,31,30,0,30,6" in out


def test_abelian_infinite_term_is_input_error(capsys):
    code, out, err = run(capsys, "abelian", "--matrix", "[[1]]", "--congruence", 3, "--format", "json")
    assert code == 2
    assert json.loads(out)["error"]["error"] == "InfiniteTerm"


def test_extension_certify(capsys, tmp_path):
    target = tmp_path / "cert.json"
    code, _, _ = run(capsys, "extension", "--group", SAMPLES / "neg_2I.json", "--certify", "--sequence", 4,
                     "--format", "json", "--out", target)
    assert code == 0
    data = json.loads(target.read_text())
    seq = next(r for r in data["records"] if r["command"] == "sequence")
    assert seq["values"] == [6, 18, 66, 258]
    cert = next(r for r in data["records"] if r["command"] == "certify")
    cert = cert["certificates"][0]
    assert cert["certified"] and cert["quotient_order"] == 18


def test_broken_endo_exit_code(capsys):
    code, out, err = run(capsys, "finite", "--group", SAMPLES / "s3.json", "--endo", SAMPLES / "broken.json")
    assert code == 2
    assert "NotAHomomorphism" in err


def test_bad_json_literal(capsys):
    code, out, _ = run(capsys, "finite", "--group", '{"library": ', "--format", "json")
    assert code == 2
    assert json.loads(out)["error"]["error"] == "ParseError"


def test_missing_group(capsys):
    code, out, _ = run(capsys, "finite", "--tbft", 1)
    assert code == 2


def test_job_spec_validation():
    with pytest.raises(InputError):
        JobSpec(kind="abelian", matrix="[[2]]", commands=[("tbft", 2)])
    with pytest.raises(InputError):
        JobSpec(kind="nope")


def test_expectations_are_checked():
    job = JobSpec.from_json({"kind": "abelian", "matrix": [[2]], "commands": [{"sequence": 3}],
                             "expect": {"sequence.values": [1, 3, 7]}})
    assert run_job(job).ok
    job = JobSpec.from_json({"kind": "abelian", "matrix": [[2]], "commands": [{"sequence": 3}],
                             "expect": {"sequence.values": [1, 3, 8]}})
    res = run_job(job)
    assert not res.ok and res.exit_code == 1


def test_bundled_corpus_smoke():
    results, criteria, notes = run_corpus("smoke")
    assert results and all(r.ok for r in results), [r.to_json() for r in results if not r.ok]
    assert len(criteria) == 8 and all(c.passed for c in criteria)
    assert not notes


def test_empty_corpus_dir(capsys, tmp_path):
    code, out, err = run(capsys, "corpus", "--corpus-dir", tmp_path)
    assert code == 0
    assert "warning" in err


def test_corpus_dir_missing(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "--corpus-dir", tmp_path / "nowhere")
    assert code == 2


def test_smoke_corpus_under_ten_seconds():
    # fresh interpreter, so no warm caches from other tests
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "tbf.cli", "corpus", "--suite", "smoke", "--format", "json"],
                          capture_output=True, text=True, timeout=120)
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["ok"]
    assert elapsed < 10, elapsed
