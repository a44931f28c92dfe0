import json
import os
import subprocess
import sys
from pathlib import Path

import pytest


ROOT = Path(__file__).resolve().parents[1]


def _run(*args: str) -> subprocess.CompletedProcess[str]:
	env = dict(os.environ, PYTHONPATH=str(ROOT))
	env.pop("QDUAL_PRECISION", None)
	return subprocess.run([sys.executable, "-m", "qdual", *args], capture_output=True, text=True,
						  check=False, cwd=ROOT, env=env)


def _records(stdout: str) -> list[dict]:
	return [json.loads(line) for line in stdout.splitlines() if line.strip()]


def test_list_text() -> None:
	proc = _run("list")
	assert proc.returncode == 0
	lines = proc.stdout.splitlines()
	assert lines[0].split() == ["id", "anchor", "domain"]
	assert len(lines) >= 22


def test_list_json() -> None:
	proc = _run("list", "--format", "json")
	assert proc.returncode == 0
	rows = json.loads(proc.stdout)
	assert len(rows) >= 20
	assert all(set(row) == {"id", "anchor", "domain"} for row in rows)
	assert "LQJ-DUAL-6W5" in {row["id"] for row in rows}


def test_unknown_flag_is_a_usage_error() -> None:
	proc = _run("verify", "LQJ-DUAL-6W5", "--bogus")
	assert proc.returncode == 2


def test_missing_subcommand_is_a_usage_error() -> None:
	assert _run().returncode == 2


def test_unknown_identity_suggests() -> None:
	proc = _run("verify", "LQJ-DUAL-6W")
	assert proc.returncode == 2
	assert "LQJ-DUAL-6W5" in proc.stderr
	assert proc.stdout == ""


def test_verify_json_record() -> None:
	proc = _run("verify", "LQJ-DUAL-6W5", "--trials", "5", "--seed", "1", "--format", "json")
	assert proc.returncode == 0, proc.stderr
	(record,) = _records(proc.stdout)
	assert record["id"] == "LQJ-DUAL-6W5"
	assert record["trials"] == record["passes"] == 5
	assert record["seed"] == 1
	assert record["precision"] == "standard"
	assert set(record) == {"id", "trials", "passes", "worst_rel_err", "worst_params", "seed",
						   "precision", "runtime_ms"}


def test_verify_several_ids_in_order() -> None:
	proc = _run("verify", "SUPP-SHIFT", "SUPP-QBINOM", "--trials", "3")
	assert proc.returncode == 0, proc.stderr
	assert [r["id"] for r in _records(proc.stdout)] == ["SUPP-SHIFT", "SUPP-QBINOM"]


def test_verify_csv() -> None:
	proc = _run("verify", "SUPP-SHIFT", "--trials", "3", "--format", "csv")
	assert proc.returncode == 0
	lines = proc.stdout.splitlines()
	assert lines[0] == "id,trials,passes,worst_rel_err,worst_params,seed,precision,runtime_ms"
	assert lines[1].startswith("SUPP-SHIFT,3,3,")


def test_impossible_tolerance_fails() -> None:
	proc = _run("verify", "SUPP-QBINOM", "--trials", "3", "--tol", "1e-30")
	assert proc.returncode == 1
	(record,) = _records(proc.stdout)
	assert record["passes"] < 3


def test_bad_domain_flag() -> None:
	proc = _run("verify", "INV-N", "--domain", "INV-N.q=0.8")
	assert proc.returncode == 2


def test_config_file(tmp_path) -> None:
	path = tmp_path / "run.json"
	path.write_text(json.dumps({"trials": 4, "seed": 11}), encoding="utf-8")
	proc = _run("verify", "SUPP-SHIFT", "--config", str(path))
	assert proc.returncode == 0
	(record,) = _records(proc.stdout)
	assert (record["trials"], record["seed"]) == (4, 11)


def test_bad_config_file(tmp_path) -> None:
	path = tmp_path / "run.json"
	path.write_text(json.dumps({"colour": "red"}), encoding="utf-8")
	proc = _run("verify", "SUPP-SHIFT", "--config", str(path))
	assert proc.returncode == 2
	assert "colour" in proc.stderr


def test_out_and_pdf(tmp_path) -> None:
	out = tmp_path / "records.jsonl"
	pdf = tmp_path / "summary.pdf"
	proc = _run("verify", "SUPP-SHIFT", "--trials", "3", "--out", str(out), "--pdf", str(pdf))
	assert proc.returncode == 0, proc.stderr
	assert proc.stdout == ""
	assert _records(out.read_text(encoding="utf-8"))[0]["id"] == "SUPP-SHIFT"
	assert pdf.read_bytes().startswith(b"%PDF")


def test_gram_text() -> None:
	proc = _run("gram", "little-qjacobi", "--size", "6", "--a", "0.3", "--b", "0.2", "--q", "0.5")
	assert proc.returncode == 0, proc.stderr
	assert "norm" in proc.stdout
	assert "max_offdiag_rel" in proc.stdout


def test_gram_size_one() -> None:
	proc = _run("gram", "little-qjacobi", "--size", "1", "--a", "0.3", "--b", "0.2", "--format", "json")
	assert proc.returncode == 0
	(record,) = _records(proc.stdout)
	assert record["size"] == 1
	assert record["max_offdiag_rel"] == 0.0


def test_gram_errors() -> None:
	assert _run("gram", "little-jacobi", "--a", "0.3", "--b", "0.2").returncode == 2
	assert _run("gram", "little-qjacobi", "--a", "0.3").returncode == 2
	assert _run("gram", "little-qjacobi", "--size", "0", "--a", "0.3", "--b", "0.2").returncode == 2
	assert _run("gram", "q-racah", "--size", "6", "--a", "0.3", "--b", "0.4", "--c", "0.35",
				"--N", "4").returncode == 2


@pytest.mark.parametrize("args", [
	("N", "--size", "25", "--a", "0.3", "--q", "0.5"),
	("M", "--a", "0.4"),
	("K", "--size", "15", "--a", "0.3", "--c", "0.2"),
	("fg-demo", "--size", "15", "--q", "0.6"),
])
def test_inverse_pairs(args) -> None:
	proc = _run("inverse", *args, "--format", "json")
	assert proc.returncode == 0, proc.stderr
	(record,) = _records(proc.stdout)
	assert record["kernel"] == args[0]
	assert max(record["forward_dev"], record["backward_dev"]) < 1e-8


def test_inverse_errors() -> None:
	assert _run("inverse", "M", "--size", "0").returncode == 2
	proc = _run("inverse", "Z")
	assert proc.returncode == 2
	assert "unknown kernel" in proc.stderr


@pytest.mark.slow
def test_verify_all() -> None:
	proc = _run("verify", "all", "--trials", "200", "--seed", "42")
	assert proc.returncode == 0, proc.stderr
	assert len(_records(proc.stdout)) >= 20
