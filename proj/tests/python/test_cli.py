"""End-to-end CLI tests; CATBELL_BIN points at the built binary."""

import json
import math
import os
import subprocess

import pytest

BIN = os.environ.get("CATBELL_BIN", "catbell")


def run(*args, **kwargs):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kwargs)


def test_eval_vacuum_boundary():
    r = run("eval", "--sigma", "0", "--eta", "0", "--phi", "0",
            "--z", "0", "--zp", "0", "--w", "0", "--wp", "0")
    assert r.returncode == 0
    assert "CHSH     = 2" in r.stdout
    assert "classification: classical" in r.stdout


def test_eval_degenerate_state_exits_2():
    r = run("eval", "--sigma", "0", "--eta", "0", "--phi", str(math.pi),
            "--z", "0", "--zp", "0", "--w", "0", "--wp", "0")
    assert r.returncode == 2
    assert "degenerate" in r.stderr.lower()


def test_eval_parse_error_names_the_key():
    r = run("eval", "--sigma", "abc", "--eta", "0", "--z", "0", "--zp", "0",
            "--w", "0", "--wp", "0")
    assert r.returncode == 1
    assert "sigma" in r.stderr


def test_optimize_then_eval_round_trip(tmp_path):
    out = tmp_path / "result.json"
    r = run("optimize", "--budget", "60000", "--restarts", "27", "--seed", "1",
            "--out", str(out))
    assert r.returncode == 0, r.stderr
    result = json.loads(out.read_text())
    assert result["best_value"] > 2.05

    def c(v):
        return f"({v['re']},{v['im']})"

    s, st = result["settings"], result["state"]
    r2 = run("eval", "--sigma", c(st["sigma"]), "--eta", c(st["eta"]),
             "--phi", repr(st["phi"]),
             "--z", c(s["z"]), "--zp", c(s["z_prime"]),
             "--w", c(s["w"]), "--wp", c(s["w_prime"]))
    assert r2.returncode == 3  # violation is signalled through the exit code
    chsh_line = next(l for l in r2.stdout.splitlines() if l.startswith("CHSH"))
    assert abs(abs(float(chsh_line.split("=")[1])) - result["best_value"]) < 1e-9


def test_scan_paper_setting_is_classical(tmp_path):
    out = tmp_path / "scan.csv"
    r = run("scan", "--paper-setting", "--steps", "10", "--out", str(out))
    assert r.returncode == 0
    assert "max |CHSH|" in r.stdout
    assert "cannot exceed 2" in r.stdout  # degeneracy note
    lines = out.read_text().splitlines()
    assert lines[0] == "alpha,omega,E_zw,E_zpw,E_zwp,E_zpwp,chsh,classification"
    assert len(lines) == 101
    assert all(line.endswith("classical") for line in lines[1:])


def test_scan_logs_skipped_degenerate_points(tmp_path):
    out = tmp_path / "scan.csv"
    r = run("scan", "--alpha-range", "-0.5:0.5", "--omega-range", "-0.5:0.5",
            "--steps", "3", "--phi", str(math.pi), "--z", "1", "--zp", "1+i",
            "--w", "1", "--wp", "1-0.5i", "--out", str(out))
    assert r.returncode == 0
    assert "skipped degenerate grid point" in r.stderr
    assert len(out.read_text().splitlines()) == 9  # header + 8 records


def test_scan_all_degenerate_grid_exits_2(tmp_path):
    r = run("scan", "--alpha-range", "0:1e-9", "--omega-range", "0:1e-9",
            "--steps", "2", "--phi", str(math.pi), "--z", "1", "--zp", "1",
            "--w", "1", "--wp", "1", "--out", str(tmp_path / "scan.csv"))
    assert r.returncode == 2


def test_scan_deterministic_across_workers(tmp_path):
    outs = []
    for name, workers in [("a.csv", "1"), ("b.csv", "3")]:
        out = tmp_path / name
        r = run("scan", "--alpha-range", "0.2:2.0", "--omega-range", "0.2:2.0",
                "--steps", "8", "--phi", str(math.pi), "--z", "0.19055808",
                "--zp", "-0.61154274", "--w", "0.19055808", "--wp", "-0.61154274",
                "--out", str(out), "--workers", workers)
        assert r.returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_scan_json_format(tmp_path):
    out = tmp_path / "scan.json"
    r = run("scan", "--paper-setting", "--steps", "4", "--format", "json",
            "--out", str(out))
    assert r.returncode == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 16
    assert set(rows[0]) == {"alpha", "omega", "E_zw", "E_zpw", "E_zwp", "E_zpwp",
                            "chsh", "classification"}


def test_verify_quick_pass():
    r = run("verify", "--samples", "4", "--seed", "3")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "correlator-equivalence" in r.stdout
    assert "all checks passed" in r.stdout
    assert "FAIL" not in r.stdout


def test_verify_cutoff_too_small_exits_4():
    r = run("verify", "--cutoff", "8", "--samples", "4")
    assert r.returncode == 4
    assert "CutoffTooSmall" in r.stderr


def test_verify_literal_vacuum_mode_is_informational():
    r = run("verify", "--samples", "2", "--seed", "5", "--literal-f")
    assert r.returncode == 0
    info = next(l for l in r.stdout.splitlines()
                if l.startswith("info  joint-vacuum-ab-commutator"))
    assert float(info.split(":")[1]) > 0.1


def test_optimize_deterministic_json(tmp_path):
    blobs = []
    for name, workers in [("r1.json", "1"), ("r2.json", "1"), ("r3.json", "2")]:
        out = tmp_path / name
        r = run("optimize", "--budget", "4000", "--restarts", "4", "--seed", "7",
                "--out", str(out), "--workers", workers)
        assert r.returncode == 0
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_optimize_fixed_vacuum_state(tmp_path):
    out = tmp_path / "vac.json"
    r = run("optimize", "--sigma", "0", "--eta", "0", "--phi", "0",
            "--budget", "4000", "--restarts", "4", "--out", str(out))
    assert r.returncode == 0
    result = json.loads(out.read_text())
    assert abs(result["best_value"] - 2.0) < 1e-6


def test_dump_config_round_trip(tmp_path):
    args = ["scan", "--alpha-range", "0.2:2.0", "--omega-range", "0.3:1.5",
            "--steps", "7,9", "--phi", str(math.pi), "--z", "1+0.5i", "--zp", "-1",
            "--w", "(0.25, -0.5)", "--wp", "2i", "--format", "csv"]
    first = run(*args, "--dump-config")
    assert first.returncode == 0
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(first.stdout)
    second = run("scan", "--config", str(cfg_path), "--dump-config")
    assert second.returncode == 0
    assert second.stdout == first.stdout


def test_config_file_supplies_values(tmp_path):
    cfg = {"command": "eval", "sigma": "0.41588182", "eta": {"re": 0.41588182, "im": 0.0},
           "phi": math.pi, "z": "0.19055808", "zp": "-0.61154274",
           "w": "0.19055808", "wp": "-0.61154274"}
    cfg_path = tmp_path / "eval.json"
    cfg_path.write_text(json.dumps(cfg))
    r = run("eval", "--config", str(cfg_path))
    assert r.returncode == 3
    assert "classification: violating" in r.stdout
