import io
import json
import subprocess
import sys

import pytest

from orientgap.cli import main
from orientgap.instances import parse_instance


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


@pytest.fixture
def no_edge_file(tmp_path, capsys):
    path = tmp_path / "no_edge.txt"
    main(["gen", "no-edge", "--out", str(path)])
    capsys.readouterr()
    return path


def test_gen_no_edge(capsys):
    code, out, err = run(capsys, "gen", "no-edge")
    assert code == 0
    assert out == "so 2\nedge 0 1\npair 0 1\npair 1 0\n"
    assert kv(err)["generator"] == "no-edge"


def test_solve_so_report(capsys, no_edge_file):
    code, out, _ = run(capsys, "solve-so", str(no_edge_file))
    assert code == 0
    assert out.startswith("opt=1\nk=2\nratio=0.5\n")


def test_amplify_then_solve(capsys, monkeypatch, no_edge_file):
    code, amplified, _ = run(capsys, "amplify-so", str(no_edge_file), "--q", "2", "--layers", "2", "--full-space")
    assert code == 0
    code, out, _ = run(capsys, "solve-so", "-", stdin=amplified, monkeypatch=monkeypatch)
    assert kv(out)["ratio"] == "0.375"


def test_pipeline_through_the_module_entry_point(no_edge_file):
    amp = subprocess.run(
        [sys.executable, "-m", "orientgap", "amplify-so", str(no_edge_file), "--layers", "2", "--full-space"],
        capture_output=True, text=True, check=True,
    )
    solved = subprocess.run(
        [sys.executable, "-m", "orientgap", "solve-so", "-"], input=amp.stdout, capture_output=True, text=True, check=True
    )
    assert "ratio=0.375" in solved.stdout


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "random", "--seed", "5", "--n", "6"],
        ["gen", "yes-chain", "--k", "3"],
        ["gen", "dmc-no"],
        ["gen", "dmc-yes"],
    ],
)
def test_generated_instances_reparse_and_are_deterministic(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    parse_instance(first)


def test_sampled_amplification_is_byte_identical(capsys, tmp_path):
    base = tmp_path / "chain.txt"
    main(["gen", "yes-chain", "--out", str(base)])
    capsys.readouterr()
    args = ["amplify-so", str(base), "--layers", "3", "--copies", "3", "--seed", "9"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert parse_instance(a).k == 18


def test_plan_report(capsys):
    _, out, _ = run(capsys, "plan", "--k", "2", "--q", "2")
    report = kv(out)
    assert (report["B"], report["p2"], report["constant"]) == ("16", "10240", "40")
    assert report["k0"].startswith("≈2^")


def test_plan_dmc_report(capsys):
    _, out, _ = run(capsys, "plan-dmc", "--p", "1", "--q", "2")
    report = kv(out)
    assert (report["M"], report["p0"], report["k0"]) == ("6", "6", "3840")


def test_json_report(capsys):
    _, out, _ = run(capsys, "plan-dmc", "--json")
    assert json.loads(out)["M"] == 6


def test_reduce_dmc_and_solve(capsys, monkeypatch, tmp_path):
    base = tmp_path / "no.txt"
    main(["gen", "dmc-no", "--out", str(base)])
    capsys.readouterr()
    prov = tmp_path / "prov.txt"
    code, inst, err = run(capsys, "reduce-dmc", str(base), "--m", "2", "--full-space", "--verify",
                          "--provenance", str(prov))
    assert code == 0 and kv(err)["verified"] == "True"
    assert len(prov.read_text().splitlines()) == 16
    _, out, _ = run(capsys, "solve-dmc", "-", stdin=inst, monkeypatch=monkeypatch)
    assert kv(out)["opt"] == "4" and kv(out)["ratio"] == "0.25"


def test_clique_commands(capsys, monkeypatch, tmp_path):
    base = tmp_path / "chain.txt"
    main(["gen", "yes-chain", "--out", str(base)])
    capsys.readouterr()
    _, out, _ = run(capsys, "min-beta", str(base))
    assert kv(out)["beta"] == "1"
    _, clique, _ = run(capsys, "to-clique", str(base), "--beta", "2")
    _, out, _ = run(capsys, "solve-clique", "-", stdin=clique, monkeypatch=monkeypatch)
    assert kv(out)["found"] == "True"


def test_min_beta_on_no_instance(capsys, no_edge_file):
    _, out, _ = run(capsys, "min-beta", str(no_edge_file), "--beta", "3")
    assert kv(out)["beta"] == "none"


def test_verify_sampler(capsys):
    _, out, _ = run(capsys, "verify-sampler", "--seed", "1")
    report = kv(out)
    assert report["m"] == "8000" and report["ok"] == "True"


def test_construction_error_exits_one(capsys, no_edge_file):
    code, _, err = run(capsys, "amplify-so", str(no_edge_file))
    assert code == 1
    assert err.startswith("CapExceeded")


def test_parse_error_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("so 2\narc 0 5\npair 0 1\n")
    code, _, err = run(capsys, "solve-so", str(bad))
    assert code == 1 and err.startswith("IndexOutOfRange: line 2, col 7")


def test_usage_errors_exit_two(capsys, no_edge_file, tmp_path):
    assert main(["frobnicate"]) == 2
    assert main(["solve-dmc", str(no_edge_file)]) == 2
    assert main(["solve-so", str(tmp_path / "missing.txt")]) == 2
    assert main(["plan", "--k", "0"]) == 2
