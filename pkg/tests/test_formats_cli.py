from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from shiftlab import cli, codes, formats
from shiftlab.errors import InputError
from shiftlab.lattice import FiniteShape


def run(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv) -> tuple[int, dict]:
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_catalog_contents():
    names = formats.list_catalog()
    assert sum(n.endswith((".sft", ".sofic")) for n in names) == 5
    assert sum(n.endswith(".code") for n in names) == 6


def test_shift_file_errors():
    with pytest.raises(InputError, match="alphabet"):
        formats.parse_shift("format sft-v1\nforbidden 11\n")
    with pytest.raises(InputError, match="directive"):
        formats.parse_shift("format sft-v1\nalphabet 0 1\ncolour red\n")
    with pytest.raises(InputError, match="sofic"):
        formats.parse_shift("format sofic-v1\nalphabet 0 1\nforbidden 11\n")
    with pytest.raises(InputError, match="format"):
        formats.parse_shift("alphabet 0 1\n")
    with pytest.raises(InputError, match="no such file"):
        formats.load_shift("catalog:nothing.sft")


def test_multichar_alphabet_file():
    X = formats.parse_shift("format sft-v1\nalphabet a bb\nforbidden bb bb\n")
    assert X.accepts("a bb a") and not X.accepts("bb bb")


def test_code_files_resolve_relative_paths(tmp_path):
    (tmp_path / "g.sft").write_text("format sft-v1\nalphabet 0 1\nforbidden 11\n")
    (tmp_path / "c.code").write_text(
        "format code-v1\nneighborhood 0\ndomain g.sft\ncodomain g.sft\nmap 0->0\nmap 1->1\n"
    )
    f = formats.load_code(tmp_path / "c.code")
    assert f.is_injective()[0]
    (tmp_path / "bad.code").write_text(
        "format code-v1\nneighborhood 0 1\ndomain g.sft\nmap 0->0\n"
    )
    with pytest.raises(InputError, match="neighborhood size"):
        formats.load_code(tmp_path / "bad.code")


def test_system_files():
    sys, rels = formats.parse_system("n=3\ngroup z\ngen t (0 1 2)\nentourage U (0,1) (1,0)\n")
    assert sys.act(sys.word("t")) == (1, 2, 0)
    assert set(rels["U"].pairs()) == {(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)}
    with pytest.raises(InputError):
        formats.parse_system("gen t (0 1)\n")


def test_parse_shape():
    assert formats.parse_shape("-1..1").to_json() == [-1, 0, 1]
    assert formats.parse_shape("0,2,5").to_json() == [0, 2, 5]
    assert formats.parse_shape("0:0,1:0") == FiniteShape([(0, 0), (1, 0)])
    with pytest.raises(InputError):
        formats.parse_shape(",")


def test_entropy_command(capsys):
    code, rep = run_json(capsys, "entropy", "--shift", "catalog:golden_mean.sft")
    assert code == 0 and rep["schema_version"] == "1"
    assert abs(rep["results"]["value"] - math.log((1 + math.sqrt(5)) / 2)) < 1e-11
    assert "wall_time" not in rep
    assert len(rep["inputs"]["catalog:golden_mean.sft"]) == 64


def test_entropy_csv(capsys):
    code, rep = run_json(capsys, "entropy", "--shift", "catalog:full2.sft", "--method", "count", "--n", "5", "--csv")
    lines = rep["results"]["csv"].strip().splitlines()
    assert lines[0] == "n,count,rate" and lines[-1].startswith("5,32,")


def test_reports_are_byte_stable(capsys):
    argv = ("check-si", "--shift", "catalog:one_block_of_ones.sofic", "--wsp", "--window", "8", "--json")
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
    _, c = run(capsys, *argv, "--timing")
    assert "wall_time" in json.loads(c)


def test_check_si_command(capsys):
    code, rep = run_json(capsys, "check-si", "--shift", "catalog:golden_mean.sft", "--delta", "0")
    assert code == 0
    assert rep["verdicts"] == {"strongly_irreducible": True, "delta_irreducible": False}
    assert rep["witnesses"]["delta_counterexample"]


def test_goe_commands(capsys):
    code, rep = run_json(capsys, "goe", "--code", "catalog:and.code", "--check", "myhill")
    assert code == 0 and rep["verdicts"]["myhill"] == "PASS (vacuous: not pre-injective)"
    code, rep = run_json(capsys, "goe", "--code", "catalog:ten_to_eleven.code", "--check", "myhill")
    assert code == 3 and rep["verdicts"]["error_type"] == "HypothesisError"
    code, rep = run_json(capsys, "goe", "--code", "catalog:full_to_golden.code", "--check", "drop")
    assert code == 0 and rep["results"]["drop"]["margin"] > 0.2
    code, rep = run_json(capsys, "goe", "--code", "catalog:ten_to_eleven.code", "--check", "surjective")
    assert rep["witnesses"]["missing_word"] == "010"


def test_input_error_exit_code(capsys):
    code, rep = run_json(capsys, "entropy", "--shift", "no/such/file.sft")
    assert code == 2 and rep["verdicts"]["error_type"] == "InputError"


def test_theorem_violation_exit_code(capsys, monkeypatch):
    real = codes.myhill_sweep

    def broken(rules):
        out = real(range(4))
        out["preinjective_not_surjective"] = [0]
        return out

    monkeypatch.setattr(codes, "myhill_sweep", broken)
    code, rep = run_json(capsys, "myhill-sweep")
    assert code == 4 and rep["verdicts"]["myhill_violations"] == 1


def test_chain_suite_single_system(tmp_path, capsys):
    p = tmp_path / "s.sys"
    p.write_text("n=3\ngen t (0 1 2)\nentourage U (0,1)\nentourage V (0,1) (1,0)\n")
    code, rep = run_json(capsys, "chain-suite", "--system", str(p), "--F", "t,t t")
    assert code == 0 and rep["verdicts"]["chain_ok"]
    # V = U is not symmetric
    code, rep = run_json(capsys, "chain-suite", "--system", str(p), "--V", "U")
    assert code == 3 and "hypothesis" in rep["verdicts"]["error"]
    code, rep = run_json(capsys, "chain-suite", "--system", str(p), "--F", "e")
    assert code == 2


def test_counterexamples_command(capsys):
    code, rep = run_json(capsys, "counterexamples", "--which", "one-block")
    ob = rep["results"]["one-block"]
    assert (ob["injective"], ob["surjective"], ob["strongly_irreducible"]) == (True, False, False)
    assert ob["single_one_in_domain"] and not ob["single_one_in_image"]


def test_text_output(capsys):
    code, out = run(capsys, "goe", "--code", "catalog:xor.code", "--check", "injective")
    assert code == 0
    assert "injective: false" in out.lower() or "injective: False" in out


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "shiftlab.cli", "chain-suite", "--instances", "10", "--json"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["verdicts"]["violations"] == 0
