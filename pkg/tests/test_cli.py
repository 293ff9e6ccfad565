import json
import subprocess
import sys

import pytest

from cubefold.cli import main

from conftest import fixture_path as fx


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_pocset(capsys):
    code, out, _ = run(capsys, "validate", fx("chain3"))
    assert code == 0
    assert out.splitlines()[0] == "pocset OK: 3 hyperplanes"


def test_validate_bad_file(capsys):
    code, _, err = run(capsys, "validate", fx("bad_le"))
    assert code == 1
    assert "ComparableWithComplement" in err and "line 4" in err


def test_validate_action_and_relation(capsys):
    code, out, _ = run(capsys, "validate", fx("fan"), "--action", fx("fan_rotation"))
    assert code == 0 and "group order 4" in out
    code, out, _ = run(capsys, "validate", fx("transverse_pair"), "--relation", fx("transverse_relation"))
    assert code == 1 and "AER3 FAIL A B" in out


def test_validate_map(capsys):
    code, out, _ = run(
        capsys, "validate", fx("transverse_pair"), "--map", fx("collapse_map"), "--target", fx("point")
    )
    assert code == 1
    assert "AM2 FAIL A B" in out


def test_dual_summaries(capsys):
    code, out, _ = run(capsys, "dual", fx("transverse3"))
    assert code == 0 and out.startswith("8 vertices, 12 edges") and "dimension 3" in out
    _, out, _ = run(capsys, "dual", fx("fan"))
    assert out.startswith("9 vertices, 12 edges, 4 maximal cubes (4 squares)")
    _, out, _ = run(capsys, "dual", fx("chain5"))
    assert out.startswith("6 vertices, 5 edges")


def test_dual_exports(capsys, tmp_path):
    code, out, err = run(capsys, "dual", fx("chain3"), "--format", "json")
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 4
    assert "4 vertices" in err
    target = tmp_path / "chain.dot"
    code, out, _ = run(capsys, "dual", fx("chain3"), "--format", "dot", "--out", str(target))
    assert target.read_text().startswith("graph dual {")
    assert "4 vertices" in out


def test_vertex_cap(capsys):
    code, _, err = run(capsys, "dual", fx("transverse3"), "--vertex-cap", "5")
    assert code == 3 and "ComplexTooLarge" in err


def test_quotient(capsys):
    code, out, _ = run(capsys, "quotient", fx("chain3"), fx("chain_fold_relation"))
    assert code == 0
    assert "4 vertices, 4 edges, 1 maximal cubes (1 squares), dimension 2" in out
    code, out, _ = run(capsys, "quotient", fx("transverse_pair"), fx("transverse_relation"))
    assert code == 1 and "AER3 FAIL" in out


def test_check_map(capsys):
    code, out, _ = run(capsys, "check-map", fx("chain2"), fx("chain3"), fx("chain_embedding_map"), "--format", "json")
    assert code == 0
    assert json.loads(out) == [[0, 0], [1, 1], [2, 2]]
    code, out, _ = run(capsys, "check-map", fx("chain3"), fx("square"), fx("chain_fold_map"))
    assert code == 0 and "embedding: no" in out and "resolution: yes" in out


def test_fold_chain(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    code, out, _ = run(
        capsys, "fold", fx("chain3"), fx("square"), fx("chain_fold_map"), "--format", "json", "--out", str(trace)
    )
    assert code == 0
    data = json.loads(trace.read_text())
    assert len(data["steps"]) == 1 and data["final_is_embedding"]
    code, out, _ = run(capsys, "trace-show", str(trace))
    assert code == 0 and out.startswith("steps: 1 ")


def test_fold_embedding(capsys):
    code, out, _ = run(capsys, "fold", fx("chain2"), fx("chain3"), fx("chain_embedding_map"))
    assert code == 0 and out.startswith("steps: 0 ")


def test_fold_with_actions(capsys):
    code, out, _ = run(
        capsys, "fold", fx("twin_chains"), fx("twin_target"), fx("twin_map"),
        "--action", fx("twin_swap"), "--target-action", fx("twin_target_swap"),
    )
    assert code == 0 and out.startswith("steps: 1 ")
    code, out, _ = run(
        capsys, "fold", fx("cycle8"), fx("fan"), fx("fan_fold_map"),
        "--action", fx("cycle8_shift"), "--target-action", fx("fan_halfturn"), "--no-verify",
    )
    assert code == 0 and "complexity history: 2 1 0" in out and "skip" in out


def test_fold_rejects_non_resolution(capsys):
    code, _, err = run(capsys, "fold", fx("chain2"), fx("point"), fx("wrong_fold_map"))
    assert code == 1
    assert "not a resolution" in err


def test_trace_show_rejects_garbage(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    code, _, err = run(capsys, "trace-show", str(bad))
    assert code == 1 and "not a trace file" in err


def test_sample_is_seeded(capsys, tmp_path):
    run(capsys, "sample", "resolution", str(tmp_path / "a"), "--seed", "3")
    run(capsys, "sample", "resolution", str(tmp_path / "b"), "--seed", "3")
    for name in ("domain.txt", "target.txt", "map.txt", "action.txt", "target_action.txt"):
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()
    d = tmp_path / "a"
    code, _, _ = run(
        capsys, "fold", str(d / "domain.txt"), str(d / "target.txt"), str(d / "map.txt"),
        "--action", str(d / "action.txt"), "--target-action", str(d / "target_action.txt"),
    )
    assert code == 0


def test_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/file.txt")
    assert code == 1 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cubefold", "validate", fx("chain3")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("pocset OK: 3 hyperplanes")


def test_bad_cap_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["dual", fx("chain3"), "--vertex-cap", "0"])
    assert info.value.code == 2
