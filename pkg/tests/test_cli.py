import json

import pytest

from artifact.cli import main
from artifact.structures import clique, dump_structure


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_sa_accept_and_reject(capsys):
    code, out = run(capsys, "sa", "K4", "K3", "--level", "3")
    assert code == 0 and out.out.startswith("ACCEPT")
    code, out = run(capsys, "sa", "K4", "K3", "--level", "4")
    assert code == 1 and out.out.startswith("REJECT")


def test_sa_on_homomorphic_files(capsys, tmp_path):
    X = tmp_path / "x.txt"
    X.write_text("domain 2\nrelation E 2\n  t 1 2\n", encoding="utf-8")
    code, _ = run(capsys, "sa", str(X), "K3", "--level", "2", "--enhance")
    assert code == 0


def test_structured_output_reports_seed(capsys):
    code, out = run(capsys, "--format", "structured", "--seed", "7", "count", "K3", "K3", "--check")
    doc = json.loads(out.out)
    assert code == 0 and doc["count"] == 6 and doc["seed"] == 7


def test_count_text(capsys):
    code, out = run(capsys, "count", "K3", "K3")
    assert code == 0 and "6" in out.out.splitlines()[0]


def test_table(capsys):
    code, out = run(capsys, "--format", "structured", "table", "--k", "2..3", "--c", "2..3", "--d", "2..3")
    doc = json.loads(out.out)
    assert code == 0 and len(doc["cells"]) == 8 and doc["mismatches"] == 0


def test_blp_kconsistency_tensorize_linedigraph(capsys, tmp_path):
    assert run(capsys, "blp", "K4", "K3")[0] == 0
    assert run(capsys, "kconsistency", "K4", "K3", "--level", "3")[0] == 0
    assert run(capsys, "kconsistency", "K4", "K3", "--level", "4")[0] == 1
    out = tmp_path / "t.txt"
    assert run(capsys, "tensorize", "K3", "--level", "2", "--out", str(out))[0] == 0
    assert "relation E 4" in out.read_text(encoding="utf-8")
    code, res = run(capsys, "linedigraph", "K3")
    assert code == 0 and "domain 6" in res.out


def test_exhibit(capsys, tmp_path):
    code, out = run(capsys, "--output-dir", str(tmp_path), "exhibit", "--c", "3", "--d", "3", "--k", "3")
    assert code == 0 and "STEP no_colouring OK" in out.out
    assert any(tmp_path.iterdir())


def test_verify_roundtrip_and_tampering(capsys, tmp_path):
    xi_path = tmp_path / "w.xi"
    sa_path = tmp_path / "w.sa"
    code, _ = run(capsys, "sa", "K4", "K3", "-k", "3", "--xi", str(xi_path), "--witness", str(sa_path))
    assert code == 0
    assert run(capsys, "verify", str(xi_path))[0] == 0
    assert run(capsys, "verify", str(sa_path))[0] == 0
    text = xi_path.read_text(encoding="utf-8")
    bad = tmp_path / "bad.xi"
    bad.write_text(text.replace("tensor 1 1 2\n  1 1 2 1/6", "tensor 1 1 2\n  1 2 2 1/6", 1), encoding="utf-8")
    code, out = run(capsys, "verify", str(bad))
    assert code == 1 and out.out.startswith("FAIL")
    sa_text = sa_path.read_text(encoding="utf-8").splitlines()
    idx = next(i for i, ln in enumerate(sa_text) if ln.startswith("value "))
    key = sa_text[idx].split()[1]
    sa_text[idx] = f"value {key} 7/5"
    bad_sa = tmp_path / "bad.sa"
    bad_sa.write_text("\n".join(sa_text) + "\n", encoding="utf-8")
    code, out = run(capsys, "verify", str(bad_sa))
    assert code == 1 and out.out.startswith("FAIL")


def test_verify_against_wrong_instance(capsys, tmp_path):
    xi_path = tmp_path / "w.xi"
    run(capsys, "sa", "K3", "K3", "-k", "2", "--xi", str(xi_path))
    other = tmp_path / "k4.txt"
    other.write_text(dump_structure(clique(4)), encoding="utf-8")
    code, out = run(capsys, "verify", str(xi_path), "--instance", str(other))
    assert code == 1 and "FAIL" in out.out


@pytest.mark.parametrize("argv", [
    ["sa", "missing-file.txt", "K3", "-k", "2"],
    ["sa", "K3", "K3", "-k", "0"],
    ["--cap", "10", "count", "K4", "K4"],
])
def test_errors_exit_two(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2 and out.err.startswith("error:")


def test_parse_error_in_file(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("domain 2\nrelation E 2\n  t 1 5\n", encoding="utf-8")
    code, out = run(capsys, "blp", str(bad), "K2")
    assert code == 2 and "line 3" in out.err
