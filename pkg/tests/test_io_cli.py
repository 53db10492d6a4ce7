import json

import numpy as np
import pytest

from holobasis import bases
from holobasis.cli import main
from holobasis.errors import DomainError
from holobasis.io import basis_from_dict, basis_to_dict, load_basis, save_basis


@pytest.mark.parametrize("block, N, d", [("assembled", 7, 3), ("psi", 7, 3), ("eta", 5, 3), ("phi2", 6, 2)])
def test_round_trip_bit_exact(tmp_path, block, N, d):
    B = bases.build(block, N, d)
    path = tmp_path / "b.json"
    save_basis(B, path)
    C = load_basis(path)
    assert np.array_equal(B.rows, C.rows)
    assert (C.N, C.d, C.tag) == (N, d, block)
    save_basis(C, tmp_path / "c.json")
    assert path.read_bytes() == (tmp_path / "c.json").read_bytes()


def test_file_layout():
    doc = basis_to_dict(bases.build_psi(7))
    assert len(doc["ordering"]) == 8 and doc["ordering"][0] == [0, 0]
    doc = basis_to_dict(bases.assemble(7))
    assert len(doc["vectors"]) == 36 and all(len(v) == 36 for v in doc["vectors"])
    assert doc["meta"]["block"] == "assembled"


def test_bad_files():
    doc = basis_to_dict(bases.build_psi(7))
    with pytest.raises(DomainError):
        basis_from_dict(dict(doc, format_version=99))
    with pytest.raises(DomainError):
        basis_from_dict(dict(doc, vectors=[[[1.0, 0.0]]]))
    B = bases.build_psi(7)
    B.rows[0, 1] = 1.0  # (1, 0) is off Delta0
    with pytest.raises(DomainError):
        basis_to_dict(B)


def test_cli_build_and_gram(tmp_path, capsys):
    out = tmp_path / "a7.json"
    assert main(["build", "--dim", "3", "--degree", "7", "--block", "assembled", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["vectors"]) == 36 and len(doc["vectors"][0]) == 36
    assert main(["gram", "--in", str(out), "--tol", "1e-9"]) == 0
    doc["vectors"][0][0][0] += 0.1
    out.write_text(json.dumps(doc))
    assert main(["gram", "--in", str(out), "--tol", "1e-9"]) == 1


def test_cli_domain_error(tmp_path, capsys):
    assert main(["build", "--dim", "3", "--degree", "8", "--out", str(tmp_path / "x.json")]) == 2
    assert "degree must be odd" in capsys.readouterr().err


def test_cli_usage_errors():
    with pytest.raises(SystemExit) as e:
        main(["build", "--frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["expsum", "--variant", "plain"])  # --seed is required
    assert e.value.code == 2


def test_cli_deterministic_outputs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["expsum", "--variant", "reflected", "--sizes", "16..64", "--trials", "8", "--seed", "5", "--out"]
    assert main(args + [str(a)]) == 0
    assert main(args + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "M,max_abs_sum,ratio_to_M"


def test_cli_supnorm_scan(tmp_path):
    basis = tmp_path / "p.json"
    main(["build", "--dim", "3", "--degree", "7", "--block", "psi", "--out", str(basis)])
    csv = tmp_path / "s.csv"
    assert main(["supnorm", "--in", str(basis), "--grid", "16", "--out", str(csv)]) == 0
    assert len(csv.read_text().splitlines()) == 9
    csv2 = tmp_path / "scan.csv"
    assert main(["scan", "--degrees", "3,7", "--grid", "16", "--top", "4", "--out", str(csv2)]) == 0
    assert len(csv2.read_text().splitlines()) == 3


def test_cli_small_commands():
    assert main(["dioph", "--limit", "1000"]) == 0
    assert main(["rs", "--max-log2", "8"]) == 0
    assert main(["rs", "--max-log2", "8", "--max", "1.0"]) == 1
    assert main(["localize", "--degree", "63", "--samples", "5", "--seed", "0", "--inflation", "8"]) == 0


def test_cli_report_fail_soft(tmp_path, monkeypatch):
    from holobasis import acceptance

    def boom():
        raise RuntimeError("broken")

    monkeypatch.setitem(acceptance.CHECKS, "2", boom)
    out = tmp_path / "r.json"
    code = main(["report", "--out", str(out), "--seed", "0", "--only", "2", "7"])
    doc = json.loads(out.read_text())
    assert code == 1 and not doc["passed"]
    names = [c["check"] for c in doc["checks"]]
    assert "2-error" in names and "7-diophantine-min" in names
