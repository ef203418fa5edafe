import json
from pathlib import Path

import pytest

from linres.cli import main
from linres.instances import GENERATOR_KINDS

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def rs_file(tmp_path):
    path = tmp_path / "rs.lsys"
    assert main(["gen", "--kind", "rs", "--p", "7", "--n", "7", "--k", "3", "--seed", "1", "-o", str(path)]) == 0
    return path


@pytest.fixture
def sum_file(tmp_path):
    path = tmp_path / "sum.lsys"
    path.write_text("p 5\ndims 1 2\n1 1 | 3\n")
    return path


def test_gen_and_distance(rs_file, capsys):
    assert main(["distance", "-i", str(rs_file)]) == 0
    assert capsys.readouterr().out == "5\n"


def test_gen_writes_manifest(tmp_path):
    out, manifest = tmp_path / "r.lsys", tmp_path / "r.json"
    code = main(["gen", "--kind", "random", "--p", "5", "--n", "6", "--k", "3", "--min-d", "2",
                 "--seed", "4", "-o", str(out), "--manifest", str(manifest)])
    assert code == 0
    data = json.loads(manifest.read_text())
    assert data["seed"] == 4
    assert data["d"] >= 2
    assert data["instance"] == str(out)


def test_gen_is_deterministic(tmp_path):
    paths = [tmp_path / "a.lsys", tmp_path / "b.lsys"]
    for path in paths:
        main(["gen", "--kind", "random", "--p", "5", "--n", "6", "--k", "3", "--seed", "9", "-o", str(path)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("kind", sorted(GENERATOR_KINDS))
def test_gen_accepts_every_generator_kind(kind, tmp_path):
    out = tmp_path / f"{kind}.lsys"
    assert main(["gen", "--kind", kind, "--p", "7", "--n", "7", "--k", "3", "--seed", "1", "-o", str(out)]) == 0
    assert "dims 3 7\n" in out.read_text()


def test_gen_rejects_unknown_kinds():
    assert main(["gen", "--kind", "hamming", "--p", "7", "--n", "7", "--k", "3", "--seed", "1"]) == 2


def test_image_and_sat(sum_file, tmp_path, capsys):
    assert main(["image", "-i", str(sum_file)]) == 0
    assert capsys.readouterr().out == "size 3\nmissing 3\n"
    assert main(["sat", "-i", str(sum_file)]) == 0
    assert capsys.readouterr().out == "unsat\n"

    satisfiable = tmp_path / "sat.lsys"
    satisfiable.write_text("p 5\ndims 1 2\n1 1 | 1\n")
    assert main(["sat", "-i", str(satisfiable)]) == 1
    assert capsys.readouterr().out == "sat 0 1\n"


def test_build_then_check(rs_file, tmp_path, capsys):
    proof = tmp_path / "rs.lref"
    assert main(["build-layered", "-i", str(rs_file), "-o", str(proof)]) == 0
    assert main(["check", "-i", str(rs_file), "-P", str(proof)]) == 0
    assert capsys.readouterr().out == "accept\n"


def test_corrupted_proof_is_rejected(sum_file, tmp_path, capsys):
    proof = tmp_path / "sum.lref"
    main(["build-layered", "-i", str(sum_file), "-o", str(proof)])
    text = proof.read_text().replace("edge 0 1 1 0 | 0", "edge 0 1 1 0 | 1")
    proof.write_text(text)
    assert main(["check", "-i", str(sum_file), "-P", str(proof)]) == 1
    assert capsys.readouterr().out.startswith("reject")


def test_tree_proof_checks(sum_file, tmp_path):
    proof = tmp_path / "tree.lref"
    assert main(["build-layered", "-i", str(sum_file), "--tree", "-o", str(proof)]) == 0
    assert proof.read_text().startswith("kind lintree\n")
    assert main(["check", "-i", str(sum_file), "-P", str(proof)]) == 0


def test_check_clausal_fixture(capsys):
    code = main(["check-clausal", "-i", str(FIXTURES / "x1_eq_3.lsys"), "-P", str(FIXTURES / "x1_eq_3.lder")])
    assert code == 0
    assert capsys.readouterr().out == "accept\n"


def test_play_is_deterministic(rs_file, tmp_path):
    outputs = []
    for name in ("a.txt", "b.txt"):
        path = tmp_path / name
        assert main(["play", "-i", str(rs_file), "--seed", "3", "-o", str(path)]) == 0
        outputs.append(path.read_text())
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith("game lintrees\n")


def test_play_treelike(rs_file, capsys):
    assert main(["play", "-i", str(rs_file), "--game", "treelike-reslin", "--seed", "2"]) == 0
    assert capsys.readouterr().out.startswith("game treelike-reslin\n")


def test_play_sweep_csv(rs_file, tmp_path):
    csv_path = tmp_path / "games.csv"
    assert main(["play", "-i", str(rs_file), "--seed", "0", "--games", "3", "--csv", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "seed,n,k,d,rounds,branchings,reason"
    assert [line.split(",")[0] for line in lines[1:]] == ["0", "1", "2"]


def test_verify_lemma_is_reproducible(capsys):
    assert main(["verify-lemma", "addcomb", "--trials", "3", "--seed", "1"]) == 0
    first = capsys.readouterr().out
    assert main(["verify-lemma", "addcomb", "--trials", "3", "--seed", "1"]) == 0
    assert capsys.readouterr().out == first
    assert len(first.splitlines()) == 4


def test_robustness_scan(capsys):
    assert main(["robustness-scan", "-i", str(FIXTURES / "x1_eq_3.lsys"), "--s-max", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "s,r,support,values,dim,d,r_le_s,s_lt_d"
    assert main(["robustness-scan", "-i", str(FIXTURES / "x1_eq_3.lsys"), "--s-max", "0", "--probe"]) == 0
    assert capsys.readouterr().out.splitlines() == ["s,support,values,min_equations", "0,,,1"]


def test_path_witness(sum_file, tmp_path, capsys):
    proof = tmp_path / "sum.lref"
    main(["build-layered", "-i", str(sum_file), "-o", str(proof)])
    capsys.readouterr()
    assert main(["path-witness", "-P", str(proof), "--point", "0", "0", "--s", "1"]) == 0
    assert capsys.readouterr().out.splitlines() == ["node 1", "depth 1", "rho {x0<-0}", "eq 1 1 | 3"]
    assert main(["path-witness", "-P", str(proof), "--point", "0", "0", "--s", "3"]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["gen"],
        ["gen", "--p", "5", "--n", "3", "--k", "2"],
        ["gen", "--p", "4", "--n", "3", "--k", "2", "--seed", "0"],
        ["--budget", "0", "distance", "-i", "missing.lsys"],
        ["distance", "-i", "missing.lsys"],
        ["verify-lemma", "nosuchlemma", "--seed", "0"],
    ],
)
def test_usage_and_library_errors_exit_2(argv):
    assert main(argv) == 2


def test_budget_is_enforced(rs_file, capsys):
    assert main(["--budget", "16", "sat", "-i", str(rs_file)]) == 2
    assert "exceeds budget" in capsys.readouterr().err
