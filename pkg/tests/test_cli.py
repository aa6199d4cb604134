import json

import pytest

from azenum.cli import run_command


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr().out
    return code, out


# -- group -------------------------------------------------------------------


def test_group_check_catalog(capsys):
    code, out = run(capsys, "--json", "group", "check", "--group", "Q8")
    doc = json.loads(out)
    assert code == 0
    assert doc["class_ok"] and doc["k_valid"]
    assert doc["exponent"] == 4


def test_group_check_outside_class(capsys):
    # D4 has non-central involutions
    code, out = run(capsys, "--json", "group", "check", "--group", "D4")
    assert code == 1
    assert json.loads(out)["class_ok"] is False


def test_group_check_unknown(capsys):
    assert run_command(["group", "check", "--group", "NoSuch"]) == 2


def test_group_check_from_file(tmp_path, capsys):
    doc = {
        "name": "C2",
        "order": 2,
        "elements": ["1", "a"],
        "mul": [[0, 1], [1, 0]],
        "K": [0, 1],
    }
    path = tmp_path / "c2.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "--json", "group", "check", "--group", str(path))
    assert code == 0
    assert json.loads(out)["k"] == ["1", "a"]


def test_group_rank(capsys):
    code, out = run(capsys, "--json", "group", "rank", "--group", "Q8")
    assert code == 0
    assert json.loads(out)["rank"] == 2


# -- qs ----------------------------------------------------------------------


def test_qs_from_group_and_back(tmp_path, capsys):
    code, out = run(capsys, "--json", "qs", "from-group", "--group", "Q8")
    assert code == 0
    qs_path = tmp_path / "qs.json"
    qs_path.write_text(out)
    code, out = run(capsys, "--json", "qs", "to-group", "--file", str(qs_path))
    assert code == 0
    rebuilt = json.loads(out)
    assert rebuilt["order"] == 8


def test_qs_amalgam(tmp_path, capsys):
    _, out = run(capsys, "--json", "qs", "from-group", "--group", "C4")
    left = tmp_path / "l.json"
    right = tmp_path / "r.json"
    left.write_text(out)
    _, out2 = run(capsys, "--json", "qs", "from-group", "--group", "Q8")
    right.write_text(out2)
    code, out = run(
        capsys,
        "--json",
        "--verify",
        "qs",
        "amalgam",
        "--left",
        str(left),
        "--right",
        str(right),
    )
    assert code == 0
    doc = json.loads(out)
    l_doc, r_doc = json.loads(left.read_text()), json.loads(right.read_text())
    assert doc["qs"]["dimU"] == l_doc["dimU"] + r_doc["dimU"]
    assert (
        doc["qs"]["dimV"]
        == l_doc["dimV"] + r_doc["dimV"] + l_doc["dimU"] * r_doc["dimU"]
    )


# -- cp ----------------------------------------------------------------------


def test_cp_enumerate_c4(capsys):
    code, out = run(capsys, "cp", "enumerate", "--group", "C4", "--count", "8")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert [line["index"] for line in lines] == list(range(8))
    assert lines[0]["min_rep"] == "-"
    assert all(set(line) == {"index", "support", "min_rep"} for line in lines)


def test_cp_enumerate_deterministic(capsys):
    _, out1 = run(capsys, "cp", "enumerate", "--group", "Q8", "--count", "20")
    _, out2 = run(capsys, "cp", "enumerate", "--group", "Q8", "--count", "20")
    assert out1 == out2


def test_cp_compare_and_mul(capsys):
    code, out = run(
        capsys, "cp", "compare", "--group", "C4", "--x", "-", "--y", "0:g"
    )
    assert code == 0 and out.strip() == "lt"
    code, out = run(
        capsys, "cp", "mul", "--group", "C4", "--x", "0:g", "--y", "0:g"
    )
    assert code == 0 and out.strip() == "0:g2"


def test_cp_bad_literal(capsys):
    assert (
        run_command(["cp", "mul", "--group", "C4", "--x", "0:zz", "--y", "-"]) == 2
    )


# -- aut ---------------------------------------------------------------------


def test_aut_apply_beta_window(capsys):
    word = json.dumps([{"beta": [0, 1, 2, 3, 4, 5]}])
    code, out = run(
        capsys,
        "aut",
        "apply",
        "--group",
        "C4",
        "--word",
        word,
        "--element",
        "0:g",
    )
    assert code == 0
    assert out.strip() == "1:g,2:g,3:g,4:g,5:g"


def test_aut_verify_ok_and_level_guard(capsys):
    word = json.dumps([{"perm": [[0, 1]]}])
    code, out = run(
        capsys, "--json", "aut", "verify", "--group", "C4", "--word", word,
        "--level", "3",
    )
    assert code == 0
    assert json.loads(out)["ok"] is True
    assert (
        run_command(
            ["aut", "verify", "--group", "C4", "--word", word, "--level", "1"]
        )
        == 2
    )


def test_aut_alpha_verified(capsys):
    code, out = run(
        capsys,
        "--json",
        "--verify",
        "aut",
        "alpha",
        "--group",
        "C4",
        "--coords",
        "0,1,2,3",
        "--i0",
        "4",
        "--j0",
        "5",
    )
    assert code == 0
    doc = json.loads(out)
    # one full residue block: a single window followed by the i0/j0 swap
    assert doc == [{"beta": [4, 0, 1, 2, 3, 5]}, {"perm": [[4, 5]]}]


# -- wqo ---------------------------------------------------------------------


def test_wqo_star_example(capsys):
    code, out = run(capsys, "wqo", "star", "--w1", "a,b", "--w2", "a,a,b")
    assert code == 0
    assert out.strip() == "embedding (2,3)"


def test_wqo_subword_and_miss(capsys):
    code, out = run(capsys, "wqo", "subword", "--w1", "a,b", "--w2", "a,c,b")
    assert code == 0 and out.strip() == "embedding (1,3)"
    code, _ = run(capsys, "wqo", "star", "--w1", "b,a", "--w2", "a,a,b")
    assert code == 1


def test_wqo_pair_from_file(tmp_path, capsys):
    stream = tmp_path / "words.txt"
    stream.write_text("a,b\nb,a\na,b,a,b\n")
    code, out = run(
        capsys, "--json", "wqo", "pair", "--file", str(stream), "--mode", "star"
    )
    assert code == 0
    doc = json.loads(out)
    assert (doc["i"], doc["j"]) == (0, 2)
    assert doc["positions"] == [3, 4]


def test_wqo_pair_not_found(tmp_path, capsys):
    stream = tmp_path / "words.txt"
    stream.write_text("a,b\nb,a\n")
    code, _ = run(capsys, "wqo", "pair", "--file", str(stream))
    assert code == 1


# -- az ----------------------------------------------------------------------


def test_az_run_green(tmp_path, capsys):
    tuples = tmp_path / "family.txt"
    tuples.write_text("0:g\n0:g,1:g,2:g,3:g,4:g\n")
    emit = tmp_path / "cert.json"
    code, out = run(
        capsys,
        "--json",
        "--verify",
        "az",
        "run",
        "--group",
        "C4",
        "--tuples",
        str(tuples),
        "--depth",
        "50",
        "--emit",
        str(emit),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert doc["f"] == [4]
    assert json.loads(emit.read_text()) == doc


def test_az_run_insufficient(tmp_path, capsys):
    tuples = tmp_path / "family.txt"
    tuples.write_text("0:g\n0:g,1:g\n")
    code = run_command(
        ["az", "run", "--group", "C4", "--tuples", str(tuples)]
    )
    capsys.readouterr()
    assert code == 3


def test_az_run_two_components(tmp_path, capsys):
    tuples = tmp_path / "family.txt"
    tuples.write_text("0:i;1:j\n0:i;1:j\n")
    code, out = run(
        capsys, "--json", "az", "run", "--group", "Q8", "--tuples", str(tuples),
        "--depth", "30",
    )
    assert code == 0
    assert json.loads(out)["ok"] is True


# -- rado --------------------------------------------------------------------


def test_rado_triples_and_check(tmp_path, capsys):
    emit = tmp_path / "triples.json"
    code, out = run(
        capsys,
        "--json",
        "--verify",
        "rado",
        "triples",
        "--max-n",
        "5",
        "--emit",
        str(emit),
    )
    assert code == 0
    doc = json.loads(out)
    assert [t["n"] for t in doc["triples"]] == [4, 5]
    assert doc["triples"][0]["b"] == 5
    assert doc["triples"][0]["c"] == 39
    assert doc["obstruction"]["ok"] is True

    code, out = run(capsys, "--json", "rado", "check", "--file", str(emit))
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        run_command(["nope"])
    assert err.value.code == 2
