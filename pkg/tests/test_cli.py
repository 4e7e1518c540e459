import json

import pytest

from grasscomb.cli import run

DIAMOND = {"n": 3, "edges": [{"from": 1, "to": 2, "weight": "u"}, {"from": 2, "to": 3, "weight": "x"},
                             {"from": 1, "to": 3, "weight": "v"}]}


@pytest.fixture
def graph_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(DIAMOND))
    return str(p)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schur(capsys):
    code, out, _ = call(capsys, "schur", "--shape", "(2,1)", "--nvars", "2")
    assert (code, out) == (0, "x1^2*x2 + x1*x2^2\n")


def test_schur_ext_symbolic(capsys):
    code, out, _ = call(capsys, "schur-ext", "--shape", "(2,1)", "--nvars", "1", "--symbolic-a")
    assert (code, out) == (0, "1/3*a^3*x1^3 - 1/3*a*x1^3\n")


def test_schur_ext_lattice_and_numeric(capsys):
    code, out, _ = call(capsys, "schur-ext", "--shape", "(2,1)", "--nvars", "2", "--param-a", "1", "--method", "lattice")
    assert (code, out) == (0, "x1^2*x2 + x1*x2^2\n")


def test_json_report(capsys):
    code, out, _ = call(capsys, "schur", "--shape", "(1)", "--nvars", "2", "--verify", "--json")
    data = json.loads(out)
    assert code == 0 and data["result"] == "x1 + x2" and data["checks"][0]["passed"]


def test_ssyt(capsys):
    code, out, _ = call(capsys, "ssyt", "--shape", "(2,1)/(1)", "--nvars", "2")
    assert code == 0 and out.splitlines()[-1] == "4 tableaux"


def test_lgv_check(capsys, graph_file):
    code, out, _ = call(capsys, "lgv-check", "--graph", graph_file, "--sources", "1", "--sinks", "3",
                        "--trials", "3", "--seed", "7")
    assert code == 0
    assert out.splitlines()[0] == "(u*x + v) / (1)"
    assert out.count("PASS") == 3


def test_lgv_check_is_deterministic(capsys, graph_file):
    argv = ["lgv-check", "--graph", graph_file, "--sources", "1", "--sinks", "3", "--seed", "7", "--json"]
    first = call(capsys, *argv)
    assert call(capsys, *argv) == first


def test_transfer_failure_exits_one(capsys, tmp_path):
    p = tmp_path / "l.json"
    p.write_text(json.dumps({"N": 2, "layers": [{"edges": [{"from": 1, "to": 2, "weight": "u"}]},
                                                {"edges": [{"from": 2, "to": 1, "weight": "v"}]}]}))
    ok = call(capsys, "transfer-check", "--layers", str(p), "--sources", "1", "--sinks", "1", "--seed", "1")
    assert ok[0] == 0
    code, _, err = call(capsys, "transfer-check", "--layers", str(p), "--sources", "1", "--sinks", "1",
                        "--seed", "1", "--order", "reversed")
    assert code == 1 and "mismatch" in err


def test_matrix_commands(capsys):
    assert call(capsys, "grassmann-det", "--matrix", '[["a","b"],["c","d"]]')[1] == "a*d - b*c\nPASS berezin-det: Berezin integral = determinant\n"
    assert call(capsys, "minor-check", "--matrix", '[["a","b"],["c","d"]]', "--rows", "1", "--cols", "2")[0] == 0
    assert call(capsys, "gaussian-check", "--matrix", '[["a","b"],["c","d"]]')[0] == 0
    assert call(capsys, "lemma1-check", "--graph", "/dev/null")[0] == 2


def test_identity_commands(capsys):
    assert call(capsys, "convolve-check", "--shape", "(2,1)", "--nvars", "2")[0] == 0
    assert call(capsys, "convolve-check", "--shape", "(2,1)", "--nvars", "3", "--split", "1")[0] == 0
    assert call(capsys, "conjugate-check", "--shape", "(2,1)/(1)", "--nvars", "2")[0] == 0


def test_lemma1(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"n": 2, "edges": [{"from": 1, "to": 2, "weight": "u"}, {"from": 2, "to": 1, "weight": "v"}]}))
    code, out, _ = call(capsys, "lemma1-check", "--graph", str(p))
    assert code == 0 and out.splitlines()[0] == "-u*v + 1"


@pytest.mark.parametrize(
    "argv",
    [
        ["schur", "--shape", "(1,2)", "--nvars", "2"],
        ["schur", "--shape", "2,1", "--nvars", "2"],
        ["schur", "--shape", "(1)", "--nvars", "0"],
        ["schur-ext", "--shape", "(1)", "--nvars", "1", "--param-a", "1", "--symbolic-a"],
        ["schur-ext", "--shape", "(1)", "--nvars", "1", "--param-a", "0.5x"],
        ["lgv-check", "--graph", "missing.json", "--sources", "1", "--sinks", "1", "--seed", "1"],
        ["grassmann-det", "--matrix", "[[1.5]]"],
        ["grassmann-det", "--matrix", "[[1, 2]]"],
        ["minor-check", "--matrix", "[[1]]", "--rows", "1", "--cols", ""],
        ["sweep", "--seed", "1", "--only", "99"],
        ["nosuchcommand"],
        [],
    ],
)
def test_input_errors_exit_two(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_seed_is_mandatory_for_sampling(capsys, graph_file):
    assert call(capsys, "lgv-check", "--graph", graph_file, "--sources", "1", "--sinks", "3")[0] == 2
    assert call(capsys, "sweep")[0] == 2


def test_unequal_endpoints(capsys, graph_file):
    code, _, err = call(capsys, "lgv-check", "--graph", graph_file, "--sources", "1,2", "--sinks", "3", "--seed", "1")
    assert code == 2 and "differs" in err


def test_malformed_graph_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{oops")
    assert call(capsys, "lgv-check", "--graph", str(p), "--sources", "1", "--sinks", "1", "--seed", "1")[0] == 2


def test_small_sweep(capsys):
    code, out, _ = call(capsys, "sweep", "--seed", "3", "--only", "4,9")
    assert code == 0
    assert out.splitlines()[-1] == "2/2 criteria passed"
    assert call(capsys, "sweep", "--seed", "3", "--only", "4,9")[1] == out
