import json

import pytest

from lpakit.cli import run
from lpakit.corpus import rose, rose_minus, sink_point
from lpakit.graph import format_graph, parse_graph


@pytest.fixture
def files(tmp_path):
    out = {}
    for key, G in (("r2", rose(2)), ("r2minus", rose_minus()), ("r4", rose(4)),
                   ("point", sink_point())):
        p = tmp_path / f"{key}.graph"
        p.write_text(format_graph(G), encoding="utf-8")
        out[key] = str(p)
    return out


def call(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr()


def test_bf_twisted_reports_three(capsys, files):
    code, out = call(capsys, "--json", "bf-twisted", files["r2"])
    assert code == 0
    data = json.loads(out.out)
    assert data["factors"] == [3] and data["rank"] == 0
    code, out = call(capsys, "bf-twisted", files["r2minus"])
    assert code == 0 and "Z/7" in out.out


def test_obstruct(capsys, files):
    code, out = call(capsys, "obstruct", files["r2"], files["r2minus"])
    assert code == 0 and out.out.startswith("possible=false")
    code, out = call(capsys, "obstruct", files["r2"], files["r2minus"], "--json")
    assert json.loads(out.out)["possible"] is False


@pytest.mark.parametrize("op", ["dual", "outsplit", "cover", "square"])
def test_moves_round_trip(capsys, files, tmp_path, op):
    target = tmp_path / f"out-{op}.graph"
    code, _ = call(capsys, "moves", "--op", op, files["r2"], "-o", str(target))
    assert code == 0
    G = parse_graph(target.read_text(encoding="utf-8"))
    again = parse_graph(format_graph(G, "json"))
    assert (again.vertices, again.edges) == (G.vertices, G.edges)
    if op == "dual":
        R = rose(2)
        assert (G.vertices, G.edges) == (R.vertices, R.edges)


def test_moves_to_stdout(capsys, files):
    code, out = call(capsys, "moves", "--op", "splice", "--vertex", "v", files["r2"])
    G = parse_graph(out.out)
    assert code == 0 and len(G.vertices) == 3


def test_exit_codes(capsys, files, tmp_path):
    assert call(capsys, "bf", str(tmp_path / "missing.graph"))[0] == 1
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex\n", encoding="utf-8")
    assert call(capsys, "info", str(bad))[0] == 1
    assert call(capsys, "term", files["r2"], "e1 +")[0] == 1
    assert call(capsys, "term", files["r2"], "x")[0] == 1
    code, out = call(capsys, "moves", "--op", "elim", "--vertex", "v", files["r2"])
    assert code == 2 and "error" in out.err
    assert call(capsys, "lift", files["r2"], files["r2"], "--twisted")[0] == 0
    assert call(capsys, "kh", files["point"], "--twisted")[0] == 0
    # the default coefficients have no degree 1 group
    assert call(capsys, "uct", files["r4"])[0] == 2


def test_term(capsys, files):
    code, out = call(capsys, "term", files["r2"], "e1 e1* + e2 e2*")
    assert code == 0 and out.out.strip() == "v"
    code, out = call(capsys, "--json", "term", files["r2"], "e1", "--op", "bar")
    data = json.loads(out.out)
    assert data["normal_form"] == "-e1*" and data["grade"] == -1 and data["grade_mod2"] == 1
    code, out = call(capsys, "term", files["r2"], "v - e1 e1* - e2 e2*", "--cohn")
    assert out.out.strip() != "0"


def test_json_is_deterministic(capsys, files, tmp_path):
    coeff = tmp_path / "coeff.json"
    coeff.write_text(json.dumps({"0": {"rank": 1, "factors": []}, "1": {"rank": 1, "factors": []}}))
    for argv in (["info", files["r2minus"]], ["classify", files["r4"], files["r4"]],
                 ["lift", files["r2"], files["r2minus"], "--homotopy"],
                 ["uct", files["r4"], "--coeff", str(coeff)], ["kh", files["r4"]]):
        a = call(capsys, "--json", *argv)
        b = call(capsys, "--json", *argv)
        assert a[0] == 0 and a[1].out == b[1].out
        json.loads(a[1].out)


def test_human_output(capsys, files):
    code, out = call(capsys, "info", files["r2"])
    assert code == 0 and "twisted BF: Z/3" in out.out
    code, out = call(capsys, "classify", files["r2"], files["r2minus"], "--two-invertible")
    assert code == 0 and "isomorphic BF: True" in out.out


def test_selftest_is_seeded_and_hidden(capsys):
    code, out = call(capsys, "--json", "selftest", "--seed", "3", "--count", "2")
    data = json.loads(out.out)
    assert code == 0 and all(data["results"].values())
    with pytest.raises(SystemExit):
        run(["--help"])
    assert "selftest" not in capsys.readouterr().out
