"""Command line surface: subcommands, exit codes, JSON and text output,
budget marker, and byte-level determinism."""

import json

import pytest

from nbhdprod.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def files(tmp_path):
    out = {}
    specs = {
        "model": {"worlds": ["x", "y"],
                  "base": {"1": {"x": [["y"]], "y": [["y"]]}},
                  "val": {"p": ["y"]}},
        "improper": {"worlds": ["x"], "base": {"1": {"x": [[]]}}},
        "kripke": {"worlds": ["w", "v"], "rel": {"1": [["w", "v"]]}},
        "left": {"worlds": ["u"], "base": {"1": {"u": [["u"]]}}},
        "right": {"worlds": ["v"], "base": {"1": {"v": [["v"]]}}},
    }
    for name, data in specs.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        out[name] = str(path)
    return out


# --- inspection commands -----------------------------------------------------------

def test_parse_command(capsys):
    code, out, _ = run_cli(capsys, "parse", "--formula", "[1] p -> p")
    assert code == 0
    assert json.loads(out) == {"atoms": ["p"], "depth": 1,
                               "formula": "[1] p -> p"}


def test_parse_json_flag_matches_default(capsys):
    _, default_out, _ = run_cli(capsys, "parse", "--formula", "p")
    _, json_out, _ = run_cli(capsys, "parse", "--formula", "p", "--json")
    assert default_out == json_out


def test_mc_all_worlds(capsys, files):
    code, out, _ = run_cli(capsys, "mc", "--model", files["model"],
                           "--formula", "[1] p")
    assert code == 0
    assert json.loads(out)["values"] == {"x": True, "y": True}

    code, out, _ = run_cli(capsys, "mc", "--model", files["model"],
                           "--formula", "p")
    assert code == 1
    assert json.loads(out)["values"] == {"x": False, "y": True}


def test_mc_single_world(capsys, files):
    code, out, _ = run_cli(capsys, "mc", "--model", files["model"],
                           "--formula", "p", "--world", "y")
    assert code == 0
    assert json.loads(out) == {"formula": "p", "value": True, "world": "y"}

    code, _, err = run_cli(capsys, "mc", "--model", files["model"],
                           "--formula", "p", "--world", "zz")
    assert code == 2
    assert err.startswith("usage error:")


def test_valid_counterexample(capsys, files):
    code, out, _ = run_cli(capsys, "valid", "--frame", files["improper"],
                           "--formula", "[1] p -> ~[1]~p")
    assert code == 1
    data = json.loads(out)
    assert data["valid"] is False
    assert data["counterexample"] == {"valuation": {"p": []}, "world": "x"}

    code, out, _ = run_cli(capsys, "valid", "--frame", files["improper"],
                           "--formula", "p -> p")
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_char_command(capsys, files):
    code, out, _ = run_cli(capsys, "char", "--frame", files["improper"])
    assert code == 0
    assert json.loads(out) == {"d_ok": False, "t_ok": False, "four_ok": True}


def test_char_text_rendering(capsys, files):
    code, out, _ = run_cli(capsys, "char", "--frame", files["improper"],
                           "--text")
    assert code == 0
    assert out.splitlines() == ["d_ok: false", "four_ok: true", "t_ok: false"]


def test_nof_command(capsys, files):
    code, out, _ = run_cli(capsys, "nof", "--frame", files["kripke"])
    assert code == 0
    assert json.loads(out) == {"worlds": ["w", "v"],
                               "base": {"1": {"w": [["v"]], "v": [[]]}}}


def test_product_command(capsys, files):
    code, out, _ = run_cli(capsys, "product", "--frame", files["left"],
                           "--frame2", files["right"])
    assert code == 0
    data = json.loads(out)
    assert data["worlds"] == ["u,v"]
    assert data["base"]["1"] == {"u,v": [["u,v"]]}
    assert data["base"]["2"] == {"u,v": [["u,v"]]}


def test_tree_command(capsys):
    code, out, _ = run_cli(capsys, "tree", "--kind", "in", "--branching", "1",
                           "--depth", "2")
    assert code == 0
    assert json.loads(out) == {"worlds": ["e", "1", "1.1"],
                               "rel": {"1": [["1", "1.1"], ["e", "1"]]}}

    code, out, _ = run_cli(capsys, "tree", "--kind", "in", "--branching", "1",
                           "--depth", "2", "--nof")
    assert code == 0
    assert json.loads(out) == {"worlds": ["e", "1", "1.1"],
                               "base": {"1": {"e": [["1"]], "1": [["1.1"]],
                                              "1.1": [[]]}}}


# --- verify -----------------------------------------------------------------------

def test_verify_chain(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "chain", "--kind",
                           "rt", "--branching", "2", "--depth", "4")
    assert code == 0
    data = json.loads(out)
    assert data["lemma"] == "chain"
    assert data["pass"] is True
    assert data["counterexample"] is None
    assert data["params"]["bounds"] == {"m": 8, "k": 8, "d": 4}
    assert "millis" not in data


def test_verify_timings_flag(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "fractal",
                           "--depth", "3", "--timings")
    assert code == 0
    assert "millis" in json.loads(out)


def test_verify_g_morphism_kind_pair(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "g-morphism",
                           "--kind1", "rt", "--kind2", "it", "--depth", "3")
    assert code == 0
    data = json.loads(out)
    assert data["params"]["kind1"] == "rt"
    assert data["params"]["kind2"] == "it"


def test_verify_lex_suite(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "lex", "--kind", "rt",
                           "--depth", "3")
    assert code == 0
    data = json.loads(out)
    assert data["lemma"] == "lex"
    assert data["params"]["k_values"] == [1, 2]


def test_verify_sweep_records_seed(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "finite-com",
                           "--seed", "5")
    assert code == 0
    assert json.loads(out)["params"]["seed"] == 5


def test_verify_determinism(capsys):
    argv = ("verify", "--lemma", "finite-com", "--seed", "5")
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second


def test_verify_budget_marker(capsys):
    code, out, _ = run_cli(capsys, "verify", "--lemma", "chain",
                           "--branching", "3", "--depth", "14")
    assert code == 1
    assert "budget" in json.loads(out)


# --- countermodel --------------------------------------------------------------------

def test_countermodel_com(capsys):
    code, out, _ = run_cli(capsys, "countermodel", "--axiom", "com",
                           "--kind1", "in", "--kind2", "in")
    assert code == 0
    data = json.loads(out)
    assert data["accepted"] is True
    assert data["axiom"] == "com"
    assert data["bounds"] == {"m": 8, "k": 8, "d": 4}


def test_countermodel_chr_wide_bounds(capsys):
    code, out, _ = run_cli(capsys, "countermodel", "--axiom", "chr",
                           "--kind1", "rt", "--kind2", "rt",
                           "--bounds", "10,10,5")
    assert code == 0
    data = json.loads(out)
    assert data["accepted"] is True
    assert data["bounds"] == {"m": 10, "k": 10, "d": 5}


# --- failure modes ---------------------------------------------------------------------

def test_unknown_lemma_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--lemma", "nonsense")
    assert code == 2
    assert "invalid choice" in err


def test_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "mc", "--model",
                           str(tmp_path / "nope.json"), "--formula", "p")
    assert code == 2
    assert err.startswith("input error:")


def test_malformed_json_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = run_cli(capsys, "char", "--frame", str(bad))
    assert code == 2
    assert err.startswith("input error:")


def test_formula_error_exits_2(capsys):
    code, _, err = run_cli(capsys, "parse", "--formula", "[3] p")
    assert code == 2
    assert err.startswith("formula error:")


def test_bad_bounds_exit_2(capsys):
    code, _, err = run_cli(capsys, "verify", "--lemma", "chain",
                           "--bounds", "1,2")
    assert code == 2
    assert err.startswith("usage error:")
