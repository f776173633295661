"""Smoke tests for the Python module and the bundled CLI."""

import json
import subprocess
from pathlib import Path

import jsonschema
import pytest

import medz

REPO = Path(__file__).resolve().parents[2]
SCHEMA = json.loads((REPO / "schemas" / "cli_output.schema.json").read_text())


def test_hamming():
    assert medz.hamming("100", "011", pairs=1) == 3
    assert medz.hamming("0000", "0000") == 0


def test_medians():
    d = medz.medians(["00", "11"])
    assert d["base"] == "00"
    assert d["ambiguous_coordinates"] == [0, 1]
    assert sorted(d["medians"]) == ["00", "01", "10", "11"]
    assert d["min_total_distance"] == 2


def test_partition_function():
    d = medz.partition_function(["00", "11"])
    assert d["Z"] == "6"
    assert d["median_count"] == "4"
    # identity weight: 0*2 + 1*1 + 1*1 + 2*0 over the four medians
    assert medz.partition_function(["00", "11"], weight="identity")["Z"] == "2"


def test_count_sat_matches_brute_force():
    dimacs = "p cnf 3 1\n1 2 3 0\n"
    d = medz.count_sat(dimacs)
    assert d["gamma"] == "7" == medz.brute_force_count(dimacs)
    for rep in d["primes"]:
        assert rep["gamma_mod_p"] * rep["K_mod_p"] % rep["p"] == rep["T_mod_p"]


def test_guards_raise():
    with pytest.raises(ValueError):
        medz.hamming("01", "0110")
    with pytest.raises(RuntimeError):
        medz.partition_function([format(i, "030b") for i in (0, 2**30 - 1)])


def test_tables_and_separation():
    rep = medz.verify_tables()
    assert rep["table1_multisets_ok"] and rep["table3_multisets_ok"]
    assert len(rep["mismatches"]) == 5
    sep = medz.verify_separation(3, 1)
    assert sep["h3_lt_h0"] and sep["h3_lt_h1"] and sep["h3_lt_h2"]
    tree = medz.verify_tree_separation(3, 1)
    assert tree["ratio_lt_1"] and tree["log10_ratio"] < 0


def test_trees():
    labels = {"A": "00", "B": "11"}
    d = medz.tree_score("(A,B);", labels)
    assert d["score"] == 2 and d["mpl_count"] == 4
    assert medz.tree_count("(A,B);", labels) == "6"


def test_mcmc():
    d = medz.diagnose(["00", "11"])
    assert d["stationary_exact"]
    assert d["pi"] == ["1/3", "1/6", "1/6", "1/3"]
    strings = medz.torpid_instance(3, 2)
    assert len(strings) == 4
    phi = medz.conductance(strings, cut=[0, 1, 2, 4])
    assert phi == "1/12"
    assert medz.torpid_bound(3, 2) == "1/3"


CLI_CASES = [
    ["z", "--strings", "{b}", "--pairs", "0"],
    ["medians", "--strings", "{b}", "--pairs", "0"],
    ["count-sat", "--cnf", "{g}", "--mode", "practical"],
    ["reduce-d3", "--cnf", "{g}"],
    ["xor-augment", "--cnf", "{g}"],
    ["verify-tables"],
    ["tree-score", "--tree", "{t}", "--labels", "{l}", "--pairs", "0"],
    ["tree-count", "--tree", "{t}", "--labels", "{l}", "--pairs", "0"],
    ["sample", "--strings", "{b}", "--pairs", "0", "--steps", "20", "--seed", "1"],
    ["diagnose", "--strings", "{b}", "--pairs", "0", "--metropolis"],
    ["build-gadget", "--cnf", "{g}", "--kind", "up", "--blueprint-out", "{bp}"],
]


@pytest.fixture(scope="module")
def inputs(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "b.txt").write_text("00\n11\n")
    (d / "g.cnf").write_text("p cnf 3 1\n1 2 3 0\n")
    (d / "t.nwk").write_text("((A,B),(C,D));\n")
    (d / "l.tsv").write_text("A\t00\nB\t01\nC\t10\nD\t11\n")
    return {
        "{b}": str(d / "b.txt"),
        "{g}": str(d / "g.cnf"),
        "{t}": str(d / "t.nwk"),
        "{l}": str(d / "l.tsv"),
        "{bp}": str(d / "bp.txt"),
    }


@pytest.mark.parametrize("case", CLI_CASES, ids=lambda c: c[0])
def test_cli_output_validates_against_schema(case, inputs):
    cmd = [medz.cli_path()] + [inputs.get(a, a) for a in case]
    out = subprocess.run(cmd, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    doc = json.loads(out.stdout)
    assert doc["subcommand"] == case[0]
    jsonschema.validate(doc, SCHEMA)


def test_cli_deterministic_across_jobs(inputs):
    base = [medz.cli_path(), "z", "--strings", inputs["{b}"], "--pairs", "0"]
    one = subprocess.run(base + ["--jobs", "1"], capture_output=True, text=True)
    four = subprocess.run(base + ["--jobs", "4"], capture_output=True, text=True)
    assert one.returncode == four.returncode == 0
    assert one.stdout == four.stdout


def test_cli_exit_codes(inputs, tmp_path):
    bad = tmp_path / "bad.cnf"
    bad.write_text("not a cnf\n")
    r = subprocess.run(
        [medz.cli_path(), "count-sat", "--cnf", str(bad)], capture_output=True
    )
    assert r.returncode == 2
    big = tmp_path / "big.txt"
    big.write_text(
        "".join(format(i, "030b")[:30] + "\n" for i in (0, 2**30 - 1))
    )
    r = subprocess.run(
        [medz.cli_path(), "z", "--strings", str(big), "--pairs", "0"],
        capture_output=True,
    )
    assert r.returncode == 3
