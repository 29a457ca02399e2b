"""Command-line reports: shape, determinism, witness replay, exit codes."""

import json

import pytest

from glab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


# -- report envelope


def test_envelope_and_thick_analyze(capsys):
    code, rep = run_cli(capsys, "thick", "analyze",
                        "--group", "Cyc(6)", "--set", "arc(1)")
    assert code == 0
    assert set(rep) == {"config", "results", "schema_version", "task",
                        "timings", "version"}
    assert rep["task"] == "thick.analyze"
    assert rep["config"] == {"group": "Cyc(6)", "probe_normal": False,
                             "set": "arc(1)"}
    assert rep["results"] == {
        "cover_verified": True,
        "genericity": {"m": 2, "translators": [0, 3]},
        "group": "Cyc(6)",
        "set_size": 3,
        "subgroup_certificate": {
            "index": 1, "index_at_most_m": True, "is_subgroup": True,
            "m": 2, "power_exponent": 4, "power_order": 6,
            "subgroup_members": ["0", "1", "2", "3", "4", "5"]},
        "thickness": {"status": "exact", "value": 4, "witness": [0, 2, 4]},
        "witness_verified": True,
    }


def test_probe_normal_is_marked_experimental(capsys):
    code, rep = run_cli(capsys, "thick", "analyze", "--group", "Cyc(6)",
                        "--set", "arc(1)", "--probe-normal")
    assert code == 0
    probe = rep["results"]["normal_core_probe"]
    assert probe == {"certificate_m": 2, "core_index": 1, "core_order": 6,
                     "core_thickness": 2, "experimental": True,
                     "power_order": 6}


# -- determinism: identical reports (minus timings) across repeat runs


@pytest.mark.parametrize("argv", [
    ("thick", "analyze", "--group", "Cyc(12)", "--set", "arc(1)"),
    ("ext", "split", "--base", "Sym(3)", "--p", "3",
     "--cocycle", "coboundary", "--seed", "5"),
    ("perm", "identities", "--n", "6", "--m-max", "2", "--half-max", "1",
     "--samples", "25"),
    ("chevalley", "class-cube", "--rank", "1", "--p", "7"),
])
def test_byte_determinism(capsys, argv):
    def stripped():
        code = main(list(argv))
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        del rep["timings"]
        return json.dumps(rep, sort_keys=True)

    assert stripped() == stripped()


# -- chevalley subcommands


def test_verify_relations_rank1(capsys):
    code, rep = run_cli(capsys, "chevalley", "verify-relations",
                        "--rank", "1", "--p", "5")
    assert code == 0
    assert rep["results"] == {
        "structure_constants": {"constants": {}, "failures": 0},
        "torus_conjugation": {"checked": 40, "failures": 0},
        "unipotent_factorization": {
            "bijective": True, "count": 5, "distinct": 5, "expected": 5},
        "weyl_torus_action": {"checked": 80, "failures": 0}}


def test_class_cube_rank1(capsys):
    code, rep = run_cli(capsys, "chevalley", "class-cube",
                        "--rank", "1", "--p", "5")
    assert code == 0
    assert rep["results"]["group"] == "SL(2,5)"
    assert rep["results"]["instances"] == [
        {"class_size": 30, "cube_is_group": True, "min_power": 2,
         "square_covers_complement": True, "t": "2,0,0,3"},
        {"class_size": 30, "cube_is_group": True, "min_power": 2,
         "square_covers_complement": True, "t": "3,0,0,2"}]


def test_gauss_prescribed(capsys):
    code, rep = run_cli(capsys, "chevalley", "gauss", "--rank", "1",
                        "--p", "5", "--g", "1,1,1,2", "--t", "2,0,0,3")
    assert code == 0
    assert rep["results"] == {
        "conjugate": "2,1,1,1", "t": "2,0,0,3", "u": "1,3,0,1",
        "v": "1,0,3,1", "x": "1,0,1,1"}


def test_sequence(capsys):
    code, rep = run_cli(capsys, "chevalley", "sequence",
                        "--rank", "2", "--p", "11", "--m", "4")
    assert code == 0
    assert rep["results"] == {
        "elements": ["1,0,0,0,1,0,0,0,1", "2,0,0,0,1,0,0,0,6",
                     "4,0,0,0,1,0,0,0,3", "8,0,0,0,1,0,0,0,7"],
        "lam": [1, 1], "order": 10, "s": 2, "weights": [1, 1, 2]}


def test_sequence_field_too_small(capsys):
    code, rep = run_cli(capsys, "chevalley", "sequence",
                        "--rank", "2", "--p", "3", "--m", "4")
    assert code == 2
    assert rep["error"]["code"] == "field_too_small"


# -- perm subcommands


def test_perm_identities(capsys):
    code, rep = run_cli(capsys, "perm", "identities", "--n", "7",
                        "--m-max", "2", "--half-max", "1", "--samples", "40")
    assert code == 0
    assert rep["results"]["quotient_scan"] == {
        "counts": {"0": 7, "1": 210, "2": 2520}, "n": 7, "total": 2737}
    assert rep["results"]["merge_scan"]["shapes"] == {
        "1,1": {"instances": 840, "mode": "full"},
        "1,3": {"instances": 5040, "mode": "full"},
        "3,1": {"instances": 5040, "mode": "full"}}


def test_perm_express_with_replay(capsys):
    code, rep = run_cli(capsys, "perm", "express", "--group", "Alt(5)",
                        "--set", "union(class(e),class((1,2)(3,4)),class((1,2,3)))",
                        "--sigma", "(1,2,3,4,5)")
    assert code == 0
    assert rep["results"] == {
        "budget_guaranteed": False, "mode": "fallback", "pairs": None,
        "q1": "(1,2,3)", "q2": "(3,4,5)", "replayed": True}


def test_perm_distance(capsys):
    code, rep = run_cli(capsys, "perm", "distance", "--group", "Sym(4)",
                        "--sigma", "(1,2)", "--tau", "(1,2,3)")
    assert code == 0
    assert rep["results"] == {"k": 2}


# -- ext subcommands


def test_ext_build_carry(capsys):
    code, rep = run_cli(capsys, "ext", "build", "--base", "Cyc(2)",
                        "--p", "2", "--cocycle", "carry")
    assert code == 0
    assert rep["results"] == {"base_order": 2, "checked": 4,
                              "identity": "[0|0]", "order": 4, "p": 2}


def test_ext_split_coboundary(capsys):
    code, rep = run_cli(capsys, "ext", "split", "--base", "Sym(3)", "--p", "3",
                        "--cocycle", "coboundary", "--seed", "5")
    assert code == 0
    assert rep["results"]["splits"] is True
    assert len(rep["results"]["complement"]) == 6
    assert rep["results"]["complement"][0] == "[1|e]"


def test_ext_split_carry_does_not(capsys):
    code, rep = run_cli(capsys, "ext", "split", "--base", "Cyc(2)",
                        "--p", "2", "--cocycle", "carry")
    assert code == 0
    assert rep["results"] == {"assignments_tried": 2, "complement": None,
                              "splits": False}


def test_ext_bound(capsys):
    code, rep = run_cli(capsys, "ext", "bound", "--base", "Cyc(2)",
                        "--p", "2", "--cocycle", "carry", "--n-max", "3")
    assert code == 0
    assert rep["results"]["holds"] is True
    assert rep["results"]["levels"]["3"] == {
        "bound": [0, 1], "contained": True, "observed": [0, 1]}


def test_ext_iwasawa(capsys):
    code, rep = run_cli(capsys, "ext", "iwasawa", "--group", "SL(2,5)",
                        "--a", "class(0,1,4,0)",
                        "--b", "ball(2,0,0,3;1,1,0,1;20)")
    assert code == 0
    assert rep["results"] == {"M": 2, "N": 1, "bound": 16,
                              "holds": True, "k_min": 2}


# -- subset grammar


def test_subset_file_and_sym(capsys, tmp_path):
    listing = tmp_path / "subset.json"
    listing.write_text(json.dumps(["1"]))
    code, rep = run_cli(capsys, "thick", "analyze", "--group", "Cyc(6)",
                        "--set", f"union(class(0),sym(file({listing})))")
    assert code == 0
    # {0} union sym({1}) = {0, 1, 5}: same analysis as arc(1)
    assert rep["results"]["set_size"] == 3
    assert rep["results"]["thickness"]["value"] == 4


def test_subset_ball_radius(capsys):
    code, rep = run_cli(capsys, "thick", "analyze", "--group", "Cyc(12)",
                        "--set", "ball(1;2)")
    assert code == 0
    assert rep["results"]["set_size"] == 5  # {0, +-1, +-2}


def test_arc_needs_cyclic_group(capsys):
    code, rep = run_cli(capsys, "thick", "analyze", "--group", "Sym(4)",
                        "--set", "arc(1)")
    assert code == 2
    assert rep["error"]["code"] == "group_mismatch"


# -- exit codes and error payloads


def test_exit_1_property_failure(capsys):
    code, rep = run_cli(capsys, "perm", "express", "--group", "Alt(5)",
                        "--set", "class(e)", "--sigma", "(1,2,3)")
    assert code == 1
    assert rep["error"]["code"] == "search_exhausted"


def test_exit_2_subset_syntax(capsys):
    code, rep = run_cli(capsys, "thick", "analyze",
                        "--group", "Cyc(6)", "--set", "blob(1)")
    assert code == 2
    assert rep["error"]["code"] == "syntax_error"
    assert rep["error"]["details"]["position"] == 0
    assert "class/ball/arc/file/sym/union" in rep["error"]["details"]["expected"]


def test_exit_2_group_syntax(capsys):
    code, rep = run_cli(capsys, "thick", "analyze",
                        "--group", "Foo(3)", "--set", "arc(1)")
    assert code == 2
    assert rep["error"]["code"] == "syntax_error"
    assert rep["error"]["details"]["position"] == 0


def test_exit_3_order_cap(capsys):
    code, rep = run_cli(capsys, "thick", "analyze",
                        "--group", "Sym(9)", "--set", "arc(1)")
    assert code == 3
    assert rep["error"]["code"] == "order_cap_exceeded"
    assert rep["error"]["details"] == {"cap": 100000, "order": 362880}
