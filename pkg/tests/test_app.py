import json

import pytest

import arrangelib.parameters as params
import arrangelib.utils as utils
from app import main
from arrangelib.cli import cmd_dual, cmd_info, cmd_verify
from arrangelib.exceptions import InvalidArgumentsException
from arrangelib.pair_file import load_pair_file, parse_pair


def _run(capsys, *argv):
    code = main(["--json", *argv])
    return code, json.loads(capsys.readouterr().out)


def test_info(capsys, samples):
    code, report = _run(capsys, "info", str(samples / "example1.json"))
    assert code == params.EXIT_OK
    sides = report[params.RESULTS]["sides"]
    assert sides[params.SIDE_PRIMAL][params.BETA] == 2
    assert sides[params.SIDE_DUAL][params.BETA] == 2
    assert report[params.VERDICT] == params.PASS


def test_digest_is_stable(samples):
    pair = load_pair_file(str(samples / "example1.json"))
    assert cmd_info(pair)[params.INPUTS_DIGEST] == cmd_info(pair)[params.INPUTS_DIGEST]


def test_reports_reparse(samples):
    pair = load_pair_file(str(samples / "example1.json"))
    report = cmd_dual(pair)
    again = json.loads(utils.decorate(report))
    assert again[params.RESULTS][params.DUAL_MATRIX] == [["1", "0", "-1", "-2"], ["0", "1", "-1", "-1"]]
    assert again[params.RESULTS][params.DET_COMPLETION] == "1"
    assert parse_pair(again[params.RESULTS]["dual_pair_file"]).k == 1


def test_verify_all_on_three_points(capsys, samples):
    code, report = _run(capsys, "verify", str(samples / "example1.json"), "--quad-degree", "16")
    assert code == params.EXIT_OK
    assert report[params.VERDICT] == params.PASS
    assert report[params.RESULTS]["main"][params.VALUE] == pytest.approx([1 / 36, 0.0], abs=1e-10)
    for side in (params.SIDE_PRIMAL, params.SIDE_DUAL):
        evaluation = report[params.RESULTS][f"evaluation_{side}"]
        assert evaluation["relabeling"]["permuted"] == params.DEFAULT_REMATCHINGS
        assert evaluation["rematching"]["distinct_drawn"] == evaluation["rematching"]["admissible_matchings"] == 1


def test_verify_single_check(samples):
    report = cmd_verify(load_pair_file(str(samples / "four-lines.json")), "minors")
    assert set(report[params.RESULTS]) == {"involution", "minors", "products"}
    assert report[params.VERDICT] == params.PASS
    with pytest.raises(InvalidArgumentsException):
        cmd_verify(load_pair_file(str(samples / "four-lines.json")), "everything")


def test_periods_of_a_triangle(capsys, tmp_path):
    triangle = tmp_path / "triangle.json"
    triangle.write_text(json.dumps({"k": 2, "B": [["1", "0", "1", "1"], ["0", "1", "1", "1"], ["0", "0", "-1", "1"]]}))
    code, report = _run(capsys, "periods", str(triangle))
    assert code == params.EXIT_OK
    assert report[params.RESULTS][params.BETA] == 1
    # a triangle is not half of a pair
    code, report = _run(capsys, "info", str(triangle))
    assert code == params.EXIT_DOMAIN_ERROR
    assert report[params.ERROR] == "NotAPairException"


def test_invalid_files(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"k": 1, "B": [["1", "1/0"]]}))
    code, report = _run(capsys, "info", str(broken))
    assert code == params.EXIT_INVALID_ARGUMENTS

    short = tmp_path / "short.json"
    short.write_text(json.dumps({"k": 1, "B": [["1", "1", "1", "0"], ["0", "-1", "-2", "1"]], "alpha": ["1"]}))
    code, _ = _run(capsys, "info", str(short))
    assert code == params.EXIT_INVALID_ARGUMENTS

    code, _ = _run(capsys, "info", str(tmp_path / "missing.json"))
    assert code == params.EXIT_INVALID_ARGUMENTS


def test_sample_is_a_pair(capsys):
    code, report = _run(capsys, "sample", "--k", "1", "--n", "2", "--seed", "5")
    assert code == params.EXIT_OK
    pair = parse_pair(report[params.RESULTS]["pair_file"])
    assert (pair.k, pair.N) == (1, 4)
    assert cmd_info(pair)[params.VERDICT] == params.PASS


def test_summary_rendering(samples):
    report = cmd_info(load_pair_file(str(samples / "example1.json")))
    text = utils.render_summary(report)
    assert text.startswith("info: pass")
    assert "beta_agrees: pass" in text
