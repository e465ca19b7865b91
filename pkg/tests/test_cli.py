import json
import subprocess
import sys

import pytest

from polyfact.cli import RunConfig, load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_brocard_example(capsys):
    code, out, _ = run(capsys, "hunt", "brocard", "--poly", "x^2-1", "--lmax", "100", "--no-meta")
    report = json.loads(out)
    assert code == 0
    assert sorted(s["x"] for s in report["solutions"] if s["x"] > 0) == [5, 11, 71]


def test_rep_test_example(capsys):
    code, out, _ = run(capsys, "rep", "test", "1,0,1", "45")
    d = json.loads(out)
    assert code == 0 and d["representable"] and d["witness"] == [6, 3] and d["agree"]


def test_fact_profile_example(capsys):
    _, out, _ = run(capsys, "fact", "profile", "--kind", "factorial", "--l", "10")
    assert json.loads(out)["factors"]["2"] == 8


def test_deterministic_json(capsys):
    argv = ["hunt", "certify", "--form", "x^2+y^2", "--range", "5:60", "--no-meta"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and "meta" not in json.loads(a)


@pytest.mark.parametrize(
    "argv",
    [
        ["form", "info", "x^4-y^4"],
        ["form", "cycletype", "x^3-2y^3", "--prime", "5"],
        ["form", "cycletype", "x^2+y^2", "--upto", "50", "--csv"],
        ["form", "pset", "x^2+y^2", "--upto", "50"],
        ["form", "pset", "x^2+y^2", "--upto", "500", "--residue", "3:4"],
        ["form", "density", "x^2+y^2", "--upto", "1000"],
        ["rep", "three-squares", "28"],
        ["pik", "profile", "--delta", "-4", "--l", "5"],
        ["pik", "count", "--delta", "-4", "--n", "25"],
        ["bharg", "profile", "--set", "AP 2 1", "--l", "3", "--primes", "5"],
        ["bharg", "order", "--set", "Z", "--p", "2", "--len", "3"],
        ["hunt", "family", "--arange", "4:30"],
        ["hunt", "gaps", "--residue", "3:4", "--range", "11:1000"],
        ["hunt", "gaps", "--form", "x^2+y^2", "--range", "11:1000", "--csv"],
    ],
)
def test_every_subcommand_succeeds(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip()


def test_csv_density(capsys):
    _, out, _ = run(capsys, "form", "density", "x^2+y^2", "--upto", "1000", "--csv")
    header, row = out.strip().splitlines()
    assert header.split(",")[:3] == ["form", "upto", "good_primes"]
    assert row.split(",")[3] == "80"


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "rep", "test", "x^2-2y^2", "7")[0] == 2
    assert run(capsys, "hunt", "certify", "--form", "x^2+y^2", "--range", "5-9")[0] == 2
    assert run(capsys, "hunt", "family", "--arange", "2:5")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["form", "nosuch"])
    assert exc.value.code == 2


def test_unknown_dominated_exit_1(capsys):
    code, out, _ = run(capsys, "hunt", "certify", "--form", "x^3-2y^3", "--range", "1:10", "--no-meta")
    verdicts = [e["verdict"] for e in json.loads(out)["entries"]]
    assert verdicts.count("Unknown") * 2 > len(verdicts)
    assert code == 1


def test_digit_bound_honoured(capsys):
    code, _, err = run(capsys, "hunt", "family", "--arange", "4:400", "--digit-bound", "50")
    assert code == 2 and "digit bound" in err


def test_config_file_and_override(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nl_min = 7\nl_max = 9\nratio = 1.5\n")
    assert load_config(cfg) == {"l_min": 7, "l_max": 9, "ratio": 1.5}
    _, out, _ = run(capsys, "hunt", "certify", "--form", "x^2+y^2", "--config", str(cfg), "--no-meta")
    assert json.loads(out)["range"] == {"lo": 7, "hi": 9}
    _, out, _ = run(capsys, "hunt", "gaps", "--residue", "3:4", "--range", "11:100", "--config", str(cfg))
    assert json.loads(out)["ratio"] == 1.5
    _, out, _ = run(capsys, "hunt", "gaps", "--residue", "3:4", "--range", "11:100", "--config", str(cfg),
                    "--ratio", "2")
    assert json.loads(out)["ratio"] == 2.0
    cfg.write_text("nonsense = 3\n")
    assert run(capsys, "hunt", "family", "--arange", "4:5", "--config", str(cfg))[0] == 2


def test_output_dir_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("POLYFACT_OUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "fact", "profile", "--kind", "lcm", "--l", "10", "-o", "lcm.json")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "lcm.json").read_text())["factors"]["2"] == 3


def test_runconfig_validation():
    with pytest.raises(ValueError):
        RunConfig(workers=0).validate()
    with pytest.raises(ValueError):
        RunConfig(ratio=1.0).validate()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "polyfact", "rep", "three-squares", "7"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["sum_of_three_squares"] is False
