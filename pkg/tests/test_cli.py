import csv
import io
import json
import subprocess
import sys

import pytest

from dioflow import cli


def run(argv, capsys):
    rc = cli.main(argv)
    out = capsys.readouterr().out
    return rc, out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_best_three_tenths(capsys):
    rc, out = run(["approx", "best", "--theta", "3/10", "--qmax", "20"], capsys)
    assert rc == 0
    got = rows(out)
    assert [(r["q"], r["p"]) for r in got] == [("1", "0"), ("3", "1"), ("10", "3")]
    assert got[-1]["terminated"] == "True"


def test_best_zero_vector(capsys):
    rc, out = run(["approx", "best", "--theta", "0,0", "--dim", "2"], capsys)
    got = rows(out)
    assert rc == 0 and len(got) == 1 and got[0]["terminated"] == "True"


def test_eighteen_digit_output(capsys):
    _, out = run(["approx", "best", "--theta", "3/10", "--qmax", "20"], capsys)
    r = rows(out)[1]
    mantissa = r["disp_norm"].split("e")[0]
    assert float(r["disp_norm"]) == 0.3
    assert len(mantissa.replace(".", "").lstrip("-")) == 18


def test_eps_reproducible_across_threads(capsys, tmp_path):
    outs = []
    for threads in ("1", "3"):
        path = tmp_path / f"eps{threads}.csv"
        rc = cli.main(["approx", "eps", "--theta", "rand", "--bits", "128", "--seed", "7", "--eps", "1/2", "--qmax", "100000", "--threads", threads, "--out", str(path)])
        assert rc == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_json_format(capsys):
    rc, out = run(["approx", "best", "--theta", "3/10", "--qmax", "20", "--format", "json"], capsys)
    data = json.loads(out)
    assert rc == 0 and len(data["rows"]) == 3


def test_xsection_filter(capsys):
    rc, out = run(["xsection", "visits", "--theta", "3/10", "--qmax", "20", "--filter", "b"], capsys)
    assert rc == 0
    assert [r["q"] for r in rows(out)] == ["1", "3", "10"]


def test_verify_prefix(capsys):
    rc, out = run(["verify", "prefix", "--theta", "rand", "--dim", "2", "--qmax", "20000", "--seed", "3"], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert rc == 0
    assert {r["law"] for r in recs} == {"prefix_b", "prefix_eps"}
    assert all("k0" in r and r["l0"] == 0 for r in recs)


def test_verify_definition_small(capsys):
    rc, out = run(["verify", "definition", "--samples", "3", "--qmax", "300"], capsys)
    assert rc == 0 and json.loads(out)["pass"] is True


def test_verify_congruence_reports_classes(capsys):
    rc, out = run(["verify", "congruence", "--mod", "2,3", "--samples", "3000", "--seed", "1"], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert rc in (0, 1)
    assert {r["law"] for r in recs} == {"congruence_d1_m2", "congruence_d2_m2", "congruence_d1_m3", "congruence_d2_m3"}
    assert all(r["nonprimitive"] == 0 for r in recs)


def test_field_report(capsys):
    rc, out = run(["field", "--minpoly", "1,1,-2,-1", "--qmax", "100000"], capsys)
    rep = json.loads(out)
    assert rc == 0 and float(rep["eps0"]["running_min"]) > 0


def test_field_not_totally_real(capsys):
    rc = cli.main(["field", "--minpoly", "1,0,0,-2"])
    err = capsys.readouterr().err
    assert rc == 2 and "NotTotallyReal" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["approx", "best", "--theta", "3/10", "--norm", "taxicab"],
        ["approx", "best", "--theta", "1/2,1/3", "--dim", "3"],
        ["approx", "eps", "--theta", "3/10", "--eps", "-1"],
        ["approx", "best", "--theta", "3/10", "--config", "/nonexistent/file.cfg"],
    ],
)
def test_bad_input_exit_code(argv, capsys):
    assert cli.main(argv) == 2


def test_config_round_trip(tmp_path):
    text = "# experiment\nnorm = euclid\n\ndim = 2\nqmax = 5000  \ntheta = rand\n"
    cfg = cli.ExperimentConfig.parse(text)
    assert cfg.dump().split() == text.split()
    again = cli.ExperimentConfig.parse(cfg.dump())
    assert again.as_dict() == cfg.as_dict()


def test_config_defaults_and_save(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("theta = 3/10\nqmax = 20\n")
    saved = tmp_path / "saved.cfg"
    rc = cli.main(["approx", "best", "--config", str(cfg), "--save-config", str(saved)])
    out = capsys.readouterr().out
    assert rc == 0 and len(rows(out)) == 3
    eff = cli.ExperimentConfig.load(str(saved)).as_dict()
    assert eff["theta"] == "3/10" and eff["qmax"] == "20"
    rc = cli.main(["approx", "best", "--config", str(saved), "--qmax", "5"])
    assert len(rows(capsys.readouterr().out)) == 2


def test_stats_hist(tmp_path, capsys):
    data = tmp_path / "x.csv"
    data.write_text("v\n" + "\n".join(str(i / 100) for i in range(100)) + "\n")
    rc, out = run(["stats", "hist", "--input", str(data), "--column", "v", "--bins", "4", "--ref", "ball:1"], capsys)
    got = rows(out)
    assert rc == 0 and [int(r["count"]) for r in got] == [25, 25, 25, 25]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dioflow", "approx", "best", "--theta", "3/10", "--qmax", "20"], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.strip().splitlines()) == 4
