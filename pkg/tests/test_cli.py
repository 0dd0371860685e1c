"""End-to-end coverage of the command-line interface."""
import json
import os

import pytest

from valucb.cli import (
    CSV_COLUMNS,
    load_instance,
    main,
    parse_instance,
    records_to_csv,
    write_text_atomic,
)
from valucb.distributions import Bernoulli, Beta, Gaussian
from valucb.experiments import inline_entry, run_trials
from valucb.instance import BanditInstance

FULL_OBJ = {
    "arms": [
        {"kind": "bernoulli", "p": 0.4},
        {"kind": "beta", "alpha": 2.0, "beta": 3.0},
        {"kind": "beta", "mean": 0.5, "variance": 0.05},
        {"kind": "gaussian", "mu": 0.9, "sigma": 0.1},
    ],
    "sigma_bar_sq": 0.09,
    "subg_proxy": 0.5,
    "eps_v": 0.01,
}

TWO_ARM_OBJ = {
    "arms": [{"kind": "bernoulli", "p": 0.9}, {"kind": "bernoulli", "p": 0.1}],
    "sigma_bar_sq": 0.2,
}


def _write_instance(tmp_path, obj, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


# ------------------------------------------------------------ parsing


def test_parse_instance_all_arm_forms():
    inst = parse_instance(FULL_OBJ)
    assert inst.n_arms == 4
    assert inst.arms[0] == Bernoulli(0.4)
    assert inst.arms[1] == Beta(2.0, 3.0)
    assert isinstance(inst.arms[2], Beta)
    assert inst.arms[2].alpha == pytest.approx(2.0, rel=1e-12)
    assert inst.arms[2].beta == pytest.approx(2.0, rel=1e-12)
    assert inst.arms[3] == Gaussian(0.9, 0.1)
    assert inst.sigma_bar_sq == 0.09
    assert inst.subg_proxy == 0.5
    assert inst.eps_v == 0.01


def test_parse_instance_defaults():
    inst = parse_instance(TWO_ARM_OBJ)
    assert inst.subg_proxy is None
    assert inst.eps_v == 0.0


@pytest.mark.parametrize(
    "obj, match",
    [
        ([], "JSON object"),
        ({"arms": [{"kind": "bernoulli", "p": 0.5}]}, "missing required key"),
        ({"sigma_bar_sq": 0.2}, "missing required key"),
        ({"arms": "x", "sigma_bar_sq": 0.2}, "must be a list"),
        ({"arms": [5, 5], "sigma_bar_sq": 0.2}, "arm 0"),
        ({"arms": [{"p": 0.5}, {"p": 0.5}], "sigma_bar_sq": 0.2}, "'kind'"),
        (
            {"arms": [{"kind": "poisson", "lam": 1.0}], "sigma_bar_sq": 0.2},
            "unknown kind",
        ),
        (
            {"arms": [{"kind": "bernoulli"}, {"kind": "bernoulli"}], "sigma_bar_sq": 0.2},
            "missing parameter",
        ),
        (
            {"arms": [{"kind": "gaussian", "mu": 0.5}], "sigma_bar_sq": 0.2},
            "missing parameter",
        ),
        (
            {
                "arms": [
                    {"kind": "beta", "mean": 0.5, "variance": 0.4},
                    {"kind": "bernoulli", "p": 0.5},
                ],
                "sigma_bar_sq": 0.2,
            },
            "variance",
        ),
        (
            {
                "arms": [
                    {"kind": "gaussian", "mu": 0.5, "sigma": 0.1},
                    {"kind": "gaussian", "mu": 0.4, "sigma": 0.1},
                ],
                "sigma_bar_sq": 0.2,
            },
            "proxy",
        ),
    ],
)
def test_parse_instance_errors(obj, match):
    with pytest.raises(ValueError, match=match):
        parse_instance(obj)


def test_load_instance_roundtrip(tmp_path):
    path = _write_instance(tmp_path, FULL_OBJ)
    inst = load_instance(path)
    assert inst == parse_instance(FULL_OBJ)


def test_load_instance_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValueError, match="invalid JSON"):
        load_instance(str(path))


def test_load_instance_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_instance(str(tmp_path / "nope.json"))


# ------------------------------------------------------------ file output


def test_write_text_atomic(tmp_path):
    target = tmp_path / "out.txt"
    write_text_atomic(str(target), "first\n")
    assert target.read_text(encoding="utf-8") == "first\n"
    write_text_atomic(str(target), "second\n")
    assert target.read_text(encoding="utf-8") == "second\n"
    # no temp residue next to the target
    assert os.listdir(tmp_path) == ["out.txt"]


def test_records_to_csv():
    entry = inline_entry(parse_instance(TWO_ARM_OBJ))
    _, records = run_trials("valucb", entry, 0.2, 3, 11)
    text = records_to_csv(records)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    for trial, line in enumerate(lines[1:]):
        fields = line.split(",")
        assert len(fields) == len(CSV_COLUMNS)
        assert fields[0] == "valucb"
        assert fields[1] == "inline"
        assert int(fields[3]) == trial
        assert fields[7] in {"0", "1"}


# ------------------------------------------------------------ hardness command


def test_hardness_catalog_case(capsys):
    assert main(["hardness", "--case", "3", "--j", "0", "--delta", "0.1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["case"] == "3"
    assert payload["j"] == 0
    assert payload["n_arms"] == 20
    assert payload["sigma_bar_sq"] == 0.04
    assert payload["flag"] == 0
    assert payload["delta"] == 0.1
    assert payload["h_va"] == pytest.approx(200000.0, rel=1e-9)
    assert payload["h1"] is None
    assert payload["scale"] > 0.0
    assert payload["lower_bound"] > 0.0
    assert len(payload["terms"]) == 4


def test_hardness_instance_file_reports_subg(tmp_path, capsys):
    obj = {
        "arms": [
            {"kind": "gaussian", "mu": 0.9, "sigma": 0.1},
            {"kind": "gaussian", "mu": 0.1, "sigma": 0.1},
        ],
        "sigma_bar_sq": 0.04,
        "subg_proxy": 0.5,
    }
    path = _write_instance(tmp_path, obj)
    assert main(["hardness", "--instance", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["case"] == "inline"
    assert payload["h_va_sigma"] > 0.0
    assert payload["h_va_sigma_floor"] >= payload["h_va_sigma"]


def test_hardness_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(["hardness", "--case", "1a", "--j", "5", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["case"] == "1a"
    assert payload["h_va"] == pytest.approx(13208.446631187664, rel=1e-9)


@pytest.mark.parametrize(
    "argv",
    [
        ["hardness"],
        ["hardness", "--case", "1a"],
        ["hardness", "--j", "3"],
        ["hardness", "--case", "nope", "--j", "0"],
        ["hardness", "--case", "1a", "--j", "11"],
        ["hardness", "--case", "cmp", "--j", "0"],
        ["run", "--instance", "/nonexistent/instance.json", "--seed", "1"],
    ],
)
def test_bad_selection_exits_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_instance_and_catalog_conflict(tmp_path, capsys):
    path = _write_instance(tmp_path, TWO_ARM_OBJ)
    assert main(["hardness", "--instance", path, "--case", "1a", "--j", "0"]) == 2
    assert "not both" in capsys.readouterr().err


# ------------------------------------------------------------ catalog command


def test_catalog_table(capsys):
    assert main(["catalog"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 121
    assert lines[0].split() == ["case", "j", "arms", "flag", "h_va", "scale"]


def test_catalog_json_and_filter(capsys):
    assert main(["catalog", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 120
    assert set(rows[0]) == {"case", "j", "n_arms", "flag", "h_va", "scale"}
    assert main(["catalog", "--case", "cmp", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["j"] for r in rows] == list(range(1, 11))
    assert all(r["case"] == "cmp" for r in rows)


def test_catalog_rejects_unknown_case():
    with pytest.raises(SystemExit) as exc:
        main(["catalog", "--case", "zzz"])
    assert exc.value.code == 2


def test_catalog_out_file(tmp_path, capsys):
    out = tmp_path / "catalog.json"
    assert main(["catalog", "--json", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert len(json.loads(out.read_text(encoding="utf-8"))) == 120


# ------------------------------------------------------------ run command


def test_run_writes_aggregate_and_csv(tmp_path, capsys):
    path = _write_instance(tmp_path, TWO_ARM_OBJ)
    csv_path = tmp_path / "records.csv"
    out_path = tmp_path / "aggregate.json"
    argv = [
        "run", "--instance", path, "--trials", "2", "--seed", "5",
        "--delta", "0.2", "--csv", str(csv_path), "--out", str(out_path),
    ]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(out_path.read_text(encoding="utf-8"))
    assert payload["algorithm"] == "valucb"
    assert payload["case"] == "inline"
    assert payload["n_trials"] == 2
    assert payload["master_seed"] == 5
    assert payload["success_rate"] == 1.0
    assert payload["backend"] in {"python", "cython"}
    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3

    # same seed reproduces the records byte for byte, any worker count
    first = csv_path.read_bytes()
    rerun = tmp_path / "records2.csv"
    main(["run", "--instance", path, "--trials", "2", "--seed", "5",
          "--delta", "0.2", "--csv", str(rerun)])
    assert rerun.read_bytes() == first
    parallel = tmp_path / "records3.csv"
    main(["run", "--instance", path, "--trials", "2", "--seed", "5",
          "--delta", "0.2", "--parallel", "2", "--csv", str(parallel)])
    assert parallel.read_bytes() == first


def test_run_catalog_case_stdout(capsys):
    argv = ["run", "--case", "1d", "--j", "0", "--trials", "2", "--seed", "9",
            "--delta", "0.2", "--backend", "python"]
    assert main(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["case"] == "1d"
    assert payload["backend"] == "python"
    assert payload["n_trials"] == 2
    assert payload["mean_tau"] > 0.0


def test_run_va_uniform_algorithm(tmp_path, capsys):
    path = _write_instance(tmp_path, TWO_ARM_OBJ)
    argv = ["run", "--instance", path, "--algorithm", "va_uniform",
            "--trials", "2", "--seed", "3", "--delta", "0.2"]
    assert main(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["algorithm"] == "va_uniform"
    assert payload["success_rate"] == 1.0


def test_run_requires_seed(tmp_path):
    path = _write_instance(tmp_path, TWO_ARM_OBJ)
    with pytest.raises(SystemExit) as exc:
        main(["run", "--instance", path, "--trials", "1"])
    assert exc.value.code == 2


def test_run_rejects_unknown_algorithm(tmp_path):
    path = _write_instance(tmp_path, TWO_ARM_OBJ)
    with pytest.raises(SystemExit) as exc:
        main(["run", "--instance", path, "--seed", "1", "--algorithm", "magic"])
    assert exc.value.code == 2


# ------------------------------------------------------------ verify command


def test_verify_cli_small(capsys):
    rc = main(["verify", "--seed", "0", "--trials", "5", "--instances", "5"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.splitlines()
    assert lines[-1] == "8/8 checks passed"
    assert sum(1 for line in lines if line.startswith("ok  ")) == 8


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "valucb" in capsys.readouterr().out
