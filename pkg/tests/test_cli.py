import json

import numpy as np
import pytest

from kreinfock.cli import main
from kreinfock.errors import ConfigInvalid, MetricInvalid, ParseError, SchemaError
from kreinfock.report import ANCHORS, RunConfig, catalog_json, list_models, load_model_file, run_suite


def metric_file(tmp_path, eta, statistics="bose", cutoff=3, name="custom", **extra):
    rows = [[{"re": float(np.real(x)), "im": float(np.imag(x))} for x in row] for row in np.asarray(eta)]
    data = {"name": name, "statistics": statistics, "dim": len(rows), "eta": {"rows": rows}, "cutoff": cutoff, **extra}
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data))
    return path


def records(report):
    return {r.name: r for r in report.records}


def test_abnormal_bose_suite():
    rep = run_suite(RunConfig("abnormal_bose", cutoff=3))
    assert rep.passed
    assert records(rep)["relation [a, a^dag] = -1.0000000000000000e+00+0.0000000000000000e+00j"].residual <= 1e-12


def test_brs_suite_reports_measured_constant():
    rep = run_suite(RunConfig("brs", {"a": "1.0"}))
    assert rep.passed
    rec = records(rep)["measured_commutator_constant"]
    assert rec.verdict == "info"
    assert rec.value.startswith("measured 0.0000000000000000e+00+1.0000000000000000e+00j")


def test_feynman_cutoff_one_rejected():
    with pytest.raises(ConfigInvalid):
        run_suite(RunConfig("feynman", cutoff=1, checks=("relations",)))


def test_bad_config():
    with pytest.raises(ConfigInvalid):
        run_suite(RunConfig("feynman", tol=-1.0))
    with pytest.raises(ConfigInvalid):
        run_suite(RunConfig("feynman", checks=("nonsense",)))


def test_informative_records_do_not_affect_verdict():
    rep = run_suite(RunConfig("feynman", cutoff=2))
    top = records(rep)["top-sector relation defect"]
    assert top.verdict == "info" and top.residual > 0
    assert rep.passed


def test_anchor_strings_from_table():
    rep = run_suite(RunConfig("froissart", {"pairs": 1}))
    anchors = set(ANCHORS.values())
    assert all(rec["anchor"] in anchors for rec in rep.to_dict()["checks"])


def test_load_identity_file(tmp_path):
    spec = load_model_file(metric_file(tmp_path, np.eye(2)))
    assert spec.statistics == "bose" and spec.d == 2
    rep = run_suite(RunConfig(str(metric_file(tmp_path, np.eye(2), "fermi", 2))))
    assert rep.passed


def test_file_eta0_matches_builtin_froissart(tmp_path):
    path = metric_file(tmp_path, [[0, 1], [1, 0]], name="froissart_file")
    from_file = run_suite(RunConfig(str(path), seed=5)).to_dict(include_time=False)
    builtin = run_suite(RunConfig("froissart", {"pairs": 1}, seed=5)).to_dict(include_time=False)
    assert from_file["overall"] == builtin["overall"] == "pass"
    strip = lambda d: [(c["residual"], c["verdict"]) for c in d["checks"] if not c["name"].startswith("relation [")]  # noqa: E731
    assert strip(from_file) == strip(builtin)


def test_non_involutive_file(tmp_path):
    with pytest.raises(MetricInvalid):
        load_model_file(metric_file(tmp_path, [[2, 0], [0, 1]]))


def test_malformed_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_model_file(bad)
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"name": "x", "dim": 1}))
    with pytest.raises(SchemaError):
        load_model_file(missing)
    with pytest.raises(SchemaError):
        load_model_file(metric_file(tmp_path, np.eye(2), statistics="anyon"))


def test_probe_with_wrong_expectation_fails(tmp_path):
    probe = {"f": [{"re": 1}, {"re": 0}], "g": [{"re": 0}, {"re": 1}], "expected": {"re": 0.5, "im": 0}}
    path = metric_file(tmp_path, [[0, 1], [1, 0]], probes=[probe])
    rep = run_suite(RunConfig(str(path), checks=("relations",)))
    assert not rep.passed


def test_catalog_is_stable():
    assert catalog_json() == catalog_json()
    assert [m["name"] for m in list_models()] == sorted(m["name"] for m in list_models())


def test_cli_list_models(capsys):
    assert main(["list-models"]) == 0
    names = [m["name"] for m in json.loads(capsys.readouterr().out)]
    assert set(names) == {"abnormal_bose", "abnormal_fermi", "froissart", "icar", "eta_theta_xi", "feynman", "brs", "two_field"}


def test_cli_verify_to_stdout(capsys):
    assert main(["verify", "--model", "icar", "--param", "pairs=1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["overall"] == "pass"
    assert list(report) == ["model", "params", "source", "overall", "checks", "environment"]


def test_cli_env_report_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("KREINFOCK_REPORT_DIR", str(tmp_path / "reports"))
    assert main(["verify", "--model", "abnormal_fermi"]) == 0
    assert json.loads((tmp_path / "reports" / "abnormal_fermi.json").read_text())["overall"] == "pass"


def test_cli_config_errors(tmp_path, capsys):
    assert main(["verify", "--model", "nope"]) == 2
    assert main(["verify", "--model", "feynman", "--cutoff", "1"]) == 2
    assert main(["verify", "--model", "froissart", "--param", "pairs=-3"]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert [json.loads(line)["error"] for line in err] == ["UnknownModel", "ConfigInvalid", "BadParams"]


def test_cli_size_overflow():
    assert main(["verify", "--model", "abnormal_bose", "--param", "modes=4", "--cutoff", "12"]) == 2


def test_cli_decompose(capsys):
    assert main(["decompose", "--model", "feynman", "--cutoff", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["one_particle"]["dim_plus"] == 3 and out["one_particle"]["dim_minus"] == 1
    assert out["fock"]["parity_partition_matches"] is True
    sectors = out["fock"]["sectors"]
    assert [s["dim_minus"] for s in sectors] == [0, 1, 3, 7]


def test_cli_timing_is_opt_in(tmp_path):
    plain, timed = tmp_path / "plain.json", tmp_path / "timed.json"
    assert main(["verify", "--model", "abnormal_bose", "--out", str(plain)]) == 0
    assert main(["verify", "--model", "abnormal_bose", "--out", str(timed), "--timing"]) == 0
    assert "wall_time_s" not in json.loads(plain.read_text())["environment"]
    assert json.loads(timed.read_text())["environment"]["wall_time_s"] >= 0
