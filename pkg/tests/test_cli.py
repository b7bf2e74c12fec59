"""End-to-end command-line checks: formats, exit codes, determinism."""

import json

import numpy as np
import pytest

from homoflow import cli, solutions

import reference_values as ref


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_elliptic_table(capsys, tmp_path):
    code, out, _ = run(capsys, ["elliptic", "table", "--kappa-min", "0",
                                "--kappa-max", "2", "--points", "5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "kappa,F,E,dF,dE,H"
    assert len(lines) == 6
    first = [float(v) for v in lines[1].split(",")]
    assert first[1] == pytest.approx(np.pi / 2)
    assert first[5] == pytest.approx(np.pi ** 2 / 6)
    # file output
    path = tmp_path / "table.csv"
    code, out, _ = run(capsys, ["elliptic", "table", "--kappa-min", "0",
                                "--kappa-max", "2", "--points", "5",
                                "--out", str(path)])
    assert code == 0 and path.read_text().splitlines()[0] == lines[0]


def test_landau_eval_and_profile(capsys):
    code, out, _ = run(capsys, ["landau", "eval", "--kappa", "1",
                                "--theta", str(np.pi / 2)])
    assert code == 0
    payload = json.loads(out)
    assert payload["v_theta"] == pytest.approx(-2 * np.tanh(1.0))
    code, out, _ = run(capsys, ["landau", "eval", "--kappa", "1",
                                "--theta", "0.5", "--psi", "1.0"])
    assert code == 0 and len(json.loads(out)["u"]) == 3

    code, out, _ = run(capsys, ["landau", "profile", "--kappa", "1",
                                "--points", "200"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "theta,v,f,p,phi"
    assert len(lines) == 201


def test_landau_force(capsys):
    code, out, _ = run(capsys, ["landau", "force", "--kappa", "1"])
    assert code == 0
    payload = json.loads(out)
    b = np.asarray(payload["b"])
    assert np.linalg.norm(b) > 0
    assert abs(b[0]) < 1e-10 and abs(b[1]) < 1e-10
    assert payload["A"] == pytest.approx(1 / np.tanh(1.0))
    assert payload["c"] == pytest.approx(1 / np.tanh(1.0) - 1.0)


def test_landau_force_deterministic(capsys):
    _, out1, _ = run(capsys, ["landau", "force", "--kappa", "0.7"])
    _, out2, _ = run(capsys, ["landau", "force", "--kappa", "0.7"])
    assert out1 == out2


def test_hamel_solve_trivial_modes_exit_numeric(capsys):
    code, _, err = run(capsys, ["hamel", "solve", "--k", "2"])
    assert code == 3
    assert "trivial" in err
    code, _, err = run(capsys, ["hamel", "solve", "--k", "1"])
    assert code == 3


def test_hamel_solve_mode3(capsys, tmp_path):
    csv_path = tmp_path / "prof.csv"
    code, out, _ = run(capsys, ["hamel", "solve", "--k", "3",
                                "--points", "6000",
                                "--csv", str(csv_path)])
    assert code == 0
    payload = json.loads(out)
    assert payload["kappa"] == pytest.approx(ref.KAPPA_3, abs=1e-9)
    assert payload["b"] == pytest.approx(ref.B_3, abs=1e-7)
    assert payload["energy_drift"] < 1e-10
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "theta,f,p"
    assert len(lines) >= 6001


def test_hamel_sweep(capsys):
    code, out, _ = run(capsys, ["hamel", "sweep", "--kmax", "5"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    last = [float(v) for v in lines[-1].split(",")]
    assert last[0] == 5
    assert last[4] == pytest.approx(ref.AMP_LIMIT, rel=1e-10)


def test_hamel_green(capsys):
    code, out, _ = run(capsys, ["hamel", "green", "--i", "1", "--j", "1",
                                "--x", "1.0", "--y", "0.0"])
    assert code == 0
    payload = json.loads(out)
    assert payload["G"][0] == pytest.approx(-1 / (4 * np.pi))


def test_solve_writes_verifiable_profile(capsys, tmp_path):
    out_path = tmp_path / "profile.json"
    code, _, err = run(capsys, ["solve", "--n", "4", "--grid", "48",
                                "--seed", "3", "--out", str(out_path)])
    assert code == 0
    doc = solutions.load_solution(out_path)
    assert doc["schema_version"] == solutions.SCHEMA_VERSION
    assert doc["kind"] == "profile"
    assert max(abs(v) for v in doc["g"]) < 1e-8
    assert doc["residuals"]["eq2"] < 1e-10
    assert doc["provenance"]["tool_version"]

    report = tmp_path / "report.json"
    code, out, _ = run(capsys, ["verify", "--field", "profile-file",
                                "--profile", str(out_path),
                                "--report", str(report)])
    assert code == 0
    rep = json.loads(report.read_text())
    assert rep["pass"] is True


def test_solve_deterministic_modulo_timestamp(capsys, tmp_path):
    docs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        code, _, _ = run(capsys, ["solve", "--n", "5", "--grid", "40",
                                  "--seed", "11", "--out", str(path)])
        assert code == 0
        doc = solutions.load_solution(path)
        doc["provenance"].pop("timestamp")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_solution_file_roundtrip_bit_exact(capsys, tmp_path):
    path = tmp_path / "p.json"
    run(capsys, ["solve", "--n", "4", "--grid", "40", "--seed", "1",
                 "--out", str(path)])
    doc = solutions.load_solution(path)
    prof = solutions.profile_from_document(doc)
    assert prof.thetas.tolist() == doc["thetas"]
    assert prof.g.tolist() == doc["g"]
    # schema version is enforced
    doc_bad = json.loads(path.read_text())
    doc_bad["schema_version"] = 99
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc_bad))
    with pytest.raises(ValueError):
        solutions.load_solution(bad)


def test_solve_init_file_roundtrip(capsys, tmp_path):
    first = tmp_path / "first.json"
    run(capsys, ["solve", "--n", "4", "--grid", "40", "--seed", "2",
                 "--out", str(first)])
    second = tmp_path / "second.json"
    code, _, _ = run(capsys, ["solve", "--n", "4",
                              "--init-file", str(first),
                              "--out", str(second)])
    assert code == 0
    code, _, err = run(capsys, ["solve", "--n", "5",
                                "--init-file", str(first),
                                "--out", str(second)])
    assert code == 2


def test_verify_landau_and_hamel(capsys, tmp_path):
    report = tmp_path / "rep.json"
    code, _, _ = run(capsys, ["verify", "--field", "landau",
                              "--kappa", "1.0", "--points", "30",
                              "--report", str(report)])
    assert code == 0
    rep = json.loads(report.read_text())
    assert rep["pass"] and abs(rep["order"] - 2.0) < 0.3
    assert rep["seed"] == 39

    code, _, _ = run(capsys, ["verify", "--field", "green",
                              "--report", str(report)])
    assert code == 0
    assert json.loads(report.read_text())["kind"] == "stokes"

    code, _, _ = run(capsys, ["verify", "--field", "hamel", "--k", "3",
                              "--points", "20", "--report", str(report)])
    assert code == 0


def test_verify_tight_tolerance_fails_cleanly(capsys, tmp_path):
    report = tmp_path / "rep.json"
    code, _, _ = run(capsys, ["verify", "--field", "landau",
                              "--kappa", "1.0", "--points", "20",
                              "--tol", "1e-15",
                              "--report", str(report)])
    assert code == 4
    assert json.loads(report.read_text())["pass"] is False


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["landau", "eval", "--bogus", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--n", "7", "--out", "x.json"])
    assert exc.value.code == 2


def test_verify_missing_profile_is_usage_error(capsys):
    code, _, err = run(capsys, ["verify", "--field", "profile-file",
                                "--report", "r.json"])
    assert code == 2
    assert "profile" in err


def test_environment_seed_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HOMOFLOW_SEED", "123")
    report = tmp_path / "rep.json"
    code, _, _ = run(capsys, ["verify", "--field", "landau",
                              "--kappa", "1.0", "--points", "10",
                              "--report", str(report)])
    assert code == 0
    assert json.loads(report.read_text())["seed"] == 123


def test_suite_json_output(capsys, monkeypatch):
    from homoflow import acceptance

    def fake_pass():
        return acceptance.CriterionResult("stub pass", True, "ok", 0.0)

    def fake_fail():
        return acceptance.CriterionResult("stub fail", False, "nope", 0.0)

    monkeypatch.setattr(acceptance, "CRITERIA", [fake_pass])
    code, out, _ = run(capsys, ["suite", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["all_passed"] is True
    assert payload["results"][0]["criterion"] == "stub pass"

    monkeypatch.setattr(acceptance, "CRITERIA", [fake_pass, fake_fail])
    code, out, _ = run(capsys, ["suite", "--json"])
    assert code == 4
    assert json.loads(out)["all_passed"] is False
