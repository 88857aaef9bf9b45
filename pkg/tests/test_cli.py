import json

import pytest

from faradayct.cli import build_parser, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parser_defaults():
    args = build_parser().parse_args(["run", "--protocol", "ct-superposition"])
    assert (args.controls, args.mode, args.seed, args.loss_mode) == (1, "enumerate", 0, "strict")
    assert build_parser().parse_args(["phases"]).preset == "standard-tuning"


def test_phases_standard(capsys):
    code, out, err = run_cli(capsys, "phases", "--preset", "standard-tuning")
    d = json.loads(out)
    assert code == 0
    assert d["phi"] == pytest.approx(3.141592653589793, abs=1e-12)
    assert d["phi0"] == pytest.approx(1.5707963267948966, abs=1e-12)
    assert "phi = 3.14159" in err


def test_phases_variants(capsys):
    code, out, _ = run_cli(capsys, "phases", "--lambda", "0")
    d = json.loads(out)
    assert d["phi"] == pytest.approx(d["phi0"])
    code, out, err = run_cli(capsys, "phases", "--gamma", "0.01")
    assert code == 0 and "warning" in err and json.loads(out)["abs_r"] < 1
    code, _, err = run_cli(capsys, "phases", "--lambda", "0", "--omega-0", "-0.5")
    assert code == 2 and "vanishes" in err


def test_run_enumerate(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "ct-superposition", "--alpha", "0.6", "--beta", "0.8j")
    d = json.loads(out)
    assert code == 0 and d["n_branches"] == 8
    assert all(b["corrected_payload_fidelity"] == pytest.approx(1, abs=1e-10) for b in d["branches"])
    code, out, _ = run_cli(capsys, "run", "--protocol", "ct-entangled", "--controls", "2")
    assert json.loads(out)["n_branches"] == 64


def test_run_basis_payload(capsys):
    _, out, _ = run_cli(capsys, "run", "--protocol", "ct-superposition", "--alpha", "1", "--beta", "0")
    for b in json.loads(out)["branches"]:
        amps = [complex(*a) for a in b["residual"]["amplitudes"]]
        assert sorted(abs(a) for a in amps) == pytest.approx([0, 1])


def test_output_is_byte_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["sample", "--protocol", "cpt-entangled", "--controls", "2", "--seed", "9",
                     "--samples", "20", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    d = json.loads(paths[0].read_text())
    assert d["mode"] == "sample" and len(d["trace"]) == 20


def test_run_config_errors(capsys):
    assert run_cli(capsys, "run", "--protocol", "ct-superposition", "--alpha", "1", "--beta", "1")[0] == 2
    assert run_cli(capsys, "run", "--protocol", "ct-superposition", "--alpha", "x", "--beta", "1")[0] == 2
    assert run_cli(capsys, "run", "--protocol", "ct-superposition", "--gamma", "0.01")[0] == 2
    assert run_cli(capsys, "run", "--protocol", "nope")[0] == 2
    assert run_cli(capsys, "run", "--protocol", "ct-superposition", "--preset", "missing")[0] == 2


def test_lossy_run_in_renormalize_mode(capsys):
    code, out, _ = run_cli(capsys, "run", "--protocol", "ct-superposition", "--gamma", "0.01",
                           "--loss-mode", "renormalize")
    d = json.loads(out)
    assert code == 0
    assert all(0.999 < b["corrected_payload_fidelity"] < 1 for b in d["branches"])


def test_verify_tables(capsys):
    code, out, _ = run_cli(capsys, "verify-tables", "--table", "1")
    d = json.loads(out)
    assert code == 0 and d["reports"][0]["mismatches"] == 0
    code, out, err = run_cli(capsys, "verify-tables")
    assert code == 0 and "allowlisted row 26" in err


def test_verify_tables_failure_and_parse_error(capsys, tmp_path):
    from importlib import resources

    doc = json.loads(resources.files("faradayct").joinpath("data", "tables", "table1.json").read_text())
    doc["rows"][0]["correction"] = "X"
    bad = tmp_path / "t1.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run_cli(capsys, "verify-tables", "--file", str(bad), "--family", "ct-superposition")
    assert code == 1 and "MISMATCH row 0" in err
    bad.write_text("{")
    code, _, err = run_cli(capsys, "verify-tables", "--file", str(bad), "--family", "ct-superposition")
    assert code == 2 and "parse error" in err


def test_resources(capsys, tmp_path):
    code, out, err = run_cli(capsys, "resources")
    d = json.loads(out)
    assert d["success_probability"] == 7.125e-5 and round(d["expected_event_period_s"], 2) == 0.19
    code, out, _ = run_cli(capsys, "resources", "--paths", "2")
    d = json.loads(out)
    assert f"{d['success_probability']:.4g}" == "2.031e-08"
    assert round(d["expected_event_period_s"] / 60) == 11
    ones = tmp_path / "ones.json"
    ones.write_text(json.dumps(dict(t_fiber=1, t_optics=1, p_pol=1, eta_det=1, solid_angle=1,
                                    p_bell=0.25, source_rate=100.0)))
    code, out, _ = run_cli(capsys, "resources", "--model", str(ones), "--monte-carlo", "1000")
    d = json.loads(out)
    assert d["success_probability"] == 0.25
    assert d["expected_event_period_s"] == pytest.approx(1 / 25)
    assert d["monte_carlo"]["trials"] == 1000


def test_preset_directory_env(capsys, tmp_path, monkeypatch):
    (tmp_path / "loss-lab.json").write_text(json.dumps(dict(t_fiber=1, t_optics=1, p_pol=1, eta_det=1,
                                                            solid_angle=1, p_bell=0.5)))
    monkeypatch.setenv("FARADAYCT_PRESET_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, "resources", "--preset", "lab")
    assert code == 0 and json.loads(out)["success_probability"] == 0.5
