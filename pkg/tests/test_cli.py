import json

import jsonschema

from cyclecert.cli import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    main,
    schema_text,
)

SCHEMA = json.loads(schema_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def test_certify_proven(capsys):
    code, payload = run_json(capsys, "certify", "74")
    assert code == EXIT_OK
    assert payload["kind"] == "certificate"
    assert payload["clause"] == "A1_prime"
    assert payload["verdict"] == "proven_nontrivial"


def test_certify_unknown_exit_code(capsys):
    code, payload = run_json(capsys, "certify", "1")
    assert code == EXIT_UNKNOWN
    assert payload["verdict"] == "unknown"


def test_genus_x0(capsys):
    code, payload = run_json(capsys, "genus", "37", "--curve", "x0")
    assert code == EXIT_OK
    assert payload["genus"] == 2


def test_genus_x0star_and_xn(capsys):
    code, payload = run_json(capsys, "genus", "37", "--curve", "x0star")
    assert code == EXIT_OK
    assert payload["genus"] == 1 and payload["index"] is None
    code, payload = run_json(capsys, "genus", "1", "--curve", "xn")
    assert payload["index"] == 6 and payload["cusps"] == 3 and payload["genus"] == 0


def test_heegner_degree(capsys):
    code, payload = run_json(capsys, "heegner", "1", "-3", "1")
    assert code == EXIT_OK
    assert payload["divisors"][0]["degree"] == "1/3"


def test_heegner_all_r(capsys):
    code, payload = run_json(capsys, "heegner", "5", "-4")
    assert code == EXIT_OK
    assert payload["r_values"] == [4, 6]
    assert len(payload["divisors"]) == 2


def test_pullback_round_trip(capsys):
    code, payload = run_json(capsys, "pullback", "1", "--m0", "1", "--r", "0")
    assert code == EXIT_OK
    assert payload["round_trip_ok"] is True
    assert payload["round_trip_residual"] == []
    assert {t["coeff"] for t in payload["terms"]} == {"1", "-1"}


def test_lattice(capsys):
    code, payload = run_json(capsys, "lattice", "3")
    assert code == EXIT_OK
    assert payload["trace_zero"]["disc_group_order"] == 6
    assert payload["full"]["disc_group_order"] == 36


def test_newforms(capsys):
    code, payload = run_json(capsys, "newforms", "37")
    assert code == EXIT_OK
    assert any(r["analytic_rank"] == 1 for r in payload["records"])


def test_selftest(capsys):
    code, payload = run_json(capsys, "selftest")
    assert code == EXIT_OK
    assert payload["ok"] is True
    assert all(suite["fail"] == 0 for suite in payload["suites"].values())


def test_deterministic_output(capsys):
    _, first = run(capsys, "certify", "128")
    _, second = run(capsys, "certify", "128")
    assert first == second
    _, third = run(capsys, "heegner", "2", "-23", "1")
    _, fourth = run(capsys, "heegner", "2", "-23", "1")
    assert third == fourth


def test_usage_error_exit_code(capsys):
    assert main(["bogus"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["pullback", "1", "--m0", "x", "--r", "0"]) == EXIT_USAGE


def test_computation_error_exit_code(capsys):
    # congruence-violating pullback input parses but fails validation
    assert main(["pullback", "1", "--m0", "1/2", "--r", "0"]) == EXIT_ERROR
    assert main(["lattice", "0"]) == EXIT_ERROR


def test_text_format(capsys):
    code, out = run(capsys, "--format", "text", "genus", "37", "--curve", "x0")
    assert code == EXIT_OK
    assert "genus: 2" in out


def test_format_flag_after_subcommand(capsys):
    code, out = run(capsys, "genus", "37", "--curve", "x0", "--format", "text")
    assert code == EXIT_OK
    assert "genus: 2" in out
    code, out = run(capsys, "genus", "37")
    assert code == EXIT_OK
    assert out.lstrip().startswith("{")


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"cache_dir": str(tmp_path)}), encoding="utf-8")
    code, payload = run_json(capsys, "--config", str(cfg), "newforms", "37")
    assert code == EXIT_OK


def test_every_fixture_level_serves_valid_json(capsys):
    from cyclecert.newforms import fixture_levels

    for level in sorted(fixture_levels()):
        code, payload = run_json(capsys, "newforms", str(level))
        assert code == EXIT_OK
