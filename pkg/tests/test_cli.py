import csv
import io
import json

import pytest

from rclab.cli import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_VIOLATION,
    RunConfig,
    main,
    run,
    validate_config,
    validate_text,
)


def test_validate_empty_config():
    assert validate_text("") == ["missing command"]
    assert validate_text("{}") == ["missing command"]


def test_validate_bad_json():
    errors = validate_text("{not json")
    assert len(errors) == 1 and "not valid JSON" in errors[0]


def test_validate_range_errors_name_the_field():
    errors = validate_config({"command": "exact", "d": 2, "n": 1, "p": 1.5})
    assert any("'p'" in e and "[0, 1]" in e for e in errors)
    errors = validate_config({"command": "exact", "d": 2, "n": 1, "p": 0.5, "q": 0.5})
    assert any("'q'" in e and ">= 1" in e for e in errors)


def test_validate_unknown_command_and_option():
    assert "unknown command" in validate_config({"command": "nope"})[0]
    errors = validate_config({"command": "phi", "d": 2, "S": "box:1", "p-grid": "0.1:0.9:0.1", "bogus": 1})
    assert any("unknown option 'bogus'" in e for e in errors)


def test_validate_missing_required():
    errors = validate_config({"command": "phi", "d": 2})
    assert any("'S'" in e for e in errors)
    assert any("'p-grid'" in e for e in errors)


def test_validate_spec_strings():
    errors = validate_config(
        {"command": "simon", "d": 2, "p-grid": "0.2:0.8:0.2", "ambient": "blob:3", "s-radius": 1, "z": "2,2"}
    )
    assert any("'ambient'" in e for e in errors)
    errors = validate_config({"command": "ptilde", "d": 2, "family": "boxes:3..1"})
    assert any("'family'" in e for e in errors)


def test_run_rejects_invalid_config(capsys):
    assert run(RunConfig("exact", {"p": 1.5})) == EXIT_INVALID


def test_run_resource_cap():
    # 5x5 box has 40 edges, over the default enumeration cap
    code = main(["exact", "--d", "2", "--n", "2", "--p", "0.5", "--q", "2"])
    assert code == EXIT_RESOURCE


def test_phi_example_csv(tmp_path, capsys):
    out = tmp_path / "phi.csv"
    code = main(
        ["phi", "--d", "2", "--q", "2", "--S", "box:1", "--p-grid", "0.1:0.9:0.1", "--out", str(out)]
    )
    assert code == EXIT_OK
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["S_descriptor", "p", "q", "phi", "n_boundary_edges"]
    assert len(rows) == 10
    assert all(row[0] == "box:1" and row[4] == "12" for row in rows[1:])
    # re-serializing what was read is byte-identical
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    assert buf.getvalue() == out.read_text()


def test_ptilde_example_json(tmp_path):
    out = tmp_path / "bracket.json"
    code = main(
        ["ptilde", "--d", "2", "--q", "2", "--family", "boxes:0..1", "--tol", "1e-4", "--out", str(out)]
    )
    assert code == EXIT_OK
    text = out.read_text()
    payload = json.loads(text)
    assert payload["lower"] > 0.25
    assert payload["upper"] == 1.0
    assert payload["transcript"]
    # canonical JSON round-trips byte-identically
    assert json.dumps(payload, sort_keys=True, indent=2) + "\n" == text


def test_derivcheck_example(tmp_path):
    out = tmp_path / "deriv.jsonl"
    code = main(["derivcheck", "--region", "edge", "--q", "2", "--p", "0.5", "--out", str(out)])
    assert code == EXIT_OK  # non-strict by default
    (record,) = [json.loads(line) for line in out.read_text().splitlines()]
    assert record["lhs"] == pytest.approx(8.0 / 9.0, abs=1e-12)
    assert record["rhs"] == pytest.approx(1.0)
    assert record["holds"] is False
    # strict mode surfaces the discrepancy in the exit status
    code = main(["derivcheck", "--region", "edge", "--q", "2", "--p", "0.5", "--strict", "true"])
    assert code == EXIT_VIOLATION


def test_exact_and_susceptibility_records(tmp_path):
    out = tmp_path / "exact.jsonl"
    code = main(
        ["exact", "--d", "1", "--n", "1", "--q", "2", "--p", "0.5",
         "--x", "-1", "--y", "1", "--out", str(out)]
    )
    assert code == EXIT_OK
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert records[0]["quantity"] == "partition_function"
    assert records[0]["value"] == pytest.approx(4.5)
    assert records[1]["quantity"] == "connection_probability"
    assert records[1]["value"] == pytest.approx(1.0 / 9.0)

    out2 = tmp_path / "chi.jsonl"
    assert main(["susceptibility", "--d", "1", "--n", "1", "--q", "2", "--p", "0.5", "--out", str(out2)]) == EXIT_OK
    (record,) = [json.loads(line) for line in out2.read_text().splitlines()]
    assert record["value"] == pytest.approx(5.0 / 3.0)


def test_simon_command(tmp_path):
    out = tmp_path / "simon.jsonl"
    code = main(
        ["simon", "--d", "1", "--q", "2", "--p-grid", "0.2:0.8:0.2",
         "--ambient", "box:3", "--s-radius", "1", "--z", "3", "--out", str(out)]
    )
    assert code == EXIT_OK
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 4
    assert all(r["holds"] for r in records)


def test_markov_and_fkg_commands(tmp_path):
    assert main(["markov", "--d", "1", "--n", "2", "--q", "2", "--p", "0.5",
                 "--s-radius", "1", "--x", "1"]) == EXIT_OK
    assert main(["fkg", "--d", "2", "--n", "1", "--q", "2", "--p", "0.5"]) == EXIT_OK


def test_diffineq_command(tmp_path):
    out = tmp_path / "diff.jsonl"
    code = main(
        ["diffineq", "--d", "2", "--n", "1", "--q", "2", "--p-grid", "0.5:0.9:0.1",
         "--bracket-lower", "0.418", "--out", str(out)]
    )
    assert code == EXIT_OK
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 5 and all(r["holds"] for r in records)


def test_mc_commands_deterministic(tmp_path):
    args = ["mc", "--d", "2", "--n", "1", "--q", "2", "--p", "0.5",
            "--x", "0,0", "--y", "1,1", "--sweeps", "5000", "--seed", "42"]
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--out", str(out1)]) == EXIT_OK
    assert main(args + ["--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    record = json.loads(out1.read_text())
    assert record["seed"] == 42 and record["n_sweeps"] == 5000


def test_theta_and_fit_commands(tmp_path):
    out = tmp_path / "theta.jsonl"
    code = main(["theta", "--d", "2", "--q", "2", "--p", "0.8", "--n", "1,2",
                 "--sweeps", "4000", "--seed", "3", "--out", str(out)])
    assert code == EXIT_OK
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["n"] for r in records] == [1, 2]

    fit_out = tmp_path / "fit.json"
    code = main(["fit", "--d", "1", "--q", "2", "--p", "0.5", "--m", "4",
                 "--distances", "1,2,3", "--sweeps", "8000", "--seed", "3",
                 "--out", str(fit_out)])
    assert code == EXIT_OK
    payload = json.loads(fit_out.read_text())
    assert payload["rate"] is not None and len(payload["points"]) == 3


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "exact", "d": 1, "n": 0, "q": 2, "p": 0.25}))
    out = tmp_path / "out.jsonl"
    assert main(["exact", "--config", str(cfg), "--p", "0.5", "--out", str(out)]) == EXIT_OK
    record = json.loads(out.read_text().splitlines()[0])
    assert record["p"] == 0.5  # flag wins over the file

    # config for a different command is rejected
    assert main(["phi", "--config", str(cfg)]) == EXIT_INVALID


def test_validate_subcommand(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"command": "exact", "d": 1, "n": 1, "p": 0.5}))
    assert main(["validate", "--config", str(cfg)]) == EXIT_OK
    cfg.write_text(json.dumps({"command": "exact", "d": 1, "n": 1, "p": 2.0}))
    assert main(["validate", "--config", str(cfg)]) == EXIT_INVALID


def test_validate_agrees_with_run(tmp_path):
    good = {"command": "exact", "d": 1, "n": 1, "p": 0.5}
    bad = {"command": "exact", "d": 1, "n": 1, "p": 7.0}
    assert validate_config(good) == []
    assert run(RunConfig("exact", {k: v for k, v in good.items() if k != "command"})) == EXIT_OK
    assert validate_config(bad) != []
    assert run(RunConfig("exact", {k: v for k, v in bad.items() if k != "command"})) == EXIT_INVALID


def test_threads_do_not_change_output(tmp_path):
    base = ["simon", "--d", "1", "--q", "2", "--p-grid", "0.3:0.7:0.2",
            "--ambient", "box:2", "--s-radius", "1", "--z", "2"]
    out1, out2 = tmp_path / "t1.jsonl", tmp_path / "t2.jsonl"
    assert main(base + ["--threads", "1", "--out", str(out1)]) == EXIT_OK
    assert main(base + ["--threads", "3", "--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
