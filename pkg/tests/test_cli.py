"""Tests for the command-line driver.

Each subcommand is exercised in-process through ``main(argv)``: the eval
command's CSV/JSON outputs, the verify command's report files and exit
statuses, the table command's traces and figures, flag validation, the
precision environment override, and the convergence exit path.
"""

import csv
import json
import os

import pytest

from stokeslab.cli import (
    EXIT_CHECK_FAILED,
    EXIT_CONVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    main,
)

EVAL_HEADER = ["kind", "label", "component", "re", "im", "dps", "evaluator"]
TABLE_HEADER = ["trace", "n", "label", "x_name", "x", "value"]


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


# -- eval ----------------------------------------------------------------------------


def test_eval_default_selection_writes_all_labeled_solutions(tmp_path):
    out = str(tmp_path / "ev")
    code = main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "5/4",
         "--p-arg", "0.6", "--out", out]
    )
    assert code == EXIT_OK
    header, rows = read_csv(out + ".csv")
    assert header == EVAL_HEADER
    # one row per (solution label, component) pair
    assert len(rows) == 4
    assert {row[0] for row in rows} == {"psi_J"}
    assert {(row[1], row[2]) for row in rows} == {
        ("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")
    }
    for row in rows:
        float(row[3])
        float(row[4])
        assert row[5] == "40"

    sidecar = read_json(out + ".json")
    assert set(sidecar) == {"config", "flow_parameter", "provenance", "outputs"}
    assert sidecar["flow_parameter"] == {
        "form": "polar", "p_mod": "5/4", "p_arg": 0.6
    }
    assert sidecar["provenance"]["dps"] == 40
    assert sidecar["provenance"]["r_max"] == 400
    assert sidecar["outputs"]["csv"] == out + ".csv"
    assert sidecar["config"]["command"] == "eval"
    assert sidecar["config"]["z"] == ["3/10", "-2/5"]


def test_eval_single_label_selection(tmp_path):
    out = str(tmp_path / "m1")
    code = main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "5/4",
         "--m", "1", "--out", out]
    )
    assert code == EXIT_OK
    _, rows = read_csv(out + ".csv")
    assert len(rows) == 2
    assert all(row[0] == "psi_m" and row[1] == "1" for row in rows)


def test_eval_weighted_class_selection(tmp_path):
    out = str(tmp_path / "q")
    code = main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "5/4",
         "--Q", "X + 2", "--out", out]
    )
    assert code == EXIT_OK
    _, rows = read_csv(out + ".csv")
    assert len(rows) == 2
    assert all(row[0] == "psi_Q" and row[1] == "X + 2" for row in rows)


def test_eval_sector_form(tmp_path):
    out = str(tmp_path / "sec")
    code = main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--sector-r", "9/2",
         "--sector-phi", "1/8", "--out", out]
    )
    assert code == EXIT_OK
    sidecar = read_json(out + ".json")
    assert sidecar["flow_parameter"] == {
        "form": "sector", "sector_r": "9/2", "sector_phi": "1/8"
    }


def test_eval_seeded_parameters(tmp_path):
    out = str(tmp_path / "seeded")
    code = main(
        ["eval", "--n", "3", "--z-seed", "4", "--p-mod", "1", "--out", out]
    )
    assert code == EXIT_OK
    _, rows = read_csv(out + ".csv")
    assert len(rows) == 9


def test_eval_rejects_near_resonant_parameters(tmp_path, capsys):
    out = str(tmp_path / "bad")
    code = main(
        ["eval", "--n", "3", "--z", "0.31,-0.17,0.52", "--p-mod", "1",
         "--out", out]
    )
    assert code == EXIT_USAGE
    assert "margin" in capsys.readouterr().err
    assert not os.path.exists(out + ".csv")


@pytest.mark.parametrize(
    "argv",
    [
        # --z and --z-seed are mutually exclusive
        ["eval", "--n", "2", "--z", "0,1/2", "--z-seed", "1", "--p-mod", "1"],
        # rank is required
        ["eval", "--z", "3/10,-2/5", "--p-mod", "1"],
        # z length must match the rank
        ["eval", "--n", "3", "--z", "3/10,-2/5", "--p-mod", "1"],
        # some flow parameter is required
        ["eval", "--n", "2", "--z", "3/10,-2/5"],
        # polar and sector forms are mutually exclusive
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1",
         "--sector-r", "4", "--sector-phi", "1/8"],
        # sector form needs both flags
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--sector-r", "4"],
        # --m and --Q are mutually exclusive
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1",
         "--m", "1", "--Q", "X"],
        # malformed --z
        ["eval", "--n", "2", "--z", "3/10;-2/5", "--p-mod", "1"],
        # malformed --Q
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1",
         "--Q", "X + 2y"],
        # precision floor
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1",
         "--precision", "10"],
    ],
)
def test_usage_errors_exit_two(tmp_path, argv, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == EXIT_USAGE


def test_eval_convergence_failure_exits_three(tmp_path, capsys):
    out = str(tmp_path / "conv")
    code = main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "5/4",
         "--r-max", "5", "--out", out]
    )
    assert code == EXIT_CONVERGENCE
    assert "convergence failure" in capsys.readouterr().err


def test_precision_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv("STOKESLAB_PRECISION", "25")
    out = str(tmp_path / "env")
    assert main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1", "--out", out]
    ) == EXIT_OK
    _, rows = read_csv(out + ".csv")
    assert all(row[5] == "25" for row in rows)

    # an explicit flag beats the environment
    out2 = str(tmp_path / "env2")
    assert main(
        ["eval", "--n", "2", "--z", "3/10,-2/5", "--p-mod", "1",
         "--precision", "30", "--out", out2]
    ) == EXIT_OK
    _, rows2 = read_csv(out2 + ".csv")
    assert all(row[5] == "30" for row in rows2)


# -- verify --------------------------------------------------------------------------


def test_verify_passing_suite_exits_zero(tmp_path, capsys):
    out = str(tmp_path / "rep.json")
    code = main(["verify", "--suite", "monodromy", "--n", "2", "--out", out])
    assert code == EXIT_OK
    assert "monodromy" in capsys.readouterr().out
    report = read_json(out)
    assert set(report) == {"config", "records", "summary"}
    assert report["config"]["suite"] == "monodromy"
    assert report["summary"]["fail"] == 0
    assert report["summary"]["pass"] == len(report["records"]) > 0
    for record in report["records"]:
        assert set(record) == {
            "check_id", "parameters", "residual", "threshold", "passed"
        }


def test_verify_failing_suite_exits_one(tmp_path):
    # rank 2 has even-ray counterexamples to the collision characterization
    out = str(tmp_path / "stokes.json")
    code = main(["verify", "--suite", "stokes", "--n", "2", "--out", out])
    assert code == EXIT_CHECK_FAILED
    report = read_json(out)
    failed = [r for r in report["records"] if not r["passed"]]
    assert [r["check_id"] for r in failed] == ["stokes.collision_rays"]
    assert failed[0]["parameters"]["counterexamples"] == [
        [2, "-1/2"], [2, "0"], [2, "1/2"]
    ]


def test_verify_reports_are_reproducible(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    for out in (first, second):
        assert main(
            ["verify", "--suite", "monodromy", "--n", "3", "--seed", "2",
             "--out", str(out)]
        ) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()

    third = tmp_path / "c.json"
    assert main(
        ["verify", "--suite", "monodromy", "--n", "3", "--seed", "3",
         "--out", str(third)]
    ) == EXIT_OK
    assert first.read_bytes() != third.read_bytes()


def test_verify_rejects_numeric_suite_at_large_rank(tmp_path):
    out = str(tmp_path / "bad.json")
    code = main(["verify", "--suite", "solutions", "--n", "7", "--out", out])
    assert code == EXIT_USAGE
    assert not os.path.exists(out)


# -- table ---------------------------------------------------------------------------


def test_table_monodromy_trace_with_figure(tmp_path):
    out = str(tmp_path / "tr")
    code = main(["table", "--trace", "monodromy-residual", "--out", out])
    assert code == EXIT_OK
    header, rows = read_csv(out + ".csv")
    assert header == TABLE_HEADER
    assert len(rows) == 8
    assert {row[0] for row in rows} == {"monodromy-residual"}
    assert {row[3] for row in rows} == {"p_arg"}
    # residuals at the default parameters are tiny but not identically zero
    values = [float(row[5]) for row in rows]
    assert all(0 < v < 1e-25 for v in values)
    assert os.path.exists(out + "_monodromy-residual.png")


def test_table_gamma_trace_rows(tmp_path):
    out = str(tmp_path / "ga")
    code = main(
        ["table", "--trace", "gamma-ratio", "--no-figures", "--out", out]
    )
    assert code == EXIT_OK
    _, rows = read_csv(out + ".csv")
    assert len(rows) == 4
    assert not os.path.exists(out + "_gamma-ratio.png")
    # deviation shrinks roughly linearly with the flow-parameter modulus
    values = [float(row[5]) for row in rows]
    assert values[0] > values[1] > values[2] > values[3]
    ratios = [values[i] / values[i + 1] for i in range(3)]
    assert all(8 <= r <= 12 for r in ratios)


def test_table_empty_selection_writes_header_only(tmp_path):
    out = str(tmp_path / "empty")
    code = main(["table", "--out", out])
    assert code == EXIT_OK
    header, rows = read_csv(out + ".csv")
    assert header == TABLE_HEADER
    assert rows == []


def test_table_unknown_trace_rejected(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["table", "--trace", "nonsense", "--out", str(tmp_path / "x")])
    assert exc.value.code == 2


def test_unknown_subcommand_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
