"""Command-line interface: exit codes, artifacts, determinism."""

from __future__ import annotations

import json

import pytest

from lazyelicit.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFrontierCommand:
    def test_survivors_from_the_tiny_fixture(self, capsys):
        code, out, _ = run_cli(["frontier", "--plans", "fixtures/tiny.csv"], capsys)
        assert code == 0
        report = json.loads(out)
        assert report["surviving"] == [0, 2]
        assert report["surviving_labels"] == ["express", "scenic"]
        assert report["eliminated"] == [[1, 0]]

    def test_missing_file_is_a_runtime_error(self, capsys):
        code, _, err = run_cli(["frontier", "--plans", "no-such.csv"], capsys)
        assert code == 1
        assert "error" in err

    def test_malformed_csv(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("nope,a\n1,2\n")
        code, _, err = run_cli(["frontier", "--plans", str(bad)], capsys)
        assert code == 1
        assert "plan_id" in err


class TestSimulateCommand:
    def test_first_merge_reports_are_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for path in paths:
            code, _, _ = run_cli(
                [
                    "simulate",
                    "first-merge",
                    "--m", "12", "--n", "4",
                    "--trials", "25",
                    "--seed", "42",
                    "--out", str(path),
                ],
                capsys,
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_anytime_csv_is_byte_identical(self, tmp_path, capsys):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            code, _, _ = run_cli(
                [
                    "simulate",
                    "anytime",
                    "--m", "10", "--n", "3",
                    "--trials", "10",
                    "--seed", "7",
                    "--out", str(path),
                ],
                capsys,
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        header = paths[0].read_text().splitlines()[0]
        assert header == "merge_count,strategy,mean_frontier_size,trials"

    def test_invalid_dimensions_exit_code(self, capsys):
        code, _, err = run_cli(
            ["simulate", "anytime", "--m", "0", "--n", "3", "--trials", "5"], capsys
        )
        assert code == 1
        assert "m and n" in err

    def test_usage_error_is_exit_two(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["simulate", "first-merge", "--m", "10"])
        assert excinfo.value.code == 2


class TestElicitCommand:
    def test_scripted_session_emits_the_final_report(self, capsys):
        code, out, _ = run_cli(
            [
                "elicit",
                "--plans", "fixtures/dvt_plans.csv",
                "--attrs", "fixtures/dvt_attributes.json",
                "--script", "fixtures/dvt_answers.json",
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["history"][0]["ratio"] == pytest.approx(0.5)
        assert report["history"][0]["result_label"] == "BLEED/PE"
        assert len(report["surviving"]) == 3

    def test_replaying_the_emitted_history_reproduces_the_report(self, tmp_path, capsys):
        code, out, _ = run_cli(
            [
                "elicit",
                "--plans", "fixtures/dvt_plans.csv",
                "--attrs", "fixtures/dvt_attributes.json",
                "--script", "fixtures/dvt_answers.json",
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        script = tmp_path / "replay.json"
        script.write_text(json.dumps(report["answers"]))
        code, out2, _ = run_cli(
            [
                "elicit",
                "--plans", "fixtures/dvt_plans.csv",
                "--attrs", "fixtures/dvt_attributes.json",
                "--script", str(script),
            ],
            capsys,
        )
        assert code == 0
        assert json.loads(out2) == report

    def test_mismatched_schema_and_plans(self, tmp_path, capsys):
        plans = tmp_path / "p.csv"
        plans.write_text("plan_id,x,y\na,0.5,0.5\n")
        code, _, err = run_cli(
            [
                "elicit",
                "--plans", str(plans),
                "--attrs", "fixtures/dvt_attributes.json",
            ],
            capsys,
        )
        assert code == 1
        assert "do not match" in err
