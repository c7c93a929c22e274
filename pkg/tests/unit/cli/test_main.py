"""Tests for the argument parser and the main entry point."""

import json

import pytest

import main
from src.shared.logs.logger import UnifiedLogger


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    UnifiedLogger.configure()


class TestBuildParser:
    """Tests for build_parser."""

    def test_unset_flags_are_absent(self):
        args = vars(main.build_parser().parse_args(["verify"]))
        assert args == {"subcommand": "verify"}

    def test_flags_map_to_run_config_fields(self, temp_dir):
        args = vars(
            main.build_parser().parse_args(
                ["sweep", "--steps-list", "5", "10", "20", "--with-reference", "--out", str(temp_dir / "s.csv")]
            )
        )
        assert args["steps_list"] == [5, 10, 20]
        assert args["with_reference"] is True

    def test_bare_fixed_ratio_uses_configured_default(self):
        assert vars(main.build_parser().parse_args(["sweep", "--fixed-ratio"]))["fixed_ratio"] == 1e-3
        assert vars(main.build_parser().parse_args(["sweep", "--fixed-ratio", "0.01"]))["fixed_ratio"] == 0.01

    def test_fixed_ratio_default_from_environment(self, monkeypatch):
        from src.shared.config import reset_config

        monkeypatch.setenv("SWEEP_FIXED_RATIO", "0.05")
        reset_config()
        assert vars(main.build_parser().parse_args(["sweep", "--fixed-ratio"]))["fixed_ratio"] == 0.05

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            main.build_parser().parse_args([])

    def test_algorithm_choices(self):
        with pytest.raises(SystemExit):
            main.build_parser().parse_args(["simulate", "--algorithm", "3"])


class TestMain:
    """Tests for main()."""

    def test_verify(self, temp_dir):
        out = temp_dir / "report.json"
        assert main.main(["verify", "--trials", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["trials"] == 2

    def test_invalid_dimension(self, temp_dir):
        assert main.main(["verify", "--dim", "99", "--out", str(temp_dir / "r.json")]) == 2

    def test_run_file_and_flags(self, temp_dir):
        run_file = temp_dir / "run.yaml"
        run_file.write_text("trials: 5\nseed: 11\n")
        out = temp_dir / "report.json"
        assert main.main(["verify", "--config", str(run_file), "--trials", "2", "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["trials"] == 2
        assert report["seed"] == 11

    def test_verbose_flag(self, temp_dir, capsys):
        assert main.main(["verify", "-v", "--trials", "1", "--out", str(temp_dir / "r.json")]) == 0
        assert "lemma1_jump" in capsys.readouterr().out
