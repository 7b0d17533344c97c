import json

import pytest

from akrwalk.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, build_parser, main


def test_verify_block_k9(capsys):
    assert main(["verify", "--n", "16", "--placement", "block", "--k", "9"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS adjacent-pair-invariant" in out
    assert "PASS per-parts-equal" in out and "PASS out-parts-equal" in out
    assert "FAIL" not in out


def test_run_single(tmp_path, capsys):
    code = main(["run", "--n", "16", "--placement", "single", "--x", "3", "--y", "5", "--out", str(tmp_path)])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "t_peak=" in out and "p_peak=" in out
    assert (tmp_path / "n16_single_x3_y5.csv").exists()


def test_compare_k4_identical(capsys):
    assert main(["compare", "--mode", "filled-perimeter", "--n", "16", "--k", "4"]) == EXIT_OK
    assert "states identical, c(k)=0" in capsys.readouterr().out


def test_compare_grouped(capsys):
    assert main(["compare", "--mode", "grouped-distributed", "--n", "16", "--k", "4"]) == EXIT_OK
    assert "step ratio" in capsys.readouterr().out


def test_sweep_with_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "exp.ini"
    cfg.write_text("[grid]\nn = 8\n[placement]\nkind = block\nk = 4\n[sweep]\nmode = single\n")
    out = tmp_path / "out"
    code = main(["sweep", "--config", str(cfg), "--n-values", "8,12", "--k-values", "4,9", "--out", str(out)])
    assert code == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["runs"]) == 4
    assert manifest["config"]["sweep_n"] == [8, 12]


def test_usage_errors(capsys):
    assert main(["run", "--placement", "single"]) == EXIT_USAGE
    assert main(["run", "--n", "8", "--placement", "block", "--locations", "0,0"]) == EXIT_USAGE
    assert main(["run", "--n", "8", "--placement", "distributed", "--k", "9"]) == EXIT_USAGE
    assert main(["compare", "--mode", "single", "--n", "8"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["run", "--n", "x"])
    assert exc.value.code == EXIT_USAGE


def test_config_conflict_rejected(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[grid]\nn = 8\n[placement]\nkind = custom\nlocations = 0,0; 1,0\n")
    assert main(["run", "--config", str(cfg), "--placement", "block", "--out", str(tmp_path)]) == EXIT_USAGE
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK


def test_io_error(tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    assert main(["run", "--n", "4", "--out", str(blocker / "x")]) == EXIT_IO


def test_verification_failure_exit_code(monkeypatch, capsys):
    from akrwalk import cli
    from akrwalk.verify import ClaimResult, Report

    failing = Report("fake", {}, [ClaimResult("c", "s", False, 0, 1.0, 0.0)])
    monkeypatch.setattr(cli, "verification_suite", lambda *a, **k: [failing])
    assert main(["verify", "--n", "4"]) == EXIT_VERIFY


@pytest.mark.parametrize(
    "command, flags",
    [
        ("run", ["--config", "--n", "--horizon", "--out", "--k", "--x", "--y", "--placement", "--locations"]),
        ("sweep", ["--n-values", "--k-values", "--mode", "--workers", "--config"]),
        ("verify", ["--placement", "--k", "--n", "--horizon"]),
        ("compare", ["--mode", "--n", "--k", "--out"]),
    ],
)
def test_help_lists_flags(command, flags, capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([command, "--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for flag in flags:
        assert flag in text
