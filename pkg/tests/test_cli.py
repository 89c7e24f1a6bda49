"""
Tests for the perturbed-interp command line interface.
"""

import argparse
import json
import logging
from pathlib import Path

import pytest

from perturbed_interp import cli
from perturbed_interp.errors import UsageError
from perturbed_interp.export import read_csv
from perturbed_interp.samples import FIXTURE_DIR, jittered_sinc_case

logger = logging.getLogger(__name__)

FIXTURES = Path(cli.__file__).parent / FIXTURE_DIR


def run_cli(argv):
    """Run ``main`` and return its exit code."""
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    return exc.value.code


def test_parse_grid():
    """min:max:step includes both ends and hits decimal points exactly."""
    grid = cli.parse_grid("0:4:0.1")
    assert len(grid) == 41
    assert grid[0] == 0.0 and grid[-1] == 4.0
    assert 0.3 in grid
    assert cli.parse_grid("0:1:0.3") == [0.0, 0.3, 0.6, 0.9, 1.0]
    logger.info("✓ Grid parsing")

    for bad in ("0:4", "a:b:c", "0:4:0", "4:0:0.1"):
        with pytest.raises(UsageError):
            cli.parse_grid(bad)


def test_kadec(capsys):
    """Bound at L and the threshold, with range errors mapped to exit 2."""
    assert run_cli(["kadec", "--L", "0.2", "--threshold"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["certified"] is True
    assert 0.239 < report["threshold"] < 0.245
    assert report["complex_shifts"] is False
    logger.info("✓ kadec --L 0.2 --threshold")

    assert run_cli(["kadec", "--L", "0.6"]) == 2
    logger.info("✓ kadec --L 0.6 rejected")


def test_verbose_keeps_stdout_clean(capsys, monkeypatch):
    """With --verbose, log records go to stderr and stdout still parses as JSON."""
    monkeypatch.setattr(logging.root, "handlers", [])
    monkeypatch.setattr(logging.root, "level", logging.root.level)
    assert run_cli(["--verbose", "kadec", "--L", "0.2"]) == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["L"] == 0.2
    assert "Running kadec" in captured.err
    logger.info("✓ Verbose logging stays on stderr")


def test_vaaler(capsys):
    assert run_cli(["vaaler"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert 0.111 < report["threshold"] < 0.12
    assert "bound" not in report


def test_reconstruct_fixtures(capsys, tmp_path):
    """The zero-jitter file reconstructs; the over-threshold file is refused."""
    output = tmp_path / "recovered.csv"
    code = run_cli(
        ["--output", str(output), "reconstruct", "--input", str(FIXTURES / "zero_jitter.json")]
    )
    assert code == 0
    frame = read_csv(str(output))
    assert list(frame["k"]) == list(range(-8, 9))
    assert frame["err"].max() < 1e-10
    assert output.read_text().startswith("# ")
    logger.info("✓ Zero-jitter reconstruction")

    capsys.readouterr()
    code = run_cli(["reconstruct", "--input", str(FIXTURES / "over_threshold.json")])
    assert code == 3
    diagnostic = json.loads(capsys.readouterr().out)
    assert diagnostic["error"] == "not_certified"
    logger.info("✓ Over-threshold file refused with a diagnostic")

    assert run_cli(["reconstruct", "--input", str(tmp_path / "missing.json")]) == 2


def test_reconstruct_jittered(tmp_path):
    """A generated jittered sinc case recovers its coefficients in the interior."""
    case = jittered_sinc_case(L=0.2, half_width=60, signal_half_width=15, seed=3)
    source = tmp_path / "jittered.json"
    source.write_text(json.dumps(case.to_dict()))
    output = tmp_path / "jittered.csv"

    assert run_cli(["--output", str(output), "reconstruct", "--input", str(source)]) == 0
    frame = read_csv(str(output))
    interior = frame[frame["interior"]]
    assert interior["err"].max() < 1e-6
    logger.info("✓ Jittered sinc case through the CLI")


def test_rv_poisson(capsys):
    assert run_cli(["rv", "poisson", "--gaussian", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["residual"] < 1e-12
    assert report["row0"] == pytest.approx(1.0, abs=1e-12)


def test_verify_modular_group(capsys):
    """verify-all --only modular runs criteria 4 and 5."""
    assert run_cli(["verify-all", "--only", "modular"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert [c["criterion"] for c in summary["criteria"]] == [4, 5]
    assert summary["passed"] is True
    logger.info("✓ verify-all --only modular")


def test_verify_injected_fault(capsys):
    """A corrupted q-expansion fails its criterion and the run exits 1."""
    code = run_cli(["verify-all", "--only", "lambda_qseries", "--inject-fault", "lambda-qseries"])
    assert code == 1
    summary = json.loads(capsys.readouterr().out)
    assert summary["failed"] == ["lambda_qseries"]
    logger.info("✓ Injected fault detected")


def test_verify_unknown_group(capsys):
    """Unknown groups exit 2; --help names every group, basis included."""
    assert run_cli(["verify-all", "--only", "bogus"]) == 2
    capsys.readouterr()
    assert run_cli(["verify-all", "--help"]) == 0
    help_text = " ".join(capsys.readouterr().out.split())
    for group in ("bandlimited", "basis", "hilbert", "modular", "rv"):
        assert group in help_text


def test_usage_errors():
    """argparse rejects missing subcommands and bad types with exit 2."""
    assert run_cli([]) == 2
    assert run_cli(["kadec", "--L", "abc"]) == 2
    assert run_cli(["rv", "basis", "--n", "2", "--grid", "0:1"]) == 2


def test_merge_config_with_args():
    """Config values fill parser defaults; explicit arguments win."""
    config = {"certificate": {"N": 32, "delta": 0.005}, "output": {"verbose": True}}
    args = argparse.Namespace(
        N=cli.DEFAULT_N, delta=0.02, s=2.0, theta=0.05, output=None, verbose=False
    )
    cli.merge_config_with_args(args, config)
    assert args.N == 32
    assert args.delta == 0.02
    assert args.verbose is True
    assert args.output is None
    logger.info("✓ Config merge")


def test_missing_config_file(tmp_path):
    assert run_cli(["--config", str(tmp_path / "absent.toml"), "vaaler"]) == 2


@pytest.mark.slow
def test_rv_basis_table(tmp_path):
    output = tmp_path / "a2.csv"
    assert run_cli(["--output", str(output), "rv", "basis", "--n", "2", "--grid", "0:2:0.5"]) == 0
    frame = read_csv(str(output))
    assert list(frame.columns) == ["x", "a", "a_hat"]
    assert list(frame["x"]) == [0.0, 0.5, 1.0, 1.5, 2.0]
    # a_2(0) = â_2(0) = 0, a_2(1) = 0
    assert abs(frame["a"][0]) < 1e-6 and abs(frame["a_hat"][0]) < 1e-6
    assert abs(frame["a"][2]) < 1e-6


@pytest.mark.slow
def test_rv_certify(capsys):
    assert run_cli(["rv", "certify", "--N", "12"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report["certificates"]) == {"hilbert_schmidt", "schur"}
    assert report["certified"] is True
    assert report["bound"] < 1.0
