"""
Command Line Interface for perturbed-interp.

Thresholds, certificates, reconstructions, basis tables and the verification
suite. Machine-readable JSON and CSV go to stdout (or --output); status lines
go to stderr.
"""

import argparse
import json
import logging
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

try:
    import tomllib  # Python 3.11+ built-in TOML parser
except ImportError:
    import tomli as tomllib  # Fallback for Python < 3.11

import colorama
import numpy as np
from colorama import Fore, Style

from . import export
from .bandlimited import (
    Band,
    kadec_bound,
    kadec_bound_complex,
    kadec_threshold,
    shannon_reconstruct,
    vaaler_bound,
    vaaler_reconstruct,
    vaaler_threshold,
)
from .errors import InterpolationError, UsageError, exit_code_for
from .rvbasis import basis_set
from .rvperturb import (
    DEFAULT_S,
    DEFAULT_THETA,
    UNIQUENESS_EXPONENT,
    RVOperatorConfig,
    gaussian_pair,
    hs_certificate,
    poisson_check,
    poisson_row,
    recover_values,
    sample_pair,
    schur_certificate,
)
from .samples import SampleCase
from .seqspace import RealSequence, WeightedSeqPair
from .verify import GROUPS, KNOWN_FAULTS, VerifySettings, verify_all

colorama.init()

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD_TOL = 1e-6
DEFAULT_SOLVE_TOL = 1e-10
DEFAULT_N = 64
DEFAULT_DELTA = 0.01


class Colors:
    """Color definitions for terminal output."""

    HEADER = Fore.CYAN + Style.BRIGHT
    SUCCESS = Fore.GREEN + Style.BRIGHT
    ERROR = Fore.RED + Style.BRIGHT
    WARNING = Fore.YELLOW + Style.BRIGHT
    INFO = Fore.BLUE + Style.BRIGHT

    RESET = Style.RESET_ALL


def status(message: str, color: str = Colors.INFO) -> None:
    print(f"{color}{message}{Colors.RESET}", file=sys.stderr)


def load_config(config_file: Path) -> Dict[str, Any]:
    """Load configuration from TOML file.

    Args:
        config_file: Path to TOML configuration file

    Returns:
        Dictionary with configuration parameters
    """
    try:
        with open(config_file, "rb") as f:
            config = tomllib.load(f)

        logger.info(f"Loaded configuration from {config_file}")
        return config
    except FileNotFoundError:
        status(f"Error: Configuration file not found: {config_file}", Colors.ERROR)
        sys.exit(2)
    except Exception as e:
        status(f"Error loading configuration file {config_file}: {e}", Colors.ERROR)
        sys.exit(2)


# (attribute, config section, config key, parser default)
CONFIG_OPTIONS = (
    ("tol", "bandlimited", "threshold_tol", DEFAULT_THRESHOLD_TOL),
    ("solve_tol", "bandlimited", "tol", DEFAULT_SOLVE_TOL),
    ("s", "certificate", "s", DEFAULT_S),
    ("theta", "certificate", "theta", DEFAULT_THETA),
    ("N", "certificate", "N", DEFAULT_N),
    ("delta", "certificate", "delta", DEFAULT_DELTA),
    ("exponent", "certificate", "exponent", UNIQUENESS_EXPONENT),
)


def merge_config_with_args(args, config: Dict[str, Any]) -> None:
    """Merge configuration file values with command line arguments.

    Command line arguments take precedence over config file values: a config
    value is used only where the argument still holds its parser default.

    Args:
        args: Parsed command line arguments
        config: Configuration dictionary from TOML file
    """
    for attr, section, key, default in CONFIG_OPTIONS:
        if not hasattr(args, attr) or getattr(args, attr) != default:
            continue
        value = config.get(section, {}).get(key)
        if value is not None:
            setattr(args, attr, type(default)(value))

    output_config = config.get("output", {})
    if not args.output and "output" in output_config:
        args.output = Path(output_config["output"])
    if not args.verbose and output_config.get("verbose", False):
        args.verbose = True


def setup_logging(verbose: bool = False):
    """Set up logging configuration."""
    if verbose:
        level = logging.DEBUG
        logging.basicConfig(
            level=level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            handlers=[logging.StreamHandler(sys.stderr)],
        )
    else:
        # Hide all log messages by setting level to CRITICAL
        logging.basicConfig(level=logging.CRITICAL, handlers=[logging.NullHandler()])


def parse_grid(spec: str) -> List[float]:
    """``min:max:step`` → min, min+step, … below max, then max itself.

    Points are generated in decimal arithmetic so that 0:4:0.1 hits 0.3 exactly.
    """
    try:
        lo, hi, step = (Decimal(part) for part in spec.split(":"))
    except (ValueError, InvalidOperation):
        raise UsageError(f"Grid must be min:max:step, got {spec!r}", {"grid": spec}) from None
    if step <= 0 or hi < lo:
        raise UsageError(f"Grid needs step > 0 and max ≥ min, got {spec!r}", {"grid": spec})
    points = []
    x = lo
    while x < hi:
        points.append(float(x))
        x = lo + step * len(points)
    points.append(float(hi))
    return points


def _output(args) -> Optional[str]:
    return str(args.output) if args.output else None


# Commands -----------------------------------------------------------------


def _threshold_report(
    args, bound: Callable[[float], float], threshold: Callable[[], float]
) -> Dict:
    report: Dict[str, Any] = {}
    if args.L is not None:
        value = bound(args.L)
        report.update({"L": args.L, "bound": value, "certified": value < 1})
    if args.threshold or args.L is None:
        report.update({"threshold": threshold(), "tol": args.tol})
    return report


def cmd_kadec(args) -> int:
    """Kadec-range bound at --L and the threshold L* where it reaches 1."""
    bound = kadec_bound_complex if args.complex else kadec_bound
    report = _threshold_report(
        args, bound, lambda: kadec_threshold(args.tol, complex_shifts=args.complex)
    )
    report["complex_shifts"] = args.complex
    export.write_json(report, _output(args))
    if "certified" in report:
        color = Colors.SUCCESS if report["certified"] else Colors.WARNING
        status(f"Kadec bound at L={args.L}: {report['bound']:.6g}", color)
    return 0


def cmd_vaaler(args) -> int:
    """Vaaler bound (samples with derivatives) at --L and its threshold."""
    report = _threshold_report(args, vaaler_bound, lambda: vaaler_threshold(args.tol))
    export.write_json(report, _output(args))
    return 0


def _read_json(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"Input file not found: {path}", {"input": str(path)}) from None
    except json.JSONDecodeError as e:
        raise UsageError(f"Input file {path} is not valid JSON: {e}", {"input": str(path)}) from e


def cmd_reconstruct(args) -> int:
    """Recover integer samples from a SampleSet JSON file and write them as CSV."""
    case = SampleCase.from_dict(_read_json(args.input))
    status(f"📥 Loaded {case.samples.window.size} samples ({case.samples.band.value})")
    if case.samples.band == Band.PW_PI:
        result = shannon_reconstruct(case.samples, args.solve_tol)
    else:
        result = vaaler_reconstruct(case.samples, args.solve_tol)
    truth = case.truth if case.has_truth else None
    derivs = case.truth_derivs if truth is not None else None
    frame = export.reconstruction_frame(result, truth, derivs)
    metadata = export.reconstruction_metadata(result)
    metadata["input"] = Path(args.input).name
    if truth is not None:
        interior = frame[frame["interior"]]
        metadata["interior_max_err"] = float(interior["err"].max())
    export.write_csv(frame, metadata, _output(args))
    status(f"✅ Reconstructed {len(frame)} values, bound {result.bound.bound:.4g}", Colors.SUCCESS)
    return 0


def _rv_config(args) -> RVOperatorConfig:
    return RVOperatorConfig.power_law(args.delta, args.exponent, args.N, args.s, args.theta)


def cmd_rv_basis(args) -> int:
    """Table of a_n and â_n on a grid."""
    if args.n < 0:
        raise UsageError(f"--n must be ≥ 0, got {args.n}", {"n": args.n})
    xs = parse_grid(args.grid)
    evaluator = basis_set(args.n)
    evaluator.show_progress = args.verbose
    frame = export.basis_frame(evaluator.table(args.n, xs))
    export.write_csv(frame, {"n": args.n, "grid": args.grid}, _output(args))
    return 0


def cmd_rv_certify(args) -> int:
    """Schur and Hilbert–Schmidt certificates for ‖I − T̃‖; exit 3 when neither is below 1."""
    cfg = _rv_config(args)
    certificates = {"hilbert_schmidt": hs_certificate(cfg)}
    if args.s - args.theta > 1.75 and args.s + args.theta > 0.75:
        certificates["schur"] = schur_certificate(cfg)
    else:
        status("Schur test skipped: needs s − θ > 7/4 and s + θ > 3/4", Colors.WARNING)
    best = min(certificates.values(), key=lambda c: c.bound)
    report = {
        "certificates": {name: c.to_dict() for name, c in certificates.items()},
        "best": best.method.value,
        "bound": best.bound,
        "certified": best.certified,
    }
    export.write_json(report, _output(args))
    if best.certified:
        status(f"✅ ‖I − T̃‖ ≤ {best.bound:.6g} ({best.method.value})", Colors.SUCCESS)
        return 0
    status(f"❌ No certificate below 1: best bound {best.bound:.6g}", Colors.ERROR)
    return 3


def _gaussian_pairs(cfg: RVOperatorConfig, scale: float):
    """Samples at the jittered nodes and the exact values at √k of e^{−π·scale·x²}."""

    def f(x):
        return np.exp(-np.pi * scale * np.asarray(x) ** 2)

    def f_hat(xi):
        return np.exp(-np.pi * np.asarray(xi) ** 2 / scale) / np.sqrt(scale)

    x, y = gaussian_pair(scale, cfg.N + 1)
    truth = WeightedSeqPair(RealSequence(cfg.window, x), RealSequence(cfg.window, y), cfg.s)
    return sample_pair(cfg, f, f_hat), truth


def cmd_rv_recover(args) -> int:
    """Recover f(√k), f̂(√k) from jittered samples; --input JSON {"x": [...], "y": [...]}."""
    cfg = _rv_config(args)
    truth = None
    if args.input:
        data = _read_json(args.input)
        try:
            samples = WeightedSeqPair(
                RealSequence(cfg.window, np.asarray(data["x"], dtype=float)),
                RealSequence(cfg.window, np.asarray(data["y"], dtype=float)),
                cfg.s,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"Recovery input needs x and y on 0..{cfg.N}: {e}") from e
    else:
        samples, truth = _gaussian_pairs(cfg, args.gaussian)
    result = recover_values(cfg, samples, args.solve_tol)
    metadata = {
        "certificate": result.certificate.to_dict(),
        "residual": result.residual,
        "source": "input" if args.input else f"gaussian {args.gaussian}",
    }
    export.write_csv(export.recovery_frame(result, truth), metadata, _output(args))
    return 0


def cmd_rv_poisson(args) -> int:
    """Poisson summation residual and the index-0 row for the Gaussian pair."""
    x, y = gaussian_pair(args.gaussian, args.count)
    report = {
        "gaussian": args.gaussian,
        "count": args.count,
        "residual": poisson_check(x, y),
        "row0": poisson_row(x, y),
    }
    export.write_json(report, _output(args))
    return 0


def cmd_verify_all(args, config: Dict[str, Any]) -> int:
    """Run the acceptance criteria; exit 1 if any fails."""
    only = [token for item in args.only or [] for token in item.split(",")]
    settings = VerifySettings.from_config(config)
    status("🔍 Running verification suite", Colors.HEADER)
    summary = verify_all(settings, only, args.inject_fault or [], show_progress=args.verbose)
    for result in summary.criteria:
        mark = "✅" if result.passed else "❌"
        color = Colors.SUCCESS if result.passed else Colors.ERROR
        status(
            f"{mark} [{result.criterion:2d}] {result.name}: "
            f"measured {result.measured:.4g}, tolerance {result.tolerance:.4g}",
            color,
        )
    export.write_json(summary, _output(args))
    print("=" * 80, file=sys.stderr)
    if summary.passed:
        status(f"🎉 RESULT: PASS - {len(summary.criteria)} criteria", Colors.SUCCESS)
        return 0
    status(f"❌ RESULT: FAIL - {', '.join(summary.failed)}", Colors.ERROR)
    return 1


# Parser -------------------------------------------------------------------


def _add_rv_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--delta", type=float, default=DEFAULT_DELTA, help="Jitter amplitude δ")
    parser.add_argument(
        "--exponent",
        type=float,
        default=UNIQUENESS_EXPONENT,
        help="Decay exponent p of |ε_n| ≤ δ(1+n)^(-p) (default: 1.25)",
    )
    parser.add_argument("--s", type=float, default=DEFAULT_S, help="Weight exponent s (default: 2)")
    parser.add_argument(
        "--theta", type=float, default=DEFAULT_THETA, help="Schur weight exponent θ (default: 0.05)"
    )
    parser.add_argument("--N", type=int, default=DEFAULT_N, help="Truncation 0..N (default: 64)")


def create_parser() -> argparse.ArgumentParser:
    """Create the command line argument parser."""
    parser = argparse.ArgumentParser(
        prog="perturbed-interp",
        description="Certified reconstruction from perturbed samples",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Kadec-range bound and threshold
  perturbed-interp kadec --L 0.2 --threshold

  # Reconstruct integer samples from a jittered sample file
  perturbed-interp reconstruct --input samples.json --output recovered.csv

  # Interpolation basis a_3 on a grid
  perturbed-interp rv basis --n 3 --grid 0:4:0.1

  # Certificate for the perturbed √n nodes
  perturbed-interp --config config.toml rv certify --delta 0.01 --N 64

  # Full acceptance suite, or one group of it
  perturbed-interp verify-all --only modular

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 precondition not met.
        """,
    )
    parser.add_argument("--config", type=Path, help="Path to TOML configuration file")
    parser.add_argument("--output", type=Path, help="Write JSON/CSV here instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="Enable verbose logging output")

    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("kadec", "Kadec-range bound for PW_π sampling"),
        ("vaaler", "Vaaler bound for PW_2π sampling with derivatives"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("--L", type=float, help="Jitter amplitude sup|ε_n|")
        sub.add_argument("--threshold", action="store_true", help="Report the threshold L*")
        sub.add_argument(
            "--tol", type=float, default=DEFAULT_THRESHOLD_TOL, help="Root tolerance (default: 1e-6)"
        )
        if name == "kadec":
            sub.add_argument(
                "--complex", action="store_true", help="Bound for complex jitter |ε_n| ≤ L"
            )

    sub = commands.add_parser("reconstruct", help="Recover f(k) from a SampleSet JSON file")
    sub.add_argument("--input", type=Path, required=True, help="SampleSet JSON file")
    sub.add_argument(
        "--tol", dest="solve_tol", type=float, default=DEFAULT_SOLVE_TOL, help="Residual tolerance"
    )

    rv = commands.add_parser("rv", help="Fourier interpolation from perturbed √n nodes")
    rv_commands = rv.add_subparsers(dest="rv_command", required=True)

    sub = rv_commands.add_parser("basis", help="Tabulate a_n and â_n")
    sub.add_argument("--n", type=int, required=True, help="Basis index n")
    sub.add_argument("--grid", required=True, help="min:max:step, max included as a final row")

    sub = rv_commands.add_parser("certify", help="Certificates for ‖I − T̃‖")
    _add_rv_options(sub)

    sub = rv_commands.add_parser("recover", help="Recover f(√k), f̂(√k) from jittered samples")
    _add_rv_options(sub)
    sub.add_argument("--input", type=Path, help="JSON with sample arrays x and y on 0..N")
    sub.add_argument(
        "--gaussian", type=float, default=1.0, help="Use e^(-π·a·x²) with this a (default: 1)"
    )
    sub.add_argument(
        "--tol", dest="solve_tol", type=float, default=DEFAULT_SOLVE_TOL, help="Residual tolerance"
    )

    sub = rv_commands.add_parser("poisson", help="Poisson summation residual of a Gaussian pair")
    sub.add_argument("--gaussian", type=float, default=1.0, help="Scale a of e^(-π·a·x²)")
    sub.add_argument("--count", type=int, default=400, help="Samples at √k, 0 ≤ k < count")

    sub = commands.add_parser("verify-all", help="Run the acceptance suite")
    sub.add_argument(
        "--only",
        action="append",
        help=f"Restrict to groups ({', '.join(GROUPS)}), criterion names or numbers",
    )
    sub.add_argument(
        "--inject-fault", action="append", choices=sorted(KNOWN_FAULTS), help=argparse.SUPPRESS
    )

    return parser


RV_COMMANDS = {
    "basis": cmd_rv_basis,
    "certify": cmd_rv_certify,
    "recover": cmd_rv_recover,
    "poisson": cmd_rv_poisson,
}


def run(args, config: Dict[str, Any]) -> int:
    if args.command == "kadec":
        return cmd_kadec(args)
    if args.command == "vaaler":
        return cmd_vaaler(args)
    if args.command == "reconstruct":
        return cmd_reconstruct(args)
    if args.command == "rv":
        return RV_COMMANDS[args.rv_command](args)
    return cmd_verify_all(args, config)


def main(argv: Optional[List[str]] = None):
    """Main CLI entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    # Load configuration file if provided
    config: Dict[str, Any] = {}
    if args.config:
        config = load_config(args.config)
        merge_config_with_args(args, config)

    setup_logging(args.verbose)

    exit_code = 3
    try:
        logger.info(f"Running {args.command}")
        exit_code = run(args, config)
    except InterpolationError as e:
        exit_code = exit_code_for(e)
        status(f"Error ({e.kind.value}): {e}", Colors.ERROR)
        if exit_code == 3:
            print(json.dumps(e.to_dict(), indent=2, sort_keys=True, default=str))
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        exit_code = 1
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        status(f"Fatal error: {e}", Colors.ERROR)
        if args.verbose:
            import traceback

            traceback.print_exc()
        exit_code = 3
    finally:
        sys.exit(exit_code)


if __name__ == "__main__":
    main()
