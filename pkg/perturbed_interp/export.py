"""
JSON and CSV rendering of reports, certificates, reconstructions and basis tables.

JSON is written with sorted keys and CSV with ``#`` metadata lines ahead of the
header, so the same inputs always produce the same bytes.
"""

import dataclasses
import json
import logging
import math
import sys
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from .bandlimited import ReconstructionResult
from .rvperturb import RecoveryResult
from .seqspace import RealSequence, WeightedSeqPair

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def jsonable(value: Any) -> Any:
    """Convert dataclasses, enums and numpy values into plain JSON types."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return jsonable(dataclasses.asdict(value))
    if hasattr(value, "to_dict") and not isinstance(value, dict):
        return jsonable(value.to_dict())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    return value


def to_json(value: Any) -> str:
    return json.dumps(jsonable(value), indent=2, sort_keys=True) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info(f"Results saved to {output}")


def write_json(value: Any, output: Optional[str] = None) -> None:
    """Write ``value`` as JSON to ``output``, or to stdout."""
    _emit(to_json(value), output)


def to_csv(frame: pd.DataFrame, metadata: Optional[Dict[str, Any]] = None) -> str:
    """CSV text with one ``# key: value`` line per metadata entry before the header."""
    lines = []
    for key, value in (metadata or {}).items():
        rendered = json.dumps(jsonable(value), sort_keys=True)
        lines.append(f"# {key}: {rendered}\n")
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return "".join(lines) + body


def write_csv(
    frame: pd.DataFrame, metadata: Optional[Dict[str, Any]] = None, output: Optional[str] = None
) -> None:
    _emit(to_csv(frame, metadata), output)


def read_csv(path: str) -> pd.DataFrame:
    """Read a CSV written by ``write_csv``, skipping its metadata lines."""
    return pd.read_csv(path, comment="#")


# Frames -------------------------------------------------------------------


def reconstruction_frame(
    result: ReconstructionResult,
    truth: Optional[RealSequence] = None,
    truth_derivs: Optional[RealSequence] = None,
) -> pd.DataFrame:
    """Columns k, f_rec (and fprime_rec); with truth also f_true, err and interior."""
    w = result.values.window
    frame = pd.DataFrame({"k": w.indices(), "f_rec": result.values.values})
    if result.derivs is not None:
        frame["fprime_rec"] = result.derivs.values
    if truth is None:
        return frame
    interior = result.interior()
    frame["f_true"] = truth.values
    err = np.abs(result.values.values - truth.values)
    if result.derivs is not None and truth_derivs is not None:
        frame["fprime_true"] = truth_derivs.values
        err = np.maximum(err, np.abs(result.derivs.values - truth_derivs.values))
    frame["err"] = err
    frame["interior"] = (frame["k"] >= interior.lo) & (frame["k"] <= interior.hi)
    return frame


def reconstruction_metadata(result: ReconstructionResult) -> Dict[str, Any]:
    return {
        "band": "pw_2pi" if result.derivs is not None else "pw_pi",
        "bound": result.bound.to_dict(),
        "certificate": result.certificate.to_dict(),
        "residual": result.residual,
    }


def recovery_frame(result: RecoveryResult, truth: Optional[WeightedSeqPair] = None) -> pd.DataFrame:
    """Columns k, f_rec, fhat_rec; with truth also f_true, fhat_true and err."""
    pair = result.pair
    frame = pd.DataFrame(
        {"k": pair.window.indices(), "f_rec": pair.x.values, "fhat_rec": pair.y.values}
    )
    if truth is not None:
        frame["f_true"] = truth.x.values
        frame["fhat_true"] = truth.y.values
        frame["err"] = np.maximum(
            np.abs(pair.x.values - truth.x.values), np.abs(pair.y.values - truth.y.values)
        )
    return frame


def basis_frame(table: Dict[str, np.ndarray]) -> pd.DataFrame:
    """Columns x, a, a_hat from ``BasisSet.table``."""
    return pd.DataFrame({"x": table["x"], "a": table["a"], "a_hat": table["a_hat"]})
