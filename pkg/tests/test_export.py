"""
Tests for JSON and CSV rendering.
"""

import json
import logging
import math

import numpy as np
import pandas as pd

from perturbed_interp.errors import NotCertifiedError
from perturbed_interp.export import jsonable, read_csv, to_csv, to_json, write_csv
from perturbed_interp.linop import NormMethod
from perturbed_interp.samples import SampleCase, load_fixture

logger = logging.getLogger(__name__)


def test_jsonable():
    """numpy scalars, arrays, enums and non-finite floats become plain JSON values."""
    value = {
        "a": np.float64(1.5),
        "b": np.arange(3),
        "c": NormMethod.SCHUR,
        "d": math.nan,
        "e": np.bool_(True),
        "f": NotCertifiedError("bound 1.2", {"bound": 1.2}),
    }
    out = jsonable(value)
    assert out["a"] == 1.5
    assert out["b"] == [0, 1, 2]
    assert out["c"] == "schur"
    assert out["d"] == "nan"
    assert out["e"] is True
    assert out["f"]["error"] == "not_certified"
    json.dumps(out)
    logger.info("✓ JSON conversion")


def test_json_is_sorted():
    text = to_json({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")


def test_csv_metadata_lines(tmp_path):
    """Metadata precede the header as ``# key: value`` lines and are skipped on read."""
    frame = pd.DataFrame({"k": [0, 1], "f_rec": [0.1, 1.0 / 3.0]})
    text = to_csv(frame, {"residual": 1e-14, "band": "pw_pi"})
    lines = text.splitlines()
    assert lines[0] == "# residual: 1e-14"
    assert lines[1] == '# band: "pw_pi"'
    assert lines[2] == "k,f_rec"
    assert lines[4] == "1,0.33333333333333331"

    path = tmp_path / "frame.csv"
    write_csv(frame, {"residual": 1e-14}, str(path))
    restored = read_csv(str(path))
    assert restored["f_rec"][1] == 1.0 / 3.0
    logger.info("✓ CSV metadata and full precision")


def test_sample_case_round_trip():
    """Shipped fixtures load into sample cases with their truth values."""
    case = SampleCase.from_dict(load_fixture("zero_jitter"))
    assert case.has_truth
    assert case.samples.window.size == 17
    restored = SampleCase.from_dict(json.loads(json.dumps(case.to_dict())))
    np.testing.assert_array_equal(restored.truth.values, case.truth.values)

    bare = SampleCase.from_dict(load_fixture("over_threshold"))
    assert not bare.has_truth
