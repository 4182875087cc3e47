"""Result files: density-matrix JSON format, result envelopes with full
provenance, audit CSV emission, and atomic writes.
"""

from __future__ import annotations

import datetime
import io
import json
import os
import tempfile
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .errors import ContractViolation
from .records import AuditRecord
from .state_zoo import StateDescriptor
from .tensor_core import DensityMatrix, Dims
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "save_density_matrix",
    "load_density_matrix",
    "result_envelope",
    "to_json_text",
    "write_text_atomic",
    "audit_records_to_csv",
    "sweep_rows_to_csv",
    "format_float",
]


def format_float(x: float) -> str:
    """17 significant digits: lossless double round-trip in decimal text."""
    return f"{float(x):.17g}"


def save_density_matrix(path: str, rho: DensityMatrix) -> None:
    obj = {
        "dims": list(rho.dims.factors),
        "re": [[float(v) for v in row] for row in rho.entries.real],
        "im": [[float(v) for v in row] for row in rho.entries.imag],
    }
    write_text_atomic(path, to_json_text(obj))


def load_density_matrix(path: str, *, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Load and validate a density matrix file; failures name the broken invariant."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    for key in ("dims", "re", "im"):
        if key not in obj:
            raise ContractViolation(f"density matrix file is missing the {key!r} field")
    dims = Dims(tuple(obj["dims"]))
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    n = dims.total
    for name, arr in (("re", re), ("im", im)):
        if arr.shape == (n * n,):
            arr = arr.reshape(n, n)
        if arr.shape != (n, n):
            raise ContractViolation(
                f"{name!r} must be an {n}x{n} matrix (row-major), got shape {arr.shape}")
    re = re.reshape(n, n)
    im = im.reshape(n, n)
    return DensityMatrix(re + 1j * im, dims, tol=tol)


def result_envelope(kind: str, payload: dict, *, seed: Optional[int],
                    state: Optional[StateDescriptor] = None,
                    config: Optional[dict] = None,
                    tol: Tolerances = DEFAULT) -> dict:
    """Wrap a result with everything needed to reproduce it bit-identically.

    The timestamp is the only non-deterministic field; reproducibility
    comparisons exclude it.
    """
    return {
        "tool": {"name": "purecorr", "version": __version__},
        "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "kind": kind,
        "seed": seed,
        "state": state.to_json_dict() if state else None,
        "config": config,
        "tolerances": tol.as_dict(),
        "result": payload,
    }


def to_json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def audit_records_to_csv(records: Sequence[AuditRecord]) -> str:
    """Stable-column CSV: claim_id, family, param_1.., lhs, rhs, margin,
    verdict, certification, seed."""
    n_params = max((len(r.state.params) if r.state else 0 for r in records), default=0)
    header = (["claim_id", "family"]
              + [f"param_{i + 1}" for i in range(n_params)]
              + ["lhs", "rhs", "margin", "verdict", "certification", "seed"])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in records:
        params = list(r.state.params) if r.state else []
        params += [None] * (n_params - len(params))
        row = ([r.claim_id, r.state.family if r.state else ""]
               + params
               + [r.lhs, r.rhs, r.margin, r.verdict, r.certification, r.seed])
        buf.write(",".join(_csv_cell(c) for c in row) + "\n")
    return buf.getvalue()


def sweep_rows_to_csv(names: Sequence[str], rows: Sequence) -> str:
    """Plot-ready CSV for sweep rows of (params tuple, value)."""
    header = list(names) + ["delta_lb"]
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for params, value in rows:
        buf.write(",".join(format_float(v) for v in (*params, value)) + "\n")
    return buf.getvalue()
