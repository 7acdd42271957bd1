"""JSON file formats and report rendering for the command line tools.

A matrix file is ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with the
entries row-major; a block file is ``{"n": n, "d": d, "blocks": [[matrix,
...], ...]}``; a partition file is ``{"A": matrix, "B": matrix, "C": matrix}``.
Map specs are either a fixture name (identity, transpose, choi3) or a JSON
object with Kraus or Choi data.  Reports serialize with sorted keys so that
identical inputs produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .maps import PositiveMap, choi_fixture, identity_map, map_from_choi, transpose_map
from .stormer import OperatorBlockMatrix

__all__ = [
    "block_from_payload",
    "block_to_payload",
    "load_block",
    "load_json",
    "load_map_spec",
    "load_matrix",
    "load_partition_blocks",
    "matrix_from_payload",
    "matrix_to_payload",
    "render_report",
]


def matrix_to_payload(m) -> dict:
    a = np.asarray(m, dtype=complex)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_payload(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError("matrix payload must be a JSON object")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"matrix payload missing or malformed field: {exc}") from exc
    if rows < 1 or cols < 1:
        raise InputError("matrix dimensions must be positive")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError(f"matrix data must hold {rows * cols} entries")
    out = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(data):
        if not isinstance(entry, list) or len(entry) != 2:
            raise InputError(f"entry {i} must be a [re, im] pair")
        re, im = entry
        if not all(isinstance(v, (int, float)) for v in (re, im)):
            raise InputError(f"entry {i} must hold numbers")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InputError(f"entry {i} is not finite")
        out[i] = complex(re, im)
    return out.reshape(rows, cols)


def block_to_payload(x: OperatorBlockMatrix) -> dict:
    return {
        "n": x.n,
        "d": x.d,
        "blocks": [
            [matrix_to_payload(x.blocks[i, j]) for j in range(x.n)] for i in range(x.n)
        ],
    }


def block_from_payload(obj) -> OperatorBlockMatrix:
    if not isinstance(obj, dict):
        raise InputError("block payload must be a JSON object")
    try:
        n, d = int(obj["n"]), int(obj["d"])
        rows = obj["blocks"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"block payload missing or malformed field: {exc}") from exc
    if n < 1 or d < 1:
        raise InputError("block counts must be positive")
    if not isinstance(rows, list) or len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"blocks must be an {n} x {n} nested list")
    blocks = np.empty((n, n, d, d), dtype=complex)
    for i in range(n):
        for j in range(n):
            m = matrix_from_payload(rows[i][j])
            if m.shape != (d, d):
                raise InputError(f"block ({i},{j}) must be {d} x {d}, got {m.shape}")
            blocks[i, j] = m
    return OperatorBlockMatrix(blocks)


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_payload(load_json(path))


def load_block(path) -> OperatorBlockMatrix:
    return block_from_payload(load_json(path))


def load_partition_blocks(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    obj = load_json(path)
    if not isinstance(obj, dict) or not all(key in obj for key in ("A", "B", "C")):
        raise InputError("partition file must hold matrix payloads under A, B, C")
    return (
        matrix_from_payload(obj["A"]),
        matrix_from_payload(obj["B"]),
        matrix_from_payload(obj["C"]),
    )


def load_map_spec(spec: str) -> PositiveMap:
    """A fixture name, or a path to a JSON map spec."""
    if spec == "identity":
        return identity_map()
    if spec == "transpose":
        return transpose_map()
    if spec == "choi3":
        return choi_fixture()
    obj = load_json(spec)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError("map spec must be a JSON object with a 'kind' field")
    kind = obj["kind"]
    if kind == "named":
        return load_map_spec(obj.get("name", ""))
    if kind == "kraus":
        cp = [matrix_from_payload(k) for k in obj.get("cp", [])]
        cocp = [matrix_from_payload(k) for k in obj.get("cocp", [])]
        if not cp and not cocp:
            raise InputError("kraus map spec needs at least one operator")
        try:
            return PositiveMap(kind="sum", kraus_cp=tuple(cp), kraus_cocp=tuple(cocp))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if kind == "choi":
        try:
            return map_from_choi(
                matrix_from_payload(obj["choi"]), int(obj["input_dim"])
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed choi map spec: {exc}") from exc
    raise InputError(f"unknown map spec kind {kind!r}")


def _render_value(value, indent: str) -> str:
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            inner = _render_value(value[key], indent + "  ")
            lines.append(f"{indent}{key}: {inner}" if "\n" not in inner else f"{indent}{key}:\n{inner}")
        return "\n".join(lines)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return json.dumps(value)
    return str(value)


def render_report(report: dict, as_json: bool) -> str:
    """Deterministic rendering; JSON mode emits sorted keys."""
    if as_json:
        return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
    lines = [f"command: {report['command']}", f"verdict: {report['verdict']}"]
    metrics = report.get("metrics") or {}
    if metrics:
        lines.append("metrics:")
        for key in sorted(metrics):
            lines.append(f"  {key} = {_render_value(metrics[key], '')}")
    artifacts = report.get("artifacts") or {}
    if artifacts:
        lines.append(f"artifacts: {', '.join(sorted(artifacts))} (use --json for values)")
    lines.append(f"seed: {report.get('seed')}")
    tol = report.get("tolerance") or {}
    lines.append(
        "tolerance: abs={abs_eps} rel={rel_eps} rcond={rcond}".format(**tol)
        if tol
        else "tolerance: default"
    )
    return "\n".join(lines) + "\n"
